//  Copyright 2026 The vecstab Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "support/synthcorpus.hpp"

#include <algorithm>
#include <cstdio>
#include <array>
#include <set>
#include <vector>

#include "vecstab/rng.hpp"
#include "vecstab/textio.hpp"

namespace vecstab::testsupport {

namespace {

// Cumulative Zipf(s = 1) table over ranks 1..n for inverse-CDF sampling.
std::vector<double> zipf_cdf(uint32_t n) {
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (uint32_t r = 0; r < n; ++r) {
        acc += 1.0 / static_cast<double>(r + 1);
        cdf[r] = acc;
    }
    for (double& x : cdf) x /= acc;
    return cdf;
}

uint32_t sample_cdf(const std::vector<double>& cdf, Xoshiro256pp& rng) {
    const double u = rng.next_double();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return static_cast<uint32_t>(cdf.size() - 1);
    return static_cast<uint32_t>(it - cdf.begin());
}

}  // namespace

std::string content_word(uint32_t topic, uint32_t rank) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "t%02uw%03u", topic, rank);
    return buf;
}

std::string function_word(uint32_t rank) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fw%03u", rank);
    return buf;
}

Corpus make_synthetic_corpus(const SynthConfig& config) {
    Xoshiro256pp rng(config.seed);
    const auto function_cdf = zipf_cdf(config.function_words);
    const auto content_cdf = zipf_cdf(config.content_words_per_topic);

    Corpus corpus;
    corpus.documents.reserve(config.n_docs);
    for (uint32_t d = 0; d < config.n_docs; ++d) {
        const uint32_t len =
            config.min_doc_len +
            static_cast<uint32_t>(rng.below(config.max_doc_len - config.min_doc_len + 1));
        const uint32_t main_topic = static_cast<uint32_t>(rng.below(config.n_topics));
        const uint32_t secondary_topic = static_cast<uint32_t>(rng.below(config.n_topics));

        Document doc;
        doc.id = "doc-" + std::to_string(d);
        doc.tokens.reserve(len);
        for (uint32_t t = 0; t < len; ++t) {
            if (rng.next_double() < config.function_prob) {
                doc.tokens.push_back(function_word(sample_cdf(function_cdf, rng)));
            } else {
                const uint32_t topic = rng.next_double() < config.secondary_topic_prob
                                           ? secondary_topic
                                           : main_topic;
                doc.tokens.push_back(content_word(topic, sample_cdf(content_cdf, rng)));
            }
        }
        corpus.total_tokens += doc.tokens.size();
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

void write_similarity_testset(const std::filesystem::path& path, const SynthConfig& config,
                              uint32_t n_pairs, uint32_t max_rank, uint64_t seed) {
    Xoshiro256pp rng(seed);
    LineWriter out(path);
    std::set<std::pair<std::string, std::string>> seen;
    uint32_t written = 0;
    uint32_t salt = 0;
    while (written < n_pairs) {
        const bool same_topic = (written % 2) == 0;
        const uint32_t topic_a = static_cast<uint32_t>(rng.below(config.n_topics));
        uint32_t topic_b = topic_a;
        if (!same_topic) {
            while (topic_b == topic_a) {
                topic_b = static_cast<uint32_t>(rng.below(config.n_topics));
            }
        }
        const uint32_t rank_a = static_cast<uint32_t>(rng.below(max_rank));
        uint32_t rank_b = static_cast<uint32_t>(rng.below(max_rank));
        if (same_topic && rank_b == rank_a) rank_b = (rank_b + 1) % max_rank;
        std::string w1 = content_word(topic_a, rank_a);
        std::string w2 = content_word(topic_b, rank_b);
        auto key = w1 <= w2 ? std::make_pair(w1, w2) : std::make_pair(w2, w1);
        if (!seen.insert(key).second) continue;
        // distinct scores: planted band plus a unique offset
        const double base = same_topic ? 7.0 : 1.5;
        const double score = base + 1.5 * rng.next_double() + 1e-7 * static_cast<double>(salt++);
        out.write_line(w1 + "\t" + w2 + "\t" + fmt_double(score, 10));
        ++written;
    }
    out.close();
}

void write_analogy_testset(const std::filesystem::path& path, const SynthConfig& config,
                           uint32_t n_questions, uint32_t max_rank, uint64_t seed) {
    Xoshiro256pp rng(seed);
    LineWriter out(path);
    out.write_line(": same-topic-pairs");
    std::set<std::array<uint32_t, 4>> seen;
    uint32_t written = 0;
    while (written < n_questions) {
        const uint32_t topic_a = static_cast<uint32_t>(rng.below(config.n_topics));
        uint32_t topic_b = topic_a;
        while (topic_b == topic_a) topic_b = static_cast<uint32_t>(rng.below(config.n_topics));
        const uint32_t rank_1 = static_cast<uint32_t>(rng.below(max_rank));
        uint32_t rank_2 = static_cast<uint32_t>(rng.below(max_rank));
        if (rank_2 == rank_1) rank_2 = (rank_2 + 1) % max_rank;
        if (!seen.insert({topic_a, topic_b, rank_1, rank_2}).second) continue;
        out.write_line(content_word(topic_a, rank_1) + " " + content_word(topic_a, rank_2) + " " +
                       content_word(topic_b, rank_1) + " " + content_word(topic_b, rank_2));
        ++written;
    }
    out.close();
}

}  // namespace vecstab::testsupport
