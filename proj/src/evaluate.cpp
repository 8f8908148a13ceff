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

#include "vecstab/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vecstab/error.hpp"
#include "vecstab/parallel.hpp"
#include "vecstab/textio.hpp"

namespace vecstab {

namespace {

std::vector<std::string_view> split_ws(const std::string& s) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (pos < s.size()) {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        size_t start = pos;
        while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
        if (pos > start) fields.push_back(std::string_view(s).substr(start, pos - start));
    }
    return fields;
}

// Case-folds a test-set word with the corpus normalizer. Multi-token or
// empty results (after punctuation stripping) are rejected.
std::string fold_word(std::string_view raw, const std::filesystem::path& path) {
    auto tokens = normalize(raw);
    if (tokens.size() != 1) {
        raise(Errc::malformed_header, "test-set word '" + std::string(raw) +
                                          "' does not normalize to one token in " + path.string());
    }
    return std::move(tokens[0]);
}

}  // namespace

SimilarityTestSet SimilarityTestSet::load(const std::filesystem::path& path) {
    LineReader in(path);
    SimilarityTestSet set;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    bool first_content_line = true;
    while (in.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        double score = 0.0;
        const bool parses = fields.size() == 3 && try_parse_double(fields[2], score);
        if (!parses) {
            // an optional header line is tolerated once
            if (first_content_line) {
                first_content_line = false;
                continue;
            }
            raise(Errc::malformed_header, "bad similarity line: " + line);
        }
        first_content_line = false;
        if (!std::isfinite(score)) raise(Errc::non_finite_value, "non-finite score: " + line);
        Entry entry{fold_word(fields[0], path), fold_word(fields[1], path), score};
        auto key = entry.word1 <= entry.word2 ? std::make_pair(entry.word1, entry.word2)
                                              : std::make_pair(entry.word2, entry.word1);
        if (!seen.insert(key).second) {
            raise(Errc::duplicate_word,
                  "duplicate pair: " + entry.word1 + " / " + entry.word2);
        }
        set.entries.push_back(std::move(entry));
    }
    if (set.entries.empty()) raise(Errc::insufficient_data, "empty test set: " + path.string());
    return set;
}

AnalogyTestSet AnalogyTestSet::load(const std::filesystem::path& path) {
    LineReader in(path);
    AnalogyTestSet set;
    std::string line;
    uint32_t section = 0;
    bool have_section = false;
    while (in.next(line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == ':') {
            std::string name = line.substr(1);
            while (!name.empty() && (name.front() == ' ' || name.front() == '\t')) name.erase(0, 1);
            set.section_names.push_back(name.empty() ? "unnamed" : name);
            section = static_cast<uint32_t>(set.section_names.size() - 1);
            have_section = true;
            continue;
        }
        auto fields = split_ws(line);
        if (fields.size() != 4) {
            raise(Errc::malformed_header, "analogy lines need 4 words: " + line);
        }
        if (!have_section) {
            set.section_names.push_back("default");
            have_section = true;
        }
        Question q{fold_word(fields[0], path), fold_word(fields[1], path),
                   fold_word(fields[2], path), fold_word(fields[3], path), section};
        if (q.a == q.b) {
            raise(Errc::malformed_header, "analogy question with a == b: " + line);
        }
        set.questions.push_back(std::move(q));
    }
    if (set.questions.empty()) raise(Errc::insufficient_data, "empty test set: " + path.string());
    return set;
}

namespace {

std::vector<double> fractional_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        raise(Errc::bad_argument, "spearman inputs differ in length: " +
                                      std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    if (x.size() < 2) raise(Errc::insufficient_data, "spearman needs at least 2 points");
    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    const size_t n = rx.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mean_x += rx[i];
        mean_y += ry[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean_x;
        const double dy = ry[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        raise(Errc::insufficient_data, "zero rank variance; correlation undefined");
    }
    return sxy / std::sqrt(sxx * syy);
}

SimilarityResult eval_similarity(const EmbeddingSpace& space, const SimilarityTestSet& testset) {
    SimilarityResult result;
    result.pairs_total = testset.entries.size();
    std::vector<double> cosines, human;
    for (const auto& entry : testset.entries) {
        if (!space.contains(entry.word1) || !space.contains(entry.word2)) continue;
        cosines.push_back(space.cosine(entry.word1, entry.word2));
        human.push_back(entry.human_score);
    }
    result.pairs_used = cosines.size();
    result.coverage = result.pairs_total == 0
                          ? 0.0
                          : static_cast<double>(result.pairs_used) /
                                static_cast<double>(result.pairs_total);
    if (result.pairs_used < 2) {
        raise(Errc::insufficient_data,
              "only " + std::to_string(result.pairs_used) + " of " +
                  std::to_string(result.pairs_total) + " pairs usable (coverage " +
                  fmt_double(result.coverage, 6) + ")");
    }
    result.rho = spearman(cosines, human);
    return result;
}

namespace {

constexpr double kAnalogyEpsilon = 0.001;

uint32_t solve_analogy_ids(const EmbeddingSpace& space, uint32_t ia, uint32_t ia_star,
                           uint32_t ib) {
    const uint32_t v = space.size();
    double best_score = -1.0;
    uint32_t best = UINT32_MAX;
    for (uint32_t c = 0; c < v; ++c) {
        if (c == ia || c == ia_star || c == ib) continue;
        const double sb = (space.cosine_by_id(c, ib) + 1.0) / 2.0;
        const double sa_star = (space.cosine_by_id(c, ia_star) + 1.0) / 2.0;
        const double sa = (space.cosine_by_id(c, ia) + 1.0) / 2.0;
        const double score = sb * sa_star / (sa + kAnalogyEpsilon);
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    return best;
}

}  // namespace

std::string solve_analogy(const EmbeddingSpace& space, const std::string& a,
                          const std::string& a_star, const std::string& b) {
    if (space.size() < 4) raise(Errc::insufficient_data, "space too small for analogies");
    const uint32_t best =
        solve_analogy_ids(space, space.id_or_throw(a), space.id_or_throw(a_star),
                          space.id_or_throw(b));
    return space.word(best);
}

AnalogyResult eval_analogy(const EmbeddingSpace& space, const AnalogyTestSet& testset,
                           uint32_t threads) {
    AnalogyResult result;
    result.total = testset.questions.size();
    result.sections.resize(testset.section_names.size());
    for (size_t s = 0; s < testset.section_names.size(); ++s) {
        result.sections[s].name = testset.section_names[s];
    }

    const size_t n = testset.questions.size();
    // 0 = skipped, 1 = wrong, 2 = correct
    std::vector<uint8_t> outcome(n, 0);
    parallel_for(n, threads, [&](size_t qi) {
        const auto& q = testset.questions[qi];
        if (!space.contains(q.a) || !space.contains(q.a_star) || !space.contains(q.b) ||
            !space.contains(q.b_star) || space.size() < 4) {
            return;
        }
        const uint32_t predicted = solve_analogy_ids(
            space, space.id_or_throw(q.a), space.id_or_throw(q.a_star), space.id_or_throw(q.b));
        outcome[qi] = space.word(predicted) == q.b_star ? 2 : 1;
    });

    for (size_t qi = 0; qi < n; ++qi) {
        auto& sec = result.sections[testset.questions[qi].section];
        sec.total++;
        if (outcome[qi] == 0) continue;
        result.answered++;
        sec.answered++;
        if (outcome[qi] == 2) {
            result.correct++;
            sec.correct++;
        }
    }
    result.coverage = result.total == 0 ? 0.0
                                        : static_cast<double>(result.answered) /
                                              static_cast<double>(result.total);
    if (result.answered == 0) {
        raise(Errc::insufficient_data, "no analogy question answerable (coverage 0)");
    }
    result.accuracy =
        static_cast<double>(result.correct) / static_cast<double>(result.answered);
    return result;
}

namespace {

// Per-model, per-anchor top-n neighbor sets over a shared word intern table.
struct NeighborTables {
    std::vector<std::string> anchors_kept;
    size_t dropped = 0;
    // sets[m][a] = sorted interned word ids of model m's top-n for anchor a
    std::vector<std::vector<std::vector<uint32_t>>> sets;
};

NeighborTables build_neighbor_tables(std::span<const EmbeddingSpace> models,
                                     std::span<const std::string> anchors, uint32_t n,
                                     uint32_t threads) {
    if (models.size() < 2) raise(Errc::bad_argument, "need at least 2 models");
    for (const auto& m : models) {
        if (n >= m.size()) {
            raise(Errc::bad_argument, "n = " + std::to_string(n) +
                                          " must be below every model's vocabulary size");
        }
    }
    NeighborTables tables;
    for (const auto& anchor : anchors) {
        bool everywhere = true;
        for (const auto& m : models) {
            if (!m.contains(anchor)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) {
            tables.anchors_kept.push_back(anchor);
        } else {
            tables.dropped++;
        }
    }

    const size_t n_models = models.size();
    const size_t n_anchors = tables.anchors_kept.size();
    std::vector<std::vector<std::vector<std::string>>> raw(n_models);
    for (auto& per_model : raw) per_model.resize(n_anchors);

    std::vector<std::pair<size_t, size_t>> jobs;
    jobs.reserve(n_models * n_anchors);
    for (size_t m = 0; m < n_models; ++m) {
        for (size_t a = 0; a < n_anchors; ++a) jobs.emplace_back(m, a);
    }
    parallel_for(jobs.size(), threads, [&](size_t j) {
        const auto [m, a] = jobs[j];
        const auto& space = models[m];
        auto ids = space.most_similar_ids(space.id_or_throw(tables.anchors_kept[a]), n);
        auto& words = raw[m][a];
        words.reserve(ids.size());
        for (uint32_t id : ids) words.push_back(space.word(id));
    });

    // Intern neighbor words in a fixed traversal order.
    std::unordered_map<std::string, uint32_t> intern;
    tables.sets.resize(n_models);
    for (size_t m = 0; m < n_models; ++m) {
        tables.sets[m].resize(n_anchors);
        for (size_t a = 0; a < n_anchors; ++a) {
            auto& out = tables.sets[m][a];
            out.reserve(raw[m][a].size());
            for (auto& w : raw[m][a]) {
                auto [it, _] = intern.emplace(std::move(w), static_cast<uint32_t>(intern.size()));
                out.push_back(it->second);
            }
            std::sort(out.begin(), out.end());
        }
    }
    return tables;
}

// Mean Jaccard over anchors for the model subset with `leave_out` excluded
// (pass SIZE_MAX to use all models).
double mean_jaccard(const NeighborTables& tables, size_t leave_out) {
    const size_t n_models = tables.sets.size();
    const size_t n_anchors = tables.anchors_kept.size();
    if (n_anchors == 0) {
        raise(Errc::insufficient_data, "no anchor present in every model");
    }
    double sum = 0.0;
    std::unordered_map<uint32_t, uint32_t> counter;
    for (size_t a = 0; a < n_anchors; ++a) {
        counter.clear();
        uint32_t included = 0;
        for (size_t m = 0; m < n_models; ++m) {
            if (m == leave_out) continue;
            ++included;
            for (uint32_t w : tables.sets[m][a]) counter[w]++;
        }
        uint32_t inter = 0;
        for (const auto& [w, c] : counter) {
            if (c == included) ++inter;
        }
        sum += static_cast<double>(inter) / static_cast<double>(counter.size());
    }
    return sum / static_cast<double>(n_anchors);
}

}  // namespace

double jaccard_at_n(std::span<const EmbeddingSpace> models,
                    std::span<const std::string> anchors, uint32_t n,
                    size_t* anchors_dropped, uint32_t threads) {
    NeighborTables tables = build_neighbor_tables(models, anchors, n, threads);
    if (anchors_dropped) *anchors_dropped = tables.dropped;
    return mean_jaccard(tables, SIZE_MAX);
}

StabilityReport jackknife_stability(std::span<const EmbeddingSpace> models,
                                    std::span<const std::string> anchors, uint32_t n,
                                    uint32_t threads) {
    if (models.size() < 3) {
        raise(Errc::bad_argument, "jackknife needs at least 3 models, got " +
                                      std::to_string(models.size()));
    }
    NeighborTables tables = build_neighbor_tables(models, anchors, n, threads);
    StabilityReport report;
    report.n = n;
    report.anchors_used = tables.anchors_kept.size();
    report.anchors_dropped = tables.dropped;
    report.jackknife_values.resize(models.size());
    for (size_t i = 0; i < models.size(); ++i) {
        report.jackknife_values[i] = mean_jaccard(tables, i);
    }
    double sum = 0.0;
    for (double v : report.jackknife_values) sum += v;
    report.mean = sum / static_cast<double>(models.size());
    double ss = 0.0;
    for (double v : report.jackknife_values) {
        const double d = v - report.mean;
        ss += d * d;
    }
    report.stddev = std::sqrt(ss / static_cast<double>(models.size() - 1));
    return report;
}

std::vector<std::string> select_anchors(const Vocabulary& reference_vocab, size_t k,
                                        std::span<const EmbeddingSpace> models,
                                        size_t* dropped) {
    if (k > reference_vocab.size()) {
        raise(Errc::bad_argument, "anchor count " + std::to_string(k) +
                                      " exceeds the reference vocabulary size");
    }
    std::vector<std::string> anchors;
    size_t skipped = 0;
    for (uint32_t id = 0; id < reference_vocab.size() && anchors.size() < k; ++id) {
        const std::string& word = reference_vocab.word(id);
        bool everywhere = true;
        for (const auto& m : models) {
            if (!m.contains(word)) {
                everywhere = false;
                break;
            }
        }
        if (everywhere) {
            anchors.push_back(word);
        } else {
            ++skipped;
        }
    }
    if (dropped) *dropped = skipped;
    if (anchors.empty()) {
        raise(Errc::insufficient_data, "no anchor word present in every model");
    }
    return anchors;
}

}  // namespace vecstab
