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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vecstab/corpus.hpp"
#include "vecstab/embedspace.hpp"

namespace vecstab {

struct SimilarityTestSet {
    struct Entry {
        std::string word1;
        std::string word2;
        double human_score;
    };
    std::vector<Entry> entries;

    // Whitespace/tab separated "word1 word2 score"; '#' comments and an
    // optional non-numeric header line are skipped; words are case-folded
    // with the corpus normalizer. Duplicate unordered pairs are rejected.
    static SimilarityTestSet load(const std::filesystem::path& path);
};

struct AnalogyTestSet {
    struct Question {
        std::string a, a_star, b, b_star;
        uint32_t section;
    };
    std::vector<Question> questions;
    std::vector<std::string> section_names;

    // Four words per line; lines starting with ':' open a named section.
    static AnalogyTestSet load(const std::filesystem::path& path);
};

// Spearman rank correlation: Pearson correlation of average fractional
// ranks. Throws on length mismatch, length < 2, or zero rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

struct SimilarityResult {
    double rho = 0.0;
    double coverage = 0.0;     // used / total
    size_t pairs_used = 0;
    size_t pairs_total = 0;
};

// Pairs with an out-of-vocabulary word are skipped; throws
// Errc::insufficient_data when fewer than 2 pairs remain.
SimilarityResult eval_similarity(const EmbeddingSpace& space,
                                 const SimilarityTestSet& testset);

// 3CosMul: argmax over candidates c (excluding a, a*, b) of
//   s(c,b) * s(c,a*) / (s(c,a) + eps),  s = (cos + 1) / 2,  eps = 0.001.
// Ties broken by row order. Throws Errc::unknown_word on OOV query words.
std::string solve_analogy(const EmbeddingSpace& space, const std::string& a,
                          const std::string& a_star, const std::string& b);

struct AnalogyResult {
    double accuracy = 0.0;     // correct / answered
    double coverage = 0.0;     // answered / total
    size_t answered = 0;
    size_t correct = 0;
    size_t total = 0;
    struct Section {
        std::string name;
        size_t answered = 0;
        size_t correct = 0;
        size_t total = 0;
    };
    std::vector<Section> sections;
};

// Questions with any OOV word are skipped (counted, never silently); exact
// string match against b*. Throws Errc::insufficient_data when nothing is
// answerable.
AnalogyResult eval_analogy(const EmbeddingSpace& space, const AnalogyTestSet& testset,
                           uint32_t threads = 1);

// Mean over anchors of |intersection| / |union| of the models' top-n
// most-similar sets. Anchors missing from any model are skipped and counted
// into *anchors_dropped. Requires >= 2 models.
double jaccard_at_n(std::span<const EmbeddingSpace> models,
                    std::span<const std::string> anchors, uint32_t n,
                    size_t* anchors_dropped = nullptr, uint32_t threads = 1);

struct StabilityReport {
    uint32_t n = 0;
    size_t anchors_used = 0;
    size_t anchors_dropped = 0;
    std::vector<double> jackknife_values;  // one per left-out model
    double mean = 0.0;
    double stddev = 0.0;                   // sample standard deviation
};

// Leave-one-model-out j@n. Requires >= 3 models.
StabilityReport jackknife_stability(std::span<const EmbeddingSpace> models,
                                    std::span<const std::string> anchors,
                                    uint32_t n = 10, uint32_t threads = 1);

// Walks the reference vocabulary in frequency order and collects words
// present in every model until k anchors are found; skipped words are
// counted into *dropped. Throws Errc::insufficient_data on an empty result.
std::vector<std::string> select_anchors(const Vocabulary& reference_vocab, size_t k,
                                        std::span<const EmbeddingSpace> models,
                                        size_t* dropped = nullptr);

}  // namespace vecstab
