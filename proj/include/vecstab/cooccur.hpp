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
#include <cstdlib>
#include <optional>
#include <string>

#include "vecstab/corpus.hpp"
#include "vecstab/sparse.hpp"

namespace vecstab {

enum class Strategy { none, probabilistic, weighted };

Strategy strategy_from_string(const std::string& name);  // none|prob|weight
std::string to_string(Strategy s);

struct SamplingConfig {
    uint32_t window_size = 5;        // tokens per side
    double freq_threshold = 1e-4;    // t in (0, 1]
    Strategy df_strategy = Strategy::none;
    Strategy ff_strategy = Strategy::none;
    std::optional<uint64_t> rng_seed;  // absent = entropy-seeded

    bool any_probabilistic() const noexcept {
        return df_strategy == Strategy::probabilistic ||
               ff_strategy == Strategy::probabilistic;
    }
    void validate() const;  // s >= 1, 0 < t <= 1
};

using CooccurrenceMatrix = SparseMatrix;

// Distance between token positions i and j (i != j).
inline uint64_t token_distance(uint64_t i, uint64_t j) noexcept {
    return i > j ? i - j : j - i;
}

// (s + 1 - d) / s for 1 <= d <= s.
double distance_factor(uint32_t window_size, uint64_t distance);

// sqrt(t / r) when r > t, else 1.
double frequency_factor(double relative_frequency, double threshold);

// Product of per-word frequency factors, r(w) taken from the vocabulary.
double pair_factor(const std::string& word_i, const std::string& word_j,
                   const Vocabulary& vocab, const SamplingConfig& config);

// Slides a symmetric window over each document (windows never cross document
// boundaries) and accumulates co-occurrence mass under the configured
// strategies. Pure function of (documents, vocab, config, seed): work is
// split into fixed document shards with per-shard RNG streams and merged in
// shard order, so the result does not depend on the thread count.
CooccurrenceMatrix accumulate(const std::vector<std::vector<int32_t>>& id_docs,
                              const Vocabulary& vocab,
                              const SamplingConfig& config,
                              uint32_t threads = 1);

}  // namespace vecstab
