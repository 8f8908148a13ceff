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

#include "vecstab/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "vecstab/error.hpp"
#include "vecstab/parallel.hpp"
#include "vecstab/rng.hpp"

namespace vecstab {

Strategy strategy_from_string(const std::string& name) {
    if (name == "none") return Strategy::none;
    if (name == "prob") return Strategy::probabilistic;
    if (name == "weight") return Strategy::weighted;
    raise(Errc::usage, "unknown strategy '" + name + "' (expected none|prob|weight)");
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::none: return "none";
        case Strategy::probabilistic: return "prob";
        case Strategy::weighted: return "weight";
    }
    return "?";
}

void SamplingConfig::validate() const {
    if (window_size < 1) raise(Errc::usage, "window size must be >= 1");
    if (!(freq_threshold > 0.0) || freq_threshold > 1.0) {
        raise(Errc::usage, "frequency threshold must be in (0, 1]");
    }
}

double distance_factor(uint32_t window_size, uint64_t distance) {
    if (distance < 1 || distance > window_size) {
        raise(Errc::bad_argument, "distance " + std::to_string(distance) +
                                      " outside window of size " + std::to_string(window_size));
    }
    return static_cast<double>(window_size + 1 - distance) / static_cast<double>(window_size);
}

double frequency_factor(double relative_frequency, double threshold) {
    if (relative_frequency > threshold) {
        return std::sqrt(threshold / relative_frequency);
    }
    return 1.0;
}

double pair_factor(const std::string& word_i, const std::string& word_j,
                   const Vocabulary& vocab, const SamplingConfig& config) {
    const uint32_t i = vocab.id_or_throw(word_i);
    const uint32_t j = vocab.id_or_throw(word_j);
    return frequency_factor(vocab.relative_frequency(i), config.freq_threshold) *
           frequency_factor(vocab.relative_frequency(j), config.freq_threshold);
}

namespace {

// Open-addressing (word, context) -> mass accumulator. Values accumulate in
// insertion-stream order per key, so sums are independent of table layout.
class PairAccumulator {
public:
    PairAccumulator() { rehash(1 << 12); }

    void add(uint64_t key, double value) {
        size_t idx = mix64(key) & mask_;
        for (;;) {
            if (keys_[idx] == key) {
                vals_[idx] += value;
                return;
            }
            if (keys_[idx] == kEmpty) {
                keys_[idx] = key;
                vals_[idx] = value;
                if (++size_ * 5 > capacity() * 3) grow();
                return;
            }
            idx = (idx + 1) & mask_;
        }
    }

    // Sorted (key, value) extraction; clears the table.
    std::vector<std::pair<uint64_t, double>> take_sorted() {
        std::vector<std::pair<uint64_t, double>> out;
        out.reserve(size_);
        for (size_t i = 0; i < capacity(); ++i) {
            if (keys_[i] != kEmpty) out.emplace_back(keys_[i], vals_[i]);
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        keys_.clear();
        vals_.clear();
        keys_.shrink_to_fit();
        vals_.shrink_to_fit();
        size_ = 0;
        return out;
    }

private:
    static constexpr uint64_t kEmpty = ~0ULL;

    size_t capacity() const { return keys_.size(); }

    void rehash(size_t cap) {
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0.0);
        mask_ = cap - 1;
    }

    void grow() {
        std::vector<uint64_t> old_keys = std::move(keys_);
        std::vector<double> old_vals = std::move(vals_);
        rehash(old_keys.size() * 2);
        for (size_t i = 0; i < old_keys.size(); ++i) {
            if (old_keys[i] == kEmpty) continue;
            size_t idx = mix64(old_keys[i]) & mask_;
            while (keys_[idx] != kEmpty) idx = (idx + 1) & mask_;
            keys_[idx] = old_keys[i];
            vals_[idx] = old_vals[i];
        }
    }

    std::vector<uint64_t> keys_;
    std::vector<double> vals_;
    size_t size_ = 0;
    size_t mask_ = 0;
};

constexpr uint64_t kShardStreamTag = 0x636F6F6373686472ULL;
constexpr size_t kShardCount = 64;

uint64_t shard_seed(uint64_t master, size_t shard_index) {
    return mix64(master ^ kShardStreamTag ^
                 (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(shard_index + 1)));
}

inline uint64_t cell_key(uint32_t row, uint32_t col) {
    return (static_cast<uint64_t>(row) << 32) | col;
}

// Contribution of one factor to one directed pair. Probabilistic factors
// always consume exactly one draw, so the stream position is a pure function
// of the shard's pair sequence.
inline double factor_contribution(Strategy strategy, double factor, Xoshiro256pp& rng) {
    switch (strategy) {
        case Strategy::none: return 1.0;
        case Strategy::weighted: return factor;
        case Strategy::probabilistic: return rng.bernoulli(factor) ? 1.0 : 0.0;
    }
    return 1.0;
}

}  // namespace

CooccurrenceMatrix accumulate(const std::vector<std::vector<int32_t>>& id_docs,
                              const Vocabulary& vocab,
                              const SamplingConfig& config,
                              uint32_t threads) {
    config.validate();
    const uint32_t vocab_size = vocab.size();
    const uint32_t window = config.window_size;

    // Factor tables. df by distance, ff by word id.
    std::vector<double> df_table(window + 1, 1.0);
    for (uint32_t d = 1; d <= window; ++d) df_table[d] = distance_factor(window, d);
    std::vector<double> ff_table(vocab_size, 1.0);
    for (uint32_t id = 0; id < vocab_size; ++id) {
        ff_table[id] = frequency_factor(vocab.relative_frequency(id), config.freq_threshold);
    }

    const uint64_t master_seed =
        config.rng_seed ? *config.rng_seed
                        : (config.any_probabilistic() ? entropy_seed() : 0);

    // Fixed document shards, independent of the thread count.
    const size_t n_docs = id_docs.size();
    const size_t shards = std::min(kShardCount, std::max<size_t>(n_docs, 1));
    std::vector<std::vector<std::pair<uint64_t, double>>> shard_cells(shards);

    parallel_for_ranges(n_docs, shards, threads, [&](size_t shard, size_t begin, size_t end) {
        PairAccumulator acc;
        Xoshiro256pp rng(shard_seed(master_seed, shard));
        const Strategy df_strat = config.df_strategy;
        const Strategy ff_strat = config.ff_strategy;
        for (size_t doc = begin; doc < end; ++doc) {
            const auto& ids = id_docs[doc];
            const size_t len = ids.size();
            for (size_t i = 0; i < len; ++i) {
                const int32_t wi = ids[i];
                const size_t j_end = std::min(len, i + window + 1);
                for (size_t j = i + 1; j < j_end; ++j) {
                    const int32_t wj = ids[j];
                    if (wi < 0 || wj < 0) continue;  // kept OOV forms no pairs
                    const double df = df_table[j - i];
                    const double ff = ff_table[wi] * ff_table[wj];
                    const double fwd = factor_contribution(df_strat, df, rng) *
                                       factor_contribution(ff_strat, ff, rng);
                    if (fwd > 0.0) acc.add(cell_key(wi, wj), fwd);
                    const double bwd = factor_contribution(df_strat, df, rng) *
                                       factor_contribution(ff_strat, ff, rng);
                    if (bwd > 0.0) acc.add(cell_key(wj, wi), bwd);
                }
            }
        }
        shard_cells[shard] = acc.take_sorted();
    });

    // K-way merge in shard-index order; equal keys fold in that order.
    struct Cursor {
        uint64_t key;
        size_t shard;
        size_t pos;
    };
    auto heap_after = [](const Cursor& a, const Cursor& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.shard > b.shard;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(heap_after)> heap(heap_after);
    for (size_t s = 0; s < shards; ++s) {
        if (!shard_cells[s].empty()) heap.push({shard_cells[s][0].first, s, 0});
    }

    std::vector<uint32_t> rows, cols;
    std::vector<double> values;
    while (!heap.empty()) {
        Cursor cur = heap.top();
        heap.pop();
        const double v = shard_cells[cur.shard][cur.pos].second;
        if (!rows.empty() && cell_key(rows.back(), cols.back()) == cur.key) {
            values.back() += v;
        } else {
            rows.push_back(static_cast<uint32_t>(cur.key >> 32));
            cols.push_back(static_cast<uint32_t>(cur.key & 0xFFFFFFFFULL));
            values.push_back(v);
        }
        if (++cur.pos < shard_cells[cur.shard].size()) {
            cur.key = shard_cells[cur.shard][cur.pos].first;
            heap.push(cur);
        } else {
            shard_cells[cur.shard].clear();
            shard_cells[cur.shard].shrink_to_fit();
        }
    }

    return SparseMatrix::from_sorted_triples(vocab_size, vocab_size, std::move(rows),
                                             std::move(cols), std::move(values));
}

}  // namespace vecstab
