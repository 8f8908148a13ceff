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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vecstab/corpus.hpp"
#include "vecstab/dense.hpp"

namespace vecstab {

// A finished embedding space: one vector per word, row order defining the
// tie-break order for queries (descending frequency then lexicographic when
// built from a Vocabulary; file order when loaded). Immutable after
// construction; queries are pure and safe to run concurrently.
class EmbeddingSpace {
public:
    EmbeddingSpace() = default;

    static EmbeddingSpace create(const Vocabulary& vocab, DenseMatrix vectors);
    static EmbeddingSpace from_rows(std::vector<std::string> words, DenseMatrix vectors);

    uint32_t size() const noexcept { return static_cast<uint32_t>(words_.size()); }
    uint32_t dim() const noexcept { return static_cast<uint32_t>(vectors_.cols()); }
    bool unit_normalized() const noexcept { return unit_normalized_; }

    const std::string& word(uint32_t id) const { return words_[id]; }
    const std::vector<std::string>& words() const noexcept { return words_; }
    std::span<const double> vector(uint32_t id) const { return vectors_.row(id); }

    bool contains(std::string_view word) const;
    uint32_t id_or_throw(std::string_view word) const;

    double cosine(std::string_view w1, std::string_view w2) const;
    double cosine_by_id(uint32_t a, uint32_t b) const;

    // The n distinct highest-cosine words, anchor excluded; ties broken by
    // row order. Requires n < size().
    std::vector<std::pair<std::string, double>> most_similar(std::string_view anchor,
                                                             uint32_t n) const;
    std::vector<uint32_t> most_similar_ids(uint32_t anchor_id, uint32_t n) const;

    // Scales every row to unit L2 norm. Throws Errc::non_finite_value on a
    // zero row (it cannot be normalized).
    void normalize_rows();

    // word2vec text format: "size dim" header, then "word v1 .. vd" per line,
    // 17 significant digits. A ".gz" extension selects gzip compression.
    void save(const std::filesystem::path& path) const;
    static EmbeddingSpace load(const std::filesystem::path& path);

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, uint32_t> index_;
    DenseMatrix vectors_;
    std::vector<double> norms_;   // cached row L2 norms
    bool unit_normalized_ = false;

    void rebuild_index_and_norms();
};

}  // namespace vecstab
