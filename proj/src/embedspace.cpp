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

#include "vecstab/embedspace.hpp"

#include <algorithm>
#include <cmath>

#include "vecstab/error.hpp"
#include "vecstab/textio.hpp"

namespace vecstab {

void EmbeddingSpace::rebuild_index_and_norms() {
    index_.clear();
    index_.reserve(words_.size());
    for (uint32_t i = 0; i < words_.size(); ++i) {
        auto [it, inserted] = index_.emplace(words_[i], i);
        if (!inserted) raise(Errc::duplicate_word, "duplicate word: " + words_[i]);
    }
    norms_.resize(words_.size());
    for (uint32_t i = 0; i < words_.size(); ++i) {
        norms_[i] = std::sqrt(dot(vectors_.row(i), vectors_.row(i)));
    }
}

EmbeddingSpace EmbeddingSpace::create(const Vocabulary& vocab, DenseMatrix vectors) {
    if (vocab.size() != vectors.rows()) {
        raise(Errc::dimension_mismatch,
              "vocabulary size " + std::to_string(vocab.size()) + " != matrix rows " +
                  std::to_string(vectors.rows()));
    }
    EmbeddingSpace space;
    space.words_ = vocab.words();
    space.vectors_ = std::move(vectors);
    space.rebuild_index_and_norms();
    return space;
}

EmbeddingSpace EmbeddingSpace::from_rows(std::vector<std::string> words, DenseMatrix vectors) {
    if (words.size() != vectors.rows()) {
        raise(Errc::dimension_mismatch, "word count " + std::to_string(words.size()) +
                                            " != matrix rows " + std::to_string(vectors.rows()));
    }
    EmbeddingSpace space;
    space.words_ = std::move(words);
    space.vectors_ = std::move(vectors);
    space.rebuild_index_and_norms();
    return space;
}

bool EmbeddingSpace::contains(std::string_view word) const {
    return index_.find(std::string(word)) != index_.end();
}

uint32_t EmbeddingSpace::id_or_throw(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) raise(Errc::unknown_word, "word not in space: " + std::string(word));
    return it->second;
}

double EmbeddingSpace::cosine_by_id(uint32_t a, uint32_t b) const {
    const double denom = norms_[a] * norms_[b];
    if (denom == 0.0) return 0.0;
    return dot(vectors_.row(a), vectors_.row(b)) / denom;
}

double EmbeddingSpace::cosine(std::string_view w1, std::string_view w2) const {
    return cosine_by_id(id_or_throw(w1), id_or_throw(w2));
}

std::vector<uint32_t> EmbeddingSpace::most_similar_ids(uint32_t anchor_id, uint32_t n) const {
    const uint32_t v = size();
    if (n >= v) raise(Errc::bad_argument, "n must be smaller than the vocabulary");
    std::vector<double> scores(v);
    for (uint32_t i = 0; i < v; ++i) scores[i] = cosine_by_id(anchor_id, i);

    std::vector<uint32_t> order;
    order.reserve(v - 1);
    for (uint32_t i = 0; i < v; ++i) {
        if (i != anchor_id) order.push_back(i);
    }
    auto better = [&](uint32_t a, uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;  // row order breaks ties
    };
    std::partial_sort(order.begin(), order.begin() + n, order.end(), better);
    order.resize(n);
    return order;
}

std::vector<std::pair<std::string, double>> EmbeddingSpace::most_similar(
    std::string_view anchor, uint32_t n) const {
    const uint32_t anchor_id = id_or_throw(anchor);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(n);
    for (uint32_t id : most_similar_ids(anchor_id, n)) {
        out.emplace_back(words_[id], cosine_by_id(anchor_id, id));
    }
    return out;
}

void EmbeddingSpace::normalize_rows() {
    for (uint32_t i = 0; i < size(); ++i) {
        if (norms_[i] == 0.0) {
            raise(Errc::non_finite_value, "cannot normalize zero vector for word: " + words_[i]);
        }
        auto row = vectors_.row(i);
        for (double& x : row) x /= norms_[i];
        norms_[i] = 1.0;
    }
    unit_normalized_ = true;
}

void EmbeddingSpace::save(const std::filesystem::path& path) const {
    LineWriter out(path);
    out.write_line(std::to_string(size()) + " " + std::to_string(dim()));
    std::string line;
    for (uint32_t i = 0; i < size(); ++i) {
        line = words_[i];
        for (double v : vectors_.row(i)) {
            line += ' ';
            line += fmt17(v);
        }
        out.write_line(line);
    }
    out.close();
}

EmbeddingSpace EmbeddingSpace::load(const std::filesystem::path& path) {
    LineReader in(path);
    std::string line;
    if (!in.next(line)) raise(Errc::malformed_header, "empty embedding file: " + path.string());

    std::vector<std::string_view> fields;
    auto split = [&fields](const std::string& s) {
        fields.clear();
        size_t pos = 0;
        while (pos < s.size()) {
            while (pos < s.size() && s[pos] == ' ') ++pos;
            size_t start = pos;
            while (pos < s.size() && s[pos] != ' ') ++pos;
            if (pos > start) fields.push_back(std::string_view(s).substr(start, pos - start));
        }
    };

    split(line);
    if (fields.size() != 2) {
        raise(Errc::malformed_header, "embedding header must be '<size> <dim>', got: " + line);
    }
    const uint64_t n_words = parse_u64(fields[0]);
    const uint64_t dim = parse_u64(fields[1]);
    if (n_words == 0 || dim == 0) {
        raise(Errc::malformed_header, "embedding header must be positive: " + line);
    }

    std::vector<std::string> words;
    words.reserve(n_words);
    DenseMatrix vectors(n_words, dim);
    uint64_t row = 0;
    while (in.next(line)) {
        if (line.empty()) continue;
        if (row >= n_words) {
            raise(Errc::dimension_mismatch,
                  "more rows than the declared " + std::to_string(n_words));
        }
        split(line);
        if (fields.size() != dim + 1) {
            raise(Errc::dimension_mismatch,
                  "row " + std::to_string(row) + " has " + std::to_string(fields.size() - 1) +
                      " values, expected " + std::to_string(dim));
        }
        words.emplace_back(fields[0]);
        auto dst = vectors.row(row);
        for (uint64_t c = 0; c < dim; ++c) {
            double v;
            if (!try_parse_double(fields[c + 1], v)) {
                raise(Errc::malformed_header, "bad number in row " + std::to_string(row) + ": " +
                                                  std::string(fields[c + 1]));
            }
            if (!std::isfinite(v)) {
                raise(Errc::non_finite_value,
                      "non-finite value for word '" + words.back() + "'");
            }
            dst[c] = v;
        }
        ++row;
    }
    if (row != n_words) {
        raise(Errc::truncated_file, "embedding file has " + std::to_string(row) +
                                        " rows, header says " + std::to_string(n_words));
    }
    return from_rows(std::move(words), std::move(vectors));
}

}  // namespace vecstab
