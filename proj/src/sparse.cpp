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

#include "vecstab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "vecstab/error.hpp"
#include "vecstab/parallel.hpp"
#include "vecstab/textio.hpp"

namespace vecstab {

SparseMatrix SparseMatrix::from_sorted_triples(uint32_t rows, uint32_t cols,
                                               std::vector<uint32_t> row_of,
                                               std::vector<uint32_t> col_of,
                                               std::vector<double> values) {
    SparseMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.col_ = std::move(col_of);
    m.val_ = std::move(values);
    m.row_ptr_.assign(rows + 1, 0);
    uint32_t prev_row = 0;
    uint32_t prev_col = 0;
    for (size_t k = 0; k < row_of.size(); ++k) {
        const uint32_t r = row_of[k];
        const uint32_t c = m.col_[k];
        if (r >= rows || c >= cols) raise(Errc::bad_argument, "triple out of bounds");
        if (k > 0 && (r < prev_row || (r == prev_row && c <= prev_col))) {
            raise(Errc::bad_argument, "triples not sorted by (row, col)");
        }
        if (m.val_[k] == 0.0) raise(Errc::bad_argument, "explicit zero entry");
        if (!std::isfinite(m.val_[k])) raise(Errc::non_finite_value, "non-finite entry");
        prev_row = r;
        prev_col = c;
        m.row_ptr_[r + 1]++;
    }
    for (uint32_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    double mass = 0.0;
    for (double v : m.val_) mass += v;
    m.total_mass_ = mass;
    return m;
}

double SparseMatrix::at(uint32_t r, uint32_t c) const noexcept {
    auto cols = row_cols(r);
    auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return 0.0;
    return val_[row_ptr_[r] + static_cast<size_t>(it - cols.begin())];
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y,
                         uint32_t threads) const {
    parallel_for_ranges(rows_, /*chunk_count=*/threads > 1 ? threads * 8 : 1, threads,
                        [&](size_t, size_t begin, size_t end) {
        for (size_t r = begin; r < end; ++r) {
            double acc = 0.0;
            const uint64_t lo = row_ptr_[r];
            const uint64_t hi = row_ptr_[r + 1];
            for (uint64_t k = lo; k < hi; ++k) acc += val_[k] * x[col_[k]];
            y[r] = acc;
        }
    });
}

void SparseMatrix::ensure_transpose() const {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (!t_row_ptr_.empty() || col_.empty()) return;
    t_row_ptr_.assign(cols_ + 1, 0);
    for (uint32_t c : col_) t_row_ptr_[c + 1]++;
    for (uint32_t c = 0; c < cols_; ++c) t_row_ptr_[c + 1] += t_row_ptr_[c];
    t_col_.resize(col_.size());
    t_val_.resize(col_.size());
    std::vector<uint64_t> cursor(t_row_ptr_.begin(), t_row_ptr_.end() - 1);
    for (uint32_t r = 0; r < rows_; ++r) {
        for (uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            uint64_t slot = cursor[col_[k]]++;
            t_col_[slot] = r;
            t_val_[slot] = val_[k];
        }
    }
}

void SparseMatrix::transpose_apply(std::span<const double> x, std::span<double> y,
                                   uint32_t threads) const {
    if (t_row_ptr_.empty() && !col_.empty()) ensure_transpose();
    parallel_for_ranges(cols_, threads > 1 ? threads * 8 : 1, threads,
                        [&](size_t, size_t begin, size_t end) {
        for (size_t c = begin; c < end; ++c) {
            double acc = 0.0;
            const uint64_t lo = t_row_ptr_.empty() ? 0 : t_row_ptr_[c];
            const uint64_t hi = t_row_ptr_.empty() ? 0 : t_row_ptr_[c + 1];
            for (uint64_t k = lo; k < hi; ++k) acc += t_val_[k] * x[t_col_[k]];
            y[c] = acc;
        }
    });
}

std::vector<double> SparseMatrix::row_sums() const {
    std::vector<double> sums(rows_, 0.0);
    for (uint32_t r = 0; r < rows_; ++r) {
        double acc = 0.0;
        for (uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += val_[k];
        sums[r] = acc;
    }
    return sums;
}

std::vector<double> SparseMatrix::col_sums() const {
    std::vector<double> sums(cols_, 0.0);
    for (uint32_t r = 0; r < rows_; ++r) {
        for (uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            sums[col_[k]] += val_[k];
        }
    }
    return sums;
}

void SparseMatrix::save(const std::filesystem::path& path) const {
    LineWriter out(path);
    std::string header = std::to_string(rows_) + " " + std::to_string(cols_) +
                         " " + std::to_string(nnz());
    out.write_line(header);
    std::string line;
    for (uint32_t r = 0; r < rows_; ++r) {
        for (uint64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            line.clear();
            line += std::to_string(r);
            line += ' ';
            line += std::to_string(col_[k]);
            line += ' ';
            line += fmt17(val_[k]);
            out.write_line(line);
        }
    }
    out.close();
}

SparseMatrix SparseMatrix::load(const std::filesystem::path& path) {
    LineReader in(path);
    std::string line;
    if (!in.next(line)) raise(Errc::malformed_header, "empty matrix file: " + path.string());

    auto split3 = [&](const std::string& s, std::string_view out[3]) {
        size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
            while (pos < s.size() && s[pos] == ' ') ++pos;
            size_t start = pos;
            while (pos < s.size() && s[pos] != ' ') ++pos;
            if (start == pos) return false;
            out[i] = std::string_view(s).substr(start, pos - start);
        }
        while (pos < s.size() && s[pos] == ' ') ++pos;
        return pos == s.size();
    };

    std::string_view f[3];
    if (!split3(line, f)) raise(Errc::malformed_header, "bad matrix header: " + line);
    const uint64_t rows = parse_u64(f[0]);
    const uint64_t cols = parse_u64(f[1]);
    const uint64_t nnz = parse_u64(f[2]);
    if (rows > UINT32_MAX || cols > UINT32_MAX) {
        raise(Errc::malformed_header, "matrix dimensions too large");
    }

    std::vector<uint32_t> row_of, col_of;
    std::vector<double> values;
    row_of.reserve(nnz);
    col_of.reserve(nnz);
    values.reserve(nnz);
    while (in.next(line)) {
        if (line.empty()) continue;
        if (!split3(line, f)) raise(Errc::malformed_header, "bad matrix triple: " + line);
        row_of.push_back(static_cast<uint32_t>(parse_u64(f[0])));
        col_of.push_back(static_cast<uint32_t>(parse_u64(f[1])));
        values.push_back(parse_double(f[2]));
    }
    if (row_of.size() != nnz) {
        raise(Errc::truncated_file, "matrix file has " + std::to_string(row_of.size()) +
                                        " triples, header says " + std::to_string(nnz));
    }
    return from_sorted_triples(static_cast<uint32_t>(rows), static_cast<uint32_t>(cols),
                               std::move(row_of), std::move(col_of), std::move(values));
}

}  // namespace vecstab
