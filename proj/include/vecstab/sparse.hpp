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
#include <vector>

namespace vecstab {

// Immutable sparse matrix in compressed-row form, entries sorted by
// (row, col). Explicit zeros are never stored. Doubles as the co-occurrence
// matrix (non-negative mass) and the PPMI matrix (positive values).
class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0), total_mass_(0.0) {}

    // Builds from triples already sorted by (row, col) with unique keys and
    // strictly nonzero values. total mass is accumulated in storage order.
    static SparseMatrix from_sorted_triples(uint32_t rows, uint32_t cols,
                                            std::vector<uint32_t> row_of,
                                            std::vector<uint32_t> col_of,
                                            std::vector<double> values);

    uint32_t rows() const noexcept { return rows_; }
    uint32_t cols() const noexcept { return cols_; }
    size_t nnz() const noexcept { return col_.size(); }
    double total_mass() const noexcept { return total_mass_; }

    // Value at (r, c); 0.0 when the cell is absent.
    double at(uint32_t r, uint32_t c) const noexcept;

    std::span<const uint64_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const uint32_t> col_indices() const noexcept { return col_; }
    std::span<const double> values() const noexcept { return val_; }

    std::span<const uint32_t> row_cols(uint32_t r) const noexcept {
        return {col_.data() + row_ptr_[r], col_.data() + row_ptr_[r + 1]};
    }
    std::span<const double> row_values(uint32_t r) const noexcept {
        return {val_.data() + row_ptr_[r], val_.data() + row_ptr_[r + 1]};
    }

    // y = M x and y = M^T x. Row sums are accumulated in column order, so the
    // result is a pure function of the matrix bits. transpose_apply uses an
    // internally cached compressed-column copy (built on first use).
    void apply(std::span<const double> x, std::span<double> y, uint32_t threads = 1) const;
    void transpose_apply(std::span<const double> x, std::span<double> y, uint32_t threads = 1) const;

    // Per-row / per-column sums, accumulated in storage order.
    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;

    // Text cache: header "rows cols nnz", then "row col value" triples in
    // (row, col) order with 17 significant digits (doubles round-trip exactly).
    void save(const std::filesystem::path& path) const;
    static SparseMatrix load(const std::filesystem::path& path);

    void ensure_transpose() const;

private:
    uint32_t rows_;
    uint32_t cols_;
    double total_mass_;
    std::vector<uint64_t> row_ptr_;
    std::vector<uint32_t> col_;
    std::vector<double> val_;

    // Lazily built transpose in CSR form (i.e. a CSC view of this matrix),
    // kept so M^T x is a deterministic gather like M x.
    mutable std::vector<uint64_t> t_row_ptr_;
    mutable std::vector<uint32_t> t_col_;
    mutable std::vector<double> t_val_;
};

}  // namespace vecstab
