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
#include <vector>

#include "vecstab/dense.hpp"
#include "vecstab/sparse.hpp"

namespace vecstab {

struct TruncatedSvd {
    DenseMatrix u;                       // rows x d, orthonormal columns
    std::vector<double> singular_values; // length d, non-increasing
    DenseMatrix v;                       // cols x d, orthonormal columns
    uint32_t d = 0;
    uint32_t effective_rank = 0;         // number of nonzero singular values
    bool rank_deficient = false;         // true when d exceeded the rank
};

struct SvdOptions {
    double tolerance = 1e-10;      // on residual norms relative to sigma_1
    uint32_t max_restarts = 1000;
    uint64_t seed = 0x5EEDC0DE5EEDC0DEULL;  // fixed start vector seed
    uint32_t threads = 1;
};

// Top-d singular triplets of a sparse matrix via Golub-Kahan-Lanczos
// bidiagonalization with full reorthogonalization and thick restarts.
// The starting vector comes from a fixed seeded stream and every reduction
// has a fixed order, so identical input bits give identical output bits.
// Column signs are canonicalized (largest-magnitude entry of each U column
// made positive, first index on ties).
//
// d greater than the numerical rank yields trailing zero singular values
// (rank_deficient flag instead of an error); the corresponding U/V columns
// are orthonormal padding. Throws Errc::convergence_failure with iteration
// diagnostics if tolerances are not met within max_restarts.
TruncatedSvd truncated_svd(const SparseMatrix& matrix, uint32_t d,
                           const SvdOptions& options = {});

// Row i of the result is U[i,:] scaled elementwise by sigma^p. p = 0 returns
// U unchanged (singular values ignored).
DenseMatrix extract_embeddings(const TruncatedSvd& svd, double eigenvalue_exponent = 0.0);

}  // namespace vecstab
