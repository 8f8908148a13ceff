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

#include "vecstab/sparse.hpp"

namespace vecstab {

using PpmiMatrix = SparseMatrix;
using CooccurrenceMatrix = SparseMatrix;

// Positive pointwise mutual information of a co-occurrence matrix.
//
// With D the total mass, P(i,j) = m(i,j)/D, P(i) = row_sum(i)/D and the
// context distribution P(j) = col_sum(j)^alpha / sum_k col_sum(k)^alpha,
// each cell becomes ln(P(i,j) / (P(i) P(j))) when the ratio exceeds 1 and is
// dropped otherwise (a ratio of exactly 1 gives ln 1 = 0 and is not stored).
// alpha = 1 means no context-distribution smoothing.
//
// Throws Errc::zero_mass on an empty matrix.
PpmiMatrix to_ppmi(const CooccurrenceMatrix& counts, double alpha = 1.0);

}  // namespace vecstab
