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

#include "vecstab/ppmi.hpp"

#include <cmath>

#include "vecstab/error.hpp"

namespace vecstab {

PpmiMatrix to_ppmi(const CooccurrenceMatrix& counts, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) raise(Errc::bad_argument, "alpha must be in (0, 1]");
    if (!(counts.total_mass() > 0.0)) {
        raise(Errc::zero_mass, "co-occurrence matrix has zero total mass");
    }

    const std::vector<double> row_sum = counts.row_sums();
    std::vector<double> ctx = counts.col_sums();
    double ctx_norm = 0.0;
    if (alpha == 1.0) {
        for (double c : ctx) ctx_norm += c;
    } else {
        for (double& c : ctx) {
            if (c > 0.0) c = std::pow(c, alpha);
            ctx_norm += c;
        }
    }

    // ratio = P(i,j) / (P(i) P(j))
    //       = (m(i,j)/D) / ((row_i/D) * (ctx_j/Z)) = m(i,j) * Z / (row_i * ctx_j)
    std::vector<uint32_t> rows, cols;
    std::vector<double> values;
    for (uint32_t r = 0; r < counts.rows(); ++r) {
        const auto rcols = counts.row_cols(r);
        const auto rvals = counts.row_values(r);
        const double denom_row = row_sum[r];
        for (size_t k = 0; k < rcols.size(); ++k) {
            const double ratio = rvals[k] * ctx_norm / (denom_row * ctx[rcols[k]]);
            if (ratio > 1.0) {
                rows.push_back(r);
                cols.push_back(rcols[k]);
                values.push_back(std::log(ratio));
            }
        }
    }
    return SparseMatrix::from_sorted_triples(counts.rows(), counts.cols(), std::move(rows),
                                             std::move(cols), std::move(values));
}

}  // namespace vecstab
