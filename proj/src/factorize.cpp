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

//  Truncated SVD by Golub-Kahan-Lanczos bidiagonalization with full
//  reorthogonalization and thick (Ritz-augmented) restarts. The projected
//  problem is kept as a small dense matrix whose SVD is recomputed at every
//  restart, which keeps the bookkeeping simple and tolerant of breakdown
//  handling. All long reductions run in a fixed order and the only
//  randomness (start vector, breakdown replacements) comes from a stream
//  with a fixed built-in seed, so identical input bits give identical
//  output bits regardless of thread count.

#include "vecstab/factorize.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vecstab/error.hpp"
#include "vecstab/parallel.hpp"
#include "vecstab/rng.hpp"

namespace vecstab {

namespace {

using Vec = std::vector<double>;

double seq_dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double seq_norm(const Vec& a) { return std::sqrt(seq_dot(a, a)); }

void fill_uniform(Vec& v, Xoshiro256pp& rng) {
    for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
}

// One classical Gram-Schmidt pass: y -= sum_i <basis_i, y> basis_i.
// Coefficients are full sequential dots; the subtraction applies basis
// vectors in ascending index order per element, so the result does not
// depend on the chunking.
void cgs_pass(Vec& y, const std::vector<Vec>& basis, size_t count, uint32_t threads) {
    if (count == 0) return;
    std::vector<double> coeffs(count);
    parallel_for(count, threads, [&](size_t i) { coeffs[i] = seq_dot(basis[i], y); });
    parallel_for_ranges(y.size(), 16, threads, [&](size_t, size_t lo, size_t hi) {
        for (size_t i = 0; i < count; ++i) {
            const double c = coeffs[i];
            const double* b = basis[i].data();
            for (size_t r = lo; r < hi; ++r) y[r] -= c * b[r];
        }
    });
}

// CGS2 reorthogonalization. Returns the final norm; *broke_down is set when
// the vector (numerically) lies in the span of the basis.
double reorthogonalize(Vec& y, const std::vector<Vec>& basis, size_t count,
                       uint32_t threads, double scale, bool* broke_down) {
    const double pre = seq_norm(y);
    cgs_pass(y, basis, count, threads);
    cgs_pass(y, basis, count, threads);
    const double post = seq_norm(y);
    *broke_down = post <= 1e-13 * std::max(pre, scale);
    return post;
}

// Replaces y with a random unit vector orthogonal to basis[0..count).
void random_orthonormal(Vec& y, const std::vector<Vec>& basis, size_t count,
                        uint32_t threads, Xoshiro256pp& rng) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        fill_uniform(y, rng);
        cgs_pass(y, basis, count, threads);
        cgs_pass(y, basis, count, threads);
        const double norm = seq_norm(y);
        if (norm > 1e-8) {
            for (double& x : y) x /= norm;
            return;
        }
    }
    raise(Errc::convergence_failure, "cannot extend orthonormal basis (space exhausted)");
}

void scale_into(const Vec& src, double inv_norm, Vec& dst) {
    for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * inv_norm;
}

// basis <- basis * T for the first `keep` output columns; T is (count x keep).
std::vector<Vec> rotate_basis(const std::vector<Vec>& basis, size_t count,
                              const Eigen::MatrixXd& t, size_t keep, size_t dim,
                              uint32_t threads) {
    std::vector<Vec> out(keep, Vec(dim, 0.0));
    parallel_for(keep, threads, [&](size_t c) {
        Vec& col = out[c];
        for (size_t j = 0; j < count; ++j) {
            const double w = t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
            const double* b = basis[j].data();
            for (size_t r = 0; r < dim; ++r) col[r] += w * b[r];
        }
    });
    return out;
}

struct ProjectedSvd {
    Eigen::MatrixXd x;  // left singular vectors of B
    Eigen::VectorXd s;
    Eigen::MatrixXd y;  // right singular vectors of B
};

ProjectedSvd dense_svd(const Eigen::MatrixXd& b) {
    ProjectedSvd out;
    if (b.rows() <= 256) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.x = svd.matrixU();
        out.s = svd.singularValues();
        out.y = svd.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.x = svd.matrixU();
        out.s = svd.singularValues();
        out.y = svd.matrixV();
    }
    return out;
}

}  // namespace

TruncatedSvd truncated_svd(const SparseMatrix& matrix, uint32_t d, const SvdOptions& options) {
    const uint32_t n_rows = matrix.rows();
    const uint32_t n_cols = matrix.cols();
    const uint32_t min_dim = std::min(n_rows, n_cols);
    if (d == 0) raise(Errc::bad_argument, "d must be positive");
    if (d > min_dim) {
        raise(Errc::bad_argument, "d = " + std::to_string(d) + " exceeds min(rows, cols) = " +
                                      std::to_string(min_dim));
    }
    const uint32_t threads = resolve_threads(options.threads);
    Xoshiro256pp rng(options.seed);

    TruncatedSvd result;
    result.d = d;
    result.u = DenseMatrix(n_rows, d);
    result.v = DenseMatrix(n_cols, d);
    result.singular_values.assign(d, 0.0);

    if (matrix.nnz() == 0) {
        // Zero matrix: zero spectrum with orthonormal padding columns.
        std::vector<Vec> us, qs;
        Vec tmp_u(n_rows), tmp_q(n_cols);
        for (uint32_t c = 0; c < d; ++c) {
            random_orthonormal(tmp_u, us, us.size(), threads, rng);
            us.push_back(tmp_u);
            random_orthonormal(tmp_q, qs, qs.size(), threads, rng);
            qs.push_back(tmp_q);
            for (uint32_t r = 0; r < n_rows; ++r) result.u.at(r, c) = us[c][r];
            for (uint32_t r = 0; r < n_cols; ++r) result.v.at(r, c) = qs[c][r];
        }
        result.effective_rank = 0;
        result.rank_deficient = true;
        std::fprintf(stderr, "warning: requested rank %u of a zero matrix\n", d);
        return result;
    }

    matrix.ensure_transpose();

    const uint32_t m_max = std::min<uint32_t>(min_dim, std::max<uint32_t>(2 * d + 10, 30));
    const uint32_t k_keep_target =
        std::max<uint32_t>(d, std::min<uint32_t>(d + (m_max - d) / 3, m_max >= 3 ? m_max - 3 : d));

    std::vector<Vec> u_basis;   // left vectors, each length n_rows
    std::vector<Vec> q_basis;   // right vectors, each length n_cols
    u_basis.reserve(m_max);
    q_basis.reserve(m_max + 1);

    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_max, m_max);
    std::vector<double> rho;      // coupling of q_basis[k0] to locked columns
    uint32_t k0 = 0;              // locked columns after restart
    double beta_last = 0.0;
    double scale_est = 0.0;       // running estimate of sigma_1

    {
        Vec q0(n_cols);
        fill_uniform(q0, rng);
        const double norm = seq_norm(q0);
        for (double& x : q0) x /= norm;
        q_basis.push_back(std::move(q0));
    }

    Vec work_u(n_rows), work_q(n_cols);
    double worst_residual = 0.0;

    for (uint32_t restart = 0;; ++restart) {
        // Expand the subspace from k0 to m_max columns.
        for (uint32_t j = k0; j < m_max; ++j) {
            matrix.apply(q_basis[j], work_u, threads);
            if (j == k0 && k0 > 0) {
                parallel_for_ranges(n_rows, 16, threads, [&](size_t, size_t lo, size_t hi) {
                    for (uint32_t i = 0; i < k0; ++i) {
                        const double c = rho[i];
                        const double* ui = u_basis[i].data();
                        for (size_t r = lo; r < hi; ++r) work_u[r] -= c * ui[r];
                    }
                });
            } else if (j > 0) {
                const double c = beta_last;
                const double* up = u_basis[j - 1].data();
                for (size_t r = 0; r < n_rows; ++r) work_u[r] -= c * up[r];
            }
            bool broke = false;
            double alpha = reorthogonalize(work_u, u_basis, j, threads, scale_est, &broke);
            if (u_basis.size() <= j) u_basis.emplace_back(n_rows);
            if (broke) {
                alpha = 0.0;
                random_orthonormal(u_basis[j], u_basis, j, threads, rng);
            } else {
                scale_into(work_u, 1.0 / alpha, u_basis[j]);
            }
            b(j, j) = alpha;
            if (j == k0 && k0 > 0) {
                for (uint32_t i = 0; i < k0; ++i) b(i, j) = rho[i];
            }
            scale_est = std::max(scale_est, alpha);

            matrix.transpose_apply(u_basis[j], work_q, threads);
            if (alpha != 0.0) {
                const double* qj = q_basis[j].data();
                for (size_t r = 0; r < n_cols; ++r) work_q[r] -= alpha * qj[r];
            }
            bool q_broke = false;
            double beta = reorthogonalize(work_q, q_basis, j + 1, threads, scale_est, &q_broke);
            if (q_basis.size() <= j + 1) q_basis.emplace_back(n_cols);
            if (q_broke) {
                beta = 0.0;
                if (j + 1 < n_cols) {
                    random_orthonormal(q_basis[j + 1], q_basis, j + 1, threads, rng);
                } else {
                    std::fill(q_basis[j + 1].begin(), q_basis[j + 1].end(), 0.0);
                }
            } else {
                scale_into(work_q, 1.0 / beta, q_basis[j + 1]);
            }
            beta_last = beta;
            if (j + 1 < m_max) b(j, j + 1) = beta;
            scale_est = std::max(scale_est, beta);
        }

        ProjectedSvd proj = dense_svd(b);
        const double sigma_scale = std::max(proj.s(0), 1e-300);
        worst_residual = 0.0;
        for (uint32_t i = 0; i < d; ++i) {
            const double resid = std::abs(beta_last * proj.x(m_max - 1, i));
            worst_residual = std::max(worst_residual, resid);
        }
        const bool converged = worst_residual <= options.tolerance * sigma_scale;
        const bool exhausted = m_max == min_dim;

        if (converged || exhausted) {
            // Assemble from the augmented projection [B, beta e_m]: the
            // rank-1 coupling to q_{m+1} is part of the factorization, and
            // keeping it makes the exhausted rectangular case exact (the
            // column is zero whenever beta converged to zero).
            Eigen::MatrixXd b_aug = Eigen::MatrixXd::Zero(m_max, m_max + 1);
            b_aug.leftCols(m_max) = b;
            b_aug(m_max - 1, m_max) = beta_last;
            proj = dense_svd(b_aug);
            std::vector<Vec> u_cols = rotate_basis(u_basis, m_max, proj.x, d, n_rows, threads);
            std::vector<Vec> v_cols = rotate_basis(q_basis, m_max + 1, proj.y, d, n_cols, threads);
            const double rank_floor = proj.s(0) * 1e-12;
            result.effective_rank = 0;
            for (uint32_t c = 0; c < d; ++c) {
                double sigma = proj.s(c);
                if (sigma <= rank_floor) sigma = 0.0;
                result.singular_values[c] = sigma;
                if (sigma > 0.0) result.effective_rank = c + 1;
            }
            result.rank_deficient = result.effective_rank < d;
            // Zero singular values live in a null space where the projected
            // right vectors may pick up the unused residual direction;
            // replace their columns with clean orthonormal padding.
            for (uint32_t c = result.effective_rank; c < d; ++c) {
                random_orthonormal(u_cols[c], u_cols, c, threads, rng);
                random_orthonormal(v_cols[c], v_cols, c, threads, rng);
            }
            for (uint32_t c = 0; c < d; ++c) {
                // Canonical signs: largest-magnitude U entry positive.
                size_t arg = 0;
                double best = -1.0;
                for (size_t r = 0; r < n_rows; ++r) {
                    const double mag = std::abs(u_cols[c][r]);
                    if (mag > best) {
                        best = mag;
                        arg = r;
                    }
                }
                const double flip = u_cols[c][arg] < 0.0 ? -1.0 : 1.0;
                for (size_t r = 0; r < n_rows; ++r) result.u.at(r, c) = flip * u_cols[c][r];
                for (size_t r = 0; r < n_cols; ++r) result.v.at(r, c) = flip * v_cols[c][r];
            }
            if (result.rank_deficient) {
                std::fprintf(stderr,
                             "warning: requested rank %u exceeds numerical rank %u; "
                             "trailing singular values set to zero\n",
                             d, result.effective_rank);
            }
            return result;
        }

        if (restart + 1 >= options.max_restarts) {
            raise(Errc::convergence_failure,
                  "SVD did not converge: " + std::to_string(options.max_restarts) +
                      " restarts, worst residual " + std::to_string(worst_residual) +
                      " vs tolerance " + std::to_string(options.tolerance * sigma_scale));
        }

        // Thick restart: keep k Ritz triplets plus the residual direction.
        const uint32_t k = k_keep_target;
        std::vector<Vec> new_u = rotate_basis(u_basis, m_max, proj.x, k, n_rows, threads);
        std::vector<Vec> new_q = rotate_basis(q_basis, m_max, proj.y, k, n_cols, threads);
        rho.assign(k, 0.0);
        for (uint32_t i = 0; i < k; ++i) rho[i] = beta_last * proj.x(m_max - 1, i);
        Vec residual_q = q_basis[m_max];

        u_basis = std::move(new_u);
        q_basis = std::move(new_q);
        // One safety pass: the residual vector is orthogonal to the kept
        // columns in exact arithmetic.
        cgs_pass(residual_q, q_basis, q_basis.size(), threads);
        const double rq_norm = seq_norm(residual_q);
        if (rq_norm > 1e-13) {
            for (double& x : residual_q) x /= rq_norm;
            for (uint32_t i = 0; i < k; ++i) rho[i] *= rq_norm;
        } else {
            random_orthonormal(residual_q, q_basis, q_basis.size(), threads, rng);
            rho.assign(k, 0.0);
        }
        q_basis.push_back(std::move(residual_q));

        b.setZero();
        for (uint32_t i = 0; i < k; ++i) b(i, i) = proj.s(i);
        k0 = k;
        beta_last = 0.0;
    }
}

DenseMatrix extract_embeddings(const TruncatedSvd& svd, double eigenvalue_exponent) {
    const size_t rows = svd.u.rows();
    const size_t cols = svd.u.cols();
    DenseMatrix out(rows, cols);
    std::vector<double> factors(cols, 1.0);
    if (eigenvalue_exponent != 0.0) {
        for (size_t c = 0; c < cols; ++c) {
            const double sigma = svd.singular_values[c];
            factors[c] = sigma > 0.0 ? std::pow(sigma, eigenvalue_exponent) : 0.0;
        }
    }
    for (size_t r = 0; r < rows; ++r) {
        auto src = svd.u.row(r);
        auto dst = out.row(r);
        for (size_t c = 0; c < cols; ++c) dst[c] = src[c] * factors[c];
    }
    return out;
}

}  // namespace vecstab
