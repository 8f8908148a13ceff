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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "support/oracles.hpp"
#include "vecstab/embedspace.hpp"
#include "vecstab/error.hpp"
#include "vecstab/factorize.hpp"
#include "vecstab/rng.hpp"

using namespace vecstab;

namespace {

SparseMatrix from_eigen(const Eigen::MatrixXd& m) {
    std::vector<uint32_t> r, c;
    std::vector<double> v;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                r.push_back(static_cast<uint32_t>(i));
                c.push_back(static_cast<uint32_t>(j));
                v.push_back(m(i, j));
            }
        }
    }
    return SparseMatrix::from_sorted_triples(static_cast<uint32_t>(m.rows()),
                                             static_cast<uint32_t>(m.cols()), std::move(r),
                                             std::move(c), std::move(v));
}

Eigen::MatrixXd random_dense(uint64_t seed, int rows, int cols, double density = 1.0) {
    Xoshiro256pp rng(seed);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (rng.next_double() < density) m(i, j) = 2.0 * rng.next_double() - 1.0;
        }
    }
    return m;
}

Eigen::MatrixXd to_eigen_dense(const DenseMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m.at(i, j);
    }
    return out;
}

double ortho_error(const DenseMatrix& m) {
    Eigen::MatrixXd e = to_eigen_dense(m);
    return (e.transpose() * e - Eigen::MatrixXd::Identity(e.cols(), e.cols()))
        .cwiseAbs()
        .maxCoeff();
}

Eigen::MatrixXd reconstruct(const TruncatedSvd& svd) {
    Eigen::MatrixXd u = to_eigen_dense(svd.u);
    Eigen::MatrixXd v = to_eigen_dense(svd.v);
    Eigen::VectorXd s(svd.singular_values.size());
    for (size_t i = 0; i < svd.singular_values.size(); ++i) s(i) = svd.singular_values[i];
    return u * s.asDiagonal() * v.transpose();
}

}  // namespace

TEST_CASE("diagonal matrix SVD") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 2.0;
    m(2, 2) = 1.0;
    TruncatedSvd svd = truncated_svd(from_eigen(m), 2);

    REQUIRE(svd.singular_values.size() == 2);
    CHECK(svd.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(svd.singular_values[1] == doctest::Approx(2.0).epsilon(1e-12));
    // canonical signs make the columns exactly the standard basis directions
    CHECK(svd.u.at(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(svd.u.at(1, 0)) < 1e-10);
    CHECK(svd.u.at(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ortho_error(svd.u) < 1e-10);
    CHECK(ortho_error(svd.v) < 1e-10);
}

TEST_CASE("full-rank reconstruction at d = 15") {
    Eigen::MatrixXd m = random_dense(71, 15, 15, 0.6);
    TruncatedSvd svd = truncated_svd(from_eigen(m), 15);
    const double err = (reconstruct(svd) - m).norm() / m.norm();
    CHECK(err <= 1e-8);
    CHECK(ortho_error(svd.u) < 1e-8);
    CHECK(ortho_error(svd.v) < 1e-8);
}

TEST_CASE("Eckart-Young: truncation error equals the trailing spectrum") {
    Eigen::MatrixXd m = random_dense(13, 15, 15);
    auto oracle = testoracle::full_svd(m);
    double previous_error = std::numeric_limits<double>::infinity();
    for (uint32_t d = 1; d <= 15; ++d) {
        TruncatedSvd svd = truncated_svd(from_eigen(m), d);
        const double err = (reconstruct(svd) - m).norm();
        double expected_sq = 0.0;
        for (int k = d; k < 15; ++k) expected_sq += oracle.sigma(k) * oracle.sigma(k);
        CHECK(err <= previous_error + 1e-9);
        CHECK(std::abs(err - std::sqrt(expected_sq)) <= 1e-6);
        for (uint32_t i = 0; i < d; ++i) {
            CHECK(svd.singular_values[i] == doctest::Approx(oracle.sigma(i)).epsilon(1e-9));
        }
        previous_error = err;
    }
}

TEST_CASE("restarted path matches the dense oracle on a larger sparse matrix") {
    Eigen::MatrixXd m = random_dense(2026, 200, 200, 0.05);
    auto oracle = testoracle::full_svd(m);
    TruncatedSvd svd = truncated_svd(from_eigen(m), 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(std::abs(svd.singular_values[i] - oracle.sigma(i)) <= 1e-8 * oracle.sigma(0));
    }
    CHECK(ortho_error(svd.u) < 1e-8);
    CHECK(ortho_error(svd.v) < 1e-8);

    // non-increasing spectrum
    for (int i = 1; i < 10; ++i) {
        CHECK(svd.singular_values[i] <= svd.singular_values[i - 1]);
    }
}

TEST_CASE("rectangular matrices are handled exactly at exhaustion") {
    Eigen::MatrixXd wide = random_dense(5, 8, 40);
    auto oracle = testoracle::full_svd(wide);
    TruncatedSvd svd = truncated_svd(from_eigen(wide), 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(svd.singular_values[i] == doctest::Approx(oracle.sigma(i)).epsilon(1e-9));
    }
    const double err = (reconstruct(svd) - wide).norm() / wide.norm();
    CHECK(err <= 1e-8);

    Eigen::MatrixXd tall = random_dense(6, 40, 8);
    auto oracle_tall = testoracle::full_svd(tall);
    TruncatedSvd svd_tall = truncated_svd(from_eigen(tall), 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(svd_tall.singular_values[i] == doctest::Approx(oracle_tall.sigma(i)).epsilon(1e-9));
    }
    CHECK((reconstruct(svd_tall) - tall).norm() / tall.norm() <= 1e-8);
}

TEST_CASE("d beyond the numerical rank pads with zero singular values") {
    Eigen::MatrixXd low = random_dense(21, 10, 3) * random_dense(22, 3, 10);  // rank 3
    TruncatedSvd svd = truncated_svd(from_eigen(low), 6);
    CHECK(svd.rank_deficient);
    CHECK(svd.effective_rank == 3);
    for (int i = 3; i < 6; ++i) CHECK(svd.singular_values[i] == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(svd.singular_values[i] > 0.0);
    CHECK(ortho_error(svd.u) < 1e-8);
    CHECK(ortho_error(svd.v) < 1e-8);
}

TEST_CASE("factorization is deterministic, bit for bit") {
    Eigen::MatrixXd m = random_dense(404, 60, 60, 0.2);
    SparseMatrix sparse = from_eigen(m);
    TruncatedSvd a = truncated_svd(sparse, 7);
    TruncatedSvd b = truncated_svd(sparse, 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(a.singular_values[i] == b.singular_values[i]);
    }
    for (size_t r = 0; r < a.u.rows(); ++r) {
        for (size_t c = 0; c < a.u.cols(); ++c) {
            CHECK(a.u.at(r, c) == b.u.at(r, c));
        }
    }

    SUBCASE("and independent of the thread count") {
        SvdOptions threaded;
        threaded.threads = 3;
        TruncatedSvd c = truncated_svd(sparse, 7, threaded);
        for (size_t r = 0; r < a.u.rows(); ++r) {
            for (size_t col = 0; col < a.u.cols(); ++col) {
                CHECK(a.u.at(r, col) == c.u.at(r, col));
            }
        }
        CHECK(a.singular_values == c.singular_values);
    }
}

TEST_CASE("singular values of a symmetric matrix are absolute eigenvalues") {
    Eigen::MatrixXd m = random_dense(88, 12, 12);
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    std::vector<double> abs_eigs;
    for (int i = 0; i < 12; ++i) abs_eigs.push_back(std::abs(eig.eigenvalues()(i)));
    std::sort(abs_eigs.rbegin(), abs_eigs.rend());

    TruncatedSvd svd = truncated_svd(from_eigen(sym), 12);
    for (int i = 0; i < 12; ++i) {
        CHECK(svd.singular_values[i] == doctest::Approx(abs_eigs[i]).epsilon(1e-9));
    }
}

TEST_CASE("extract_embeddings applies the eigenvalue exponent") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 0) = 3.0;
    m(1, 1) = 2.0;
    m(2, 2) = 1.0;
    TruncatedSvd svd = truncated_svd(from_eigen(m), 2);

    SUBCASE("p = 0 returns U unchanged") {
        DenseMatrix e = extract_embeddings(svd, 0.0);
        for (size_t r = 0; r < e.rows(); ++r) {
            for (size_t c = 0; c < e.cols(); ++c) {
                CHECK(e.at(r, c) == svd.u.at(r, c));
            }
        }
    }
    SUBCASE("p = 1 scales columns by the singular values") {
        DenseMatrix e = extract_embeddings(svd, 1.0);
        for (size_t r = 0; r < e.rows(); ++r) {
            CHECK(e.at(r, 0) == doctest::Approx(svd.u.at(r, 0) * 3.0).epsilon(1e-12));
            CHECK(e.at(r, 1) == doctest::Approx(svd.u.at(r, 1) * 2.0).epsilon(1e-12));
        }
    }
    SUBCASE("p = 0.5 matches the dense oracle") {
        Eigen::MatrixXd big = random_dense(303, 15, 15);
        auto oracle = testoracle::full_svd(big);
        TruncatedSvd full = truncated_svd(from_eigen(big), 15);
        DenseMatrix e = extract_embeddings(full, 0.5);
        for (int r = 0; r < 15; ++r) {
            for (int c = 0; c < 15; ++c) {
                // compare magnitudes (oracle signs are arbitrary)
                CHECK(std::abs(e.at(r, c)) ==
                      doctest::Approx(std::abs(oracle.u(r, c)) * std::sqrt(oracle.sigma(c)))
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("column sign flips do not change most-similar rankings") {
    Eigen::MatrixXd m = random_dense(606, 20, 20, 0.4);
    TruncatedSvd svd = truncated_svd(from_eigen(m), 5);
    DenseMatrix base = extract_embeddings(svd, 0.0);
    DenseMatrix flipped = base;
    for (size_t r = 0; r < flipped.rows(); ++r) {
        flipped.at(r, 1) = -flipped.at(r, 1);
        flipped.at(r, 3) = -flipped.at(r, 3);
    }
    std::vector<std::string> words;
    for (int i = 0; i < 20; ++i) words.push_back("w" + std::to_string(i));
    EmbeddingSpace s1 = EmbeddingSpace::from_rows(words, std::move(base));
    EmbeddingSpace s2 = EmbeddingSpace::from_rows(words, std::move(flipped));
    for (uint32_t anchor = 0; anchor < 20; ++anchor) {
        CHECK(s1.most_similar_ids(anchor, 6) == s2.most_similar_ids(anchor, 6));
    }
}

TEST_CASE("invalid ranks are rejected") {
    Eigen::MatrixXd m = random_dense(1, 5, 5);
    CHECK_THROWS_AS(truncated_svd(from_eigen(m), 0), Error);
    CHECK_THROWS_AS(truncated_svd(from_eigen(m), 6), Error);
}

TEST_CASE("zero matrix yields zero spectrum with orthonormal padding") {
    SparseMatrix zero =
        SparseMatrix::from_sorted_triples(8, 8, {}, {}, {});
    TruncatedSvd svd = truncated_svd(zero, 3);
    CHECK(svd.effective_rank == 0);
    CHECK(svd.rank_deficient);
    for (double s : svd.singular_values) CHECK(s == 0.0);
    CHECK(ortho_error(svd.u) < 1e-10);
    CHECK(ortho_error(svd.v) < 1e-10);
}
