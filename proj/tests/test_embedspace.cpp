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

#include <cmath>
#include <functional>

#include "support/oracles.hpp"
#include "support/tempdir.hpp"
#include "vecstab/embedspace.hpp"
#include "vecstab/error.hpp"
#include "vecstab/rng.hpp"
#include "vecstab/textio.hpp"

using namespace vecstab;
using testsupport::TempDir;

namespace {

EmbeddingSpace make_space(const std::vector<std::string>& words,
                          const std::vector<std::vector<double>>& rows) {
    DenseMatrix m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        for (size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    }
    return EmbeddingSpace::from_rows(words, std::move(m));
}

EmbeddingSpace random_space(uint64_t seed, uint32_t words, uint32_t dim) {
    Xoshiro256pp rng(seed);
    DenseMatrix m(words, dim);
    std::vector<std::string> names;
    for (uint32_t i = 0; i < words; ++i) {
        names.push_back("w" + std::to_string(i));
        for (uint32_t c = 0; c < dim; ++c) m.at(i, c) = 2.0 * rng.next_double() - 1.0;
    }
    return EmbeddingSpace::from_rows(names, std::move(m));
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::usage;
}

}  // namespace

TEST_CASE("cosine basics") {
    EmbeddingSpace s = make_space({"x", "y", "diag"}, {{1, 0}, {0, 1}, {1, 1}});
    CHECK(s.cosine("x", "x") == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.cosine("x", "y") == 0.0);
    CHECK(s.cosine("x", "diag") == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(s.cosine("x", "nope"), Error);
    try {
        s.cosine("x", "nope");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::unknown_word);
        CHECK(std::string(e.what()).find("nope") != std::string::npos);
    }
}

TEST_CASE("most_similar on a hand-placed 4-word space") {
    // anchor "a" at (1, 0); b at angle ~11 deg, c at 45 deg, d at 90 deg
    EmbeddingSpace s = make_space({"a", "b", "c", "d"},
                                  {{1.0, 0.0}, {0.98, 0.2}, {1.0, 1.0}, {0.0, 1.0}});
    auto top = s.most_similar("a", 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].first == "b");
    CHECK(top[1].first == "c");
    CHECK(top[2].first == "d");
    CHECK(top[0].second == doctest::Approx(0.98 / std::sqrt(0.98 * 0.98 + 0.04)).epsilon(1e-12));
    CHECK(top[1].second == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(top[2].second == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("most_similar matches the brute-force oracle and nests by n") {
    EmbeddingSpace s = random_space(11, 30, 6);
    DenseMatrix copy(30, 6);
    for (uint32_t r = 0; r < 30; ++r) {
        for (uint32_t c = 0; c < 6; ++c) copy.at(r, c) = s.vector(r)[c];
    }
    for (uint32_t anchor = 0; anchor < 30; anchor += 7) {
        auto expected = testoracle::brute_most_similar(copy, anchor, 29);
        auto full = s.most_similar_ids(anchor, 29);
        CHECK(full == expected);
        // prefix property
        for (uint32_t n = 1; n < 29; n += 5) {
            auto part = s.most_similar_ids(anchor, n);
            CHECK(std::equal(part.begin(), part.end(), full.begin()));
        }
    }
}

TEST_CASE("ties break by row order") {
    EmbeddingSpace s = make_space({"a", "tie1", "tie2", "far"},
                                  {{1, 0}, {2, 0}, {4, 0}, {-1, 0}});
    // tie1 and tie2 both have cosine exactly 1 with a; row order decides
    auto top = s.most_similar("a", 2);
    CHECK(top[0].first == "tie1");
    CHECK(top[1].first == "tie2");
}

TEST_CASE("n must stay below the vocabulary size") {
    EmbeddingSpace s = random_space(3, 5, 2);
    CHECK_THROWS_AS(s.most_similar("w0", 5), Error);
    CHECK_NOTHROW(s.most_similar("w0", 4));
}

TEST_CASE("save / load round trip") {
    TempDir tmp("embed-io");
    EmbeddingSpace s = random_space(77, 12, 4);
    const auto path = tmp.file("model.vec");
    s.save(path);

    EmbeddingSpace loaded = EmbeddingSpace::load(path);
    REQUIRE(loaded.size() == s.size());
    REQUIRE(loaded.dim() == s.dim());
    for (uint32_t i = 0; i < s.size(); ++i) {
        CHECK(loaded.word(i) == s.word(i));
        for (uint32_t c = 0; c < s.dim(); ++c) {
            CHECK(loaded.vector(i)[c] == s.vector(i)[c]);  // exact: 17 digits
        }
    }

    SUBCASE("save -> load -> save is byte identical") {
        loaded.save(tmp.file("again.vec"));
        CHECK(read_file(path) == read_file(tmp.file("again.vec")));
    }
    SUBCASE("gzip round trip by extension") {
        s.save(tmp.file("model.vec.gz"));
        EmbeddingSpace gz = EmbeddingSpace::load(tmp.file("model.vec.gz"));
        REQUIRE(gz.size() == s.size());
        for (uint32_t i = 0; i < s.size(); ++i) {
            CHECK(gz.vector(i)[0] == s.vector(i)[0]);
        }
        // compressed file is a real gzip stream, not plain text
        const std::string raw = read_file(tmp.file("model.vec.gz"));
        REQUIRE(raw.size() >= 2);
        CHECK(static_cast<unsigned char>(raw[0]) == 0x1F);
        CHECK(static_cast<unsigned char>(raw[1]) == 0x8B);
    }
}

TEST_CASE("loader accepts a minimal two-row file") {
    TempDir tmp("embed-min");
    write_file(tmp.file("two.vec"), "2 3\nalpha 1 0 0\nbeta 0 0.5 0\n");
    EmbeddingSpace s = EmbeddingSpace::load(tmp.file("two.vec"));
    CHECK(s.size() == 2);
    CHECK(s.dim() == 3);
    CHECK(s.vector(1)[1] == 0.5);
}

TEST_CASE("loader error taxonomy") {
    TempDir tmp("embed-err");
    auto area = [&](const std::string& name, const std::string& content) {
        write_file(tmp.file(name), content);
        return tmp.file(name);
    };

    CHECK(code_of([&] { EmbeddingSpace::load(area("a.vec", "")); }) == Errc::malformed_header);
    CHECK(code_of([&] { EmbeddingSpace::load(area("b.vec", "junk\n")); }) ==
          Errc::malformed_header);
    CHECK(code_of([&] { EmbeddingSpace::load(area("c.vec", "2 x\n")); }) ==
          Errc::malformed_header);
    // truncation: header says 2 rows, only 1 present
    CHECK(code_of([&] { EmbeddingSpace::load(area("d.vec", "2 3\na 1 2 3\n")); }) ==
          Errc::truncated_file);
    // dimension mismatch inside a row
    CHECK(code_of([&] { EmbeddingSpace::load(area("e.vec", "1 3\na 1 2\n")); }) ==
          Errc::dimension_mismatch);
    // duplicate word
    CHECK(code_of([&] {
              EmbeddingSpace::load(area("f.vec", "2 2\na 1 2\na 3 4\n"));
          }) == Errc::duplicate_word);
    // non-finite value
    CHECK(code_of([&] { EmbeddingSpace::load(area("g.vec", "1 2\na inf 0\n")); }) ==
          Errc::non_finite_value);
    CHECK(code_of([&] { EmbeddingSpace::load(area("h.vec", "1 2\na nan 0\n")); }) ==
          Errc::non_finite_value);
}

TEST_CASE("normalization preserves rankings and cosines") {
    EmbeddingSpace raw = random_space(909, 25, 5);
    EmbeddingSpace normalized = random_space(909, 25, 5);
    normalized.normalize_rows();
    CHECK(normalized.unit_normalized());

    for (uint32_t i = 0; i < 25; ++i) {
        const double n = std::sqrt(dot(normalized.vector(i), normalized.vector(i)));
        CHECK(n == doctest::Approx(1.0).epsilon(1e-10));
    }
    for (uint32_t anchor = 0; anchor < 25; anchor += 3) {
        CHECK(raw.most_similar_ids(anchor, 10) == normalized.most_similar_ids(anchor, 10));
        auto a = raw.most_similar(raw.word(anchor), 5);
        auto b = normalized.most_similar(raw.word(anchor), 5);
        for (size_t k = 0; k < 5; ++k) {
            CHECK(std::abs(a[k].second - b[k].second) < 1e-10);
        }
    }

    SUBCASE("zero rows cannot be normalized") {
        EmbeddingSpace z = make_space({"ok", "zero"}, {{1, 1}, {0, 0}});
        CHECK_THROWS_AS(z.normalize_rows(), Error);
    }
}
