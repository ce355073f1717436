// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <numeric>
#include <vector>

#include "usbc/codebook.hpp"

using namespace usbc;

namespace {

int dot(const std::vector<int>& a, const std::vector<int>& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
    return d;
}

int element_sum(const std::vector<int>& a) { return std::accumulate(a.begin(), a.end(), 0); }

// Independent row oracle: entry (r, c) of the order-n Sylvester-Hadamard
// matrix built by the doubling recursion H_{2n} = [[H, H], [H, -H]].
std::vector<std::vector<int>> sylvester_rows(std::size_t n) {
    std::vector<std::vector<int>> h{{1}};
    while (h.size() < n) {
        const std::size_t m = h.size();
        std::vector<std::vector<int>> next(2 * m, std::vector<int>(2 * m));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) {
                next[r][c] = h[r][c];
                next[r][c + m] = h[r][c];
                next[r + m][c] = h[r][c];
                next[r + m][c + m] = -h[r][c];
            }
        h = std::move(next);
    }
    return h;
}

} // namespace

TEST_CASE("order-4 construction matches the brute-force Hadamard enumeration") {
    const auto rows = sylvester_rows(4);
    REQUIRE(element_sum(rows[0]) == 4); // all-ones row is unbalanced
    for (std::size_t r = 1; r < 4; ++r) CHECK(element_sum(rows[r]) == 0);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = r + 1; c < 4; ++c) CHECK(dot(rows[r], rows[c]) == 0);

    const Codebook book = build_codebook(4, 1);
    REQUIRE(book.size() == 2);
    CHECK(book.codewords[0].elements == std::vector<int>{+1, -1, +1, -1});
    CHECK(book.codewords[1].elements == std::vector<int>{+1, +1, -1, -1});
    CHECK(book.codewords[0].elements == rows[1]);
    CHECK(book.codewords[1].elements == rows[2]);
}

TEST_CASE("codebook matches the doubling recursion at every order") {
    for (std::size_t n_f : {4u, 8u, 16u, 32u, 64u}) {
        const auto rows = sylvester_rows(n_f);
        const int k = std::countr_zero(n_f) - 1; // largest k with 2^k <= n_f - 1
        const Codebook book = build_codebook(n_f, k);
        for (std::size_t i = 0; i < book.size(); ++i) CHECK(book.codewords[i].elements == rows[i + 1]);
    }
}

TEST_CASE("Gram matrix is exactly N_f times identity and every codeword is balanced") {
    for (std::size_t n_f : {4u, 8u, 16u, 32u, 64u}) {
        const int k = std::countr_zero(n_f) - 1;
        const Codebook book = build_codebook(n_f, k);
        REQUIRE(book.size() == (std::size_t{1} << k));
        for (std::size_t a = 0; a < book.size(); ++a) {
            CHECK(element_sum(book.codewords[a].elements) == 0);
            for (std::size_t b = 0; b < book.size(); ++b) {
                const int expected = (a == b) ? static_cast<int>(n_f) : 0;
                CHECK(dot(book.codewords[a].elements, book.codewords[b].elements) == expected);
            }
        }
    }
}

TEST_CASE("order 2 cannot supply two balanced orthogonal codewords") {
    // Exhaustive: the only balanced length-2 words are (+1,-1) and (-1,+1),
    // and their dot product is -2, so no valid pair exists.
    std::vector<std::vector<int>> balanced;
    for (int a : {-1, +1})
        for (int b : {-1, +1})
            if (a + b == 0) balanced.push_back({a, b});
    REQUIRE(balanced.size() == 2);
    CHECK(dot(balanced[0], balanced[1]) != 0);
    CHECK_THROWS_AS(build_codebook(2, 1), std::invalid_argument);
}

TEST_CASE("invalid sizes are rejected") {
    CHECK_THROWS_AS(build_codebook(12, 2), std::invalid_argument); // not a power of two
    CHECK_THROWS_AS(build_codebook(4, 2), std::invalid_argument);  // 2^2 > 4 - 1
    CHECK_THROWS_AS(build_codebook(8, 0), std::invalid_argument);
}

TEST_CASE("minimum frame count for k bits") {
    CHECK(min_frame_count(1) == 4);
    CHECK(min_frame_count(2) == 8);
    CHECK(min_frame_count(3) == 16);
    CHECK(min_frame_count(4) == 32);
}

TEST_CASE("bit mapping conventions") {
    const Codebook book2 = build_codebook(8, 2);
    CHECK(&map_bits({{0, 0}}, book2) == &book2.codewords[0]);
    CHECK(&map_bits({{1, 1}}, book2) == &book2.codewords[3]);
    CHECK(&map_bits({{0, 1}}, book2) == &book2.codewords[1]); // big-endian

    const Codebook book1 = build_codebook(4, 1);
    CHECK(&map_bits({{0}}, book1) == &book1.codewords[0]);

    CHECK(demap_codeword(0, book2).bits == std::vector<std::uint8_t>{0, 0});
    CHECK(demap_codeword(3, book2).bits == std::vector<std::uint8_t>{1, 1});

    CHECK_THROWS_AS(map_bits({{0, 1, 1}}, book2), std::invalid_argument);
    CHECK_THROWS_AS(demap_codeword(4, book2), std::invalid_argument);
}

TEST_CASE("demap is the exact inverse of map over every block") {
    for (int k = 1; k <= 4; ++k) {
        const Codebook book = build_codebook(min_frame_count(k), k);
        for (std::size_t idx = 0; idx < book.size(); ++idx) {
            const BitBlock block = demap_codeword(idx, book);
            CHECK(codeword_index(block) == idx);
            CHECK(&map_bits(block, book) == &book.codewords[idx]);
        }
    }
}

TEST_CASE("reader code is a pure function of length and seed") {
    const ReaderCode a = generate_reader_code(64, 1234);
    const ReaderCode b = generate_reader_code(64, 1234);
    CHECK(a.elements == b.elements);
    for (int e : a.elements) CHECK((e == +1 || e == -1));

    const ReaderCode c = generate_reader_code(64, 1235);
    CHECK(a.elements != c.elements);

    // Golden value pinned at first implementation.
    const ReaderCode g = generate_reader_code(8, 42);
    CHECK(g.elements == std::vector<int>{-1, -1, -1, -1, +1, -1, -1, -1});

    CHECK_THROWS_AS(generate_reader_code(0, 1), std::invalid_argument);
}
