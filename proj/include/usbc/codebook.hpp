// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_CODEBOOK_HPP
#define USBC_CODEBOOK_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "usbc/rng.hpp"

namespace usbc {

/// One balanced +-1 block code word, one chip per frame.
struct Codeword {
    std::vector<int> elements; // each +1 or -1, sum exactly 0
};

/// A set of mutually orthogonal balanced codewords; 2^bits_per_symbol of them.
struct Codebook {
    std::vector<Codeword> codewords;
    int bits_per_symbol = 0;

    std::size_t size() const noexcept { return codewords.size(); }
    std::size_t frame_count() const noexcept {
        return codewords.empty() ? 0 : codewords.front().elements.size();
    }
};

/// The reader's per-frame +-1 polarity sequence, fixed for a whole run.
struct ReaderCode {
    std::vector<int> elements;
    std::uint64_t seed = 0;
};

/// K information bits forming one symbol.
struct BitBlock {
    std::vector<std::uint8_t> bits; // each 0 or 1
};

/// Smallest frame count (power of two) whose codebook can hold 2^k balanced
/// orthogonal codewords, i.e. n_f - 1 >= 2^k.
inline std::size_t min_frame_count(int k) {
    if (k < 1 || k > 24) throw std::invalid_argument("bits per symbol must be in [1, 24]");
    return std::size_t{2} << k; // 2^(k+1)
}

/// Builds the codebook from the order-n_f Sylvester-Hadamard matrix: row 0
/// (all ones) is unbalanced and dropped; rows 1..2^k are balanced, mutually
/// orthogonal, and taken in row order. Element (r, c) is (-1)^popcount(r & c).
inline Codebook build_codebook(std::size_t n_f, int k) {
    if (k < 1 || k > 24) throw std::invalid_argument("bits per symbol must be in [1, 24]");
    if (n_f < 4 || !std::has_single_bit(n_f))
        throw std::invalid_argument("frame count must be a power of two >= 4, got " +
                                    std::to_string(n_f));
    const std::size_t n_bc = std::size_t{1} << k;
    if (n_bc > n_f - 1)
        throw std::invalid_argument("order-" + std::to_string(n_f) +
                                    " Hadamard matrix has only " + std::to_string(n_f - 1) +
                                    " balanced rows, need " + std::to_string(n_bc));

    Codebook book;
    book.bits_per_symbol = k;
    book.codewords.reserve(n_bc);
    for (std::size_t row = 1; row <= n_bc; ++row) {
        Codeword cw;
        cw.elements.reserve(n_f);
        for (std::size_t col = 0; col < n_f; ++col)
            cw.elements.push_back(std::popcount(row & col) % 2 == 0 ? +1 : -1);
        book.codewords.push_back(std::move(cw));
    }
    return book;
}

/// Big-endian integer value of a bit block.
inline std::size_t codeword_index(const BitBlock& block) {
    std::size_t idx = 0;
    for (std::uint8_t b : block.bits) idx = (idx << 1) | (b ? 1u : 0u);
    return idx;
}

/// Maps K bits to their codeword (big-endian binary value indexes the list).
inline const Codeword& map_bits(const BitBlock& block, const Codebook& book) {
    if (static_cast<int>(block.bits.size()) != book.bits_per_symbol)
        throw std::invalid_argument("bit block length " + std::to_string(block.bits.size()) +
                                    " != bits per symbol " +
                                    std::to_string(book.bits_per_symbol));
    return book.codewords[codeword_index(block)];
}

/// Inverse of map_bits.
inline BitBlock demap_codeword(std::size_t index, const Codebook& book) {
    if (index >= book.size())
        throw std::invalid_argument("codeword index " + std::to_string(index) +
                                    " out of range (codebook size " +
                                    std::to_string(book.size()) + ")");
    BitBlock block;
    const int k = book.bits_per_symbol;
    block.bits.resize(k);
    for (int i = 0; i < k; ++i)
        block.bits[i] = static_cast<std::uint8_t>((index >> (k - 1 - i)) & 1u);
    return block;
}

/// Seeded pseudorandom +-1 sequence; a pure function of (n_f, seed).
inline ReaderCode generate_reader_code(std::size_t n_f, std::uint64_t seed) {
    if (n_f < 1) throw std::invalid_argument("reader code length must be >= 1");
    ReaderCode code;
    code.seed = seed;
    code.elements.reserve(n_f);
    RandomStream stream(seed);
    for (std::size_t j = 0; j < n_f; ++j)
        code.elements.push_back((stream() & 1u) ? +1 : -1);
    return code;
}

} // namespace usbc

#endif
