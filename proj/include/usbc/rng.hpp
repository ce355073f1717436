// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_RNG_HPP
#define USBC_RNG_HPP

#include <cstdint>
#include <random>

namespace usbc {

/// All stochastic code draws from an explicitly passed stream; nothing in the
/// library touches global RNG state.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer. Full-avalanche 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds one word into a running seed state.
constexpr std::uint64_t mix_seed(std::uint64_t state, std::uint64_t word) noexcept {
    return splitmix64(state ^ (word + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2)));
}

/// Stream lanes keep unrelated consumers of the same master seed apart.
namespace lane {
inline constexpr std::uint64_t trial = 0;         // bits + channel draws, keyed by (point, trial)
inline constexpr std::uint64_t reader_code = 1;   // the per-run reader code
inline constexpr std::uint64_t theory_fading = 2; // fading draws for the averaged theory curve
inline constexpr std::uint64_t noise = 3;         // receiver noise, keyed by (point, trial)
} // namespace lane

/// Deterministic 64-bit seed for an arbitrary (lane, a, b) triple under one
/// master seed. Seeds for distinct triples are independent for all practical
/// purposes (full avalanche between words).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t lane_id, std::uint64_t a,
                                 std::uint64_t b) {
    std::uint64_t s = splitmix64(master_seed);
    s = mix_seed(s, lane_id);
    s = mix_seed(s, a);
    s = mix_seed(s, b);
    return s;
}

inline RandomStream make_stream(std::uint64_t master_seed, std::uint64_t lane_id, std::uint64_t a,
                                std::uint64_t b) {
    return RandomStream(derive_seed(master_seed, lane_id, a, b));
}

/// Per-trial substream: same triple always yields the identical stream, so a
/// sweep gives byte-identical results no matter how trials are scheduled
/// across workers.
inline RandomStream derive_substream(std::uint64_t master_seed, std::uint64_t point_index,
                                     std::uint64_t trial_index) {
    return make_stream(master_seed, lane::trial, point_index, trial_index);
}

} // namespace usbc

#endif
