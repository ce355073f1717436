// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_RECEIVER_HPP
#define USBC_RECEIVER_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "usbc/codebook.hpp"
#include "usbc/tagphy.hpp"

namespace usbc {

/// Energy-detector outputs, one per candidate codeword.
struct DecisionStatistics {
    std::vector<double> j_values;
};

/// Decision for one symbol: the winning codeword, its bits, and the full
/// statistic vector that produced it.
struct Detection {
    std::size_t codeword_index = 0;
    BitBlock bits;
    DecisionStatistics statistics;
};

/// Multiplies each frame by the candidate chip and the reader code polarity,
/// then sums across frames per sample. Balanced candidates cancel any
/// code-independent (interference) component exactly; mismatched orthogonal
/// candidates cancel the tag component.
inline std::vector<double> match_and_aggregate(const SampledFrameSignal& received,
                                               const Codeword& candidate,
                                               const ReaderCode& code) {
    const std::size_t n_f = received.frame_count;
    if (candidate.elements.size() != n_f || code.elements.size() != n_f)
        throw std::invalid_argument("candidate/reader code length does not match the " +
                                    std::to_string(n_f) + " received frames");
    std::vector<double> aggregated(received.frame_length, 0.0);
    for (std::size_t j = 0; j < n_f; ++j) {
        const double w = static_cast<double>(candidate.elements[j] * code.elements[j]);
        const auto frame = received.frame(j);
        for (std::size_t i = 0; i < frame.size(); ++i) aggregated[i] += w * frame[i];
    }
    return aggregated;
}

/// Energy over the whole frame window (sum of squared samples).
inline double energy_detect(std::span<const double> aggregated) {
    if (aggregated.empty()) throw std::invalid_argument("cannot energy-detect an empty window");
    double j = 0.0;
    for (double v : aggregated) j += v * v;
    return j;
}

/// Runs codeword matching + energy detection for every candidate and picks
/// the argmax, breaking exact ties toward the lowest index.
inline Detection detect(const SampledFrameSignal& received, const Codebook& book,
                        const ReaderCode& code) {
    if (book.size() == 0) throw std::invalid_argument("empty codebook");
    Detection det;
    det.statistics.j_values.reserve(book.size());
    std::size_t best = 0;
    double best_j = -1.0;
    for (std::size_t m = 0; m < book.size(); ++m) {
        const double j = energy_detect(match_and_aggregate(received, book.codewords[m], code));
        det.statistics.j_values.push_back(j);
        if (j > best_j) {
            best_j = j;
            best = m;
        }
    }
    det.codeword_index = best;
    det.bits = demap_codeword(best, book);
    return det;
}

} // namespace usbc

#endif
