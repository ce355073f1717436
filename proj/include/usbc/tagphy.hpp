// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_TAGPHY_HPP
#define USBC_TAGPHY_HPP

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "usbc/channel.hpp"
#include "usbc/codebook.hpp"
#include "usbc/rng.hpp"

namespace usbc {

/// Acoustic impedances on both sides of a reflecting boundary (MRayl).
/// z2 may be +infinity (rigid boundary).
struct ImpedancePair {
    double z1 = 1.0;
    double z2 = 1.0;
};

inline void validate(const ImpedancePair& p) {
    if (p.z1 < 0.0 || p.z2 < 0.0)
        throw std::invalid_argument("acoustic impedances must be >= 0");
    if (p.z1 == 0.0 && p.z2 == 0.0)
        throw std::invalid_argument("reflection coefficient undefined for z1 = z2 = 0");
}

/// (z2 - z1) / (z2 + z1); +1 for a rigid boundary (z2 infinite).
inline double reflection_coefficient(const ImpedancePair& p) {
    validate(p);
    if (std::isinf(p.z2)) return 1.0;
    return (p.z2 - p.z1) / (p.z2 + p.z1);
}

// Tag switch positions. Off inverts the incident pulse, the matched load
// absorbs it (fully at load_fraction 1), the short reflects it unchanged,
// and the delay line shifts it inside the frame.
struct SwitchOff {};
struct SwitchMatch {
    double load_fraction = 1.0; // 0 = no absorption, 1 = full absorption
};
struct SwitchShort {};
struct SwitchDelay {
    std::size_t delay = 0; // samples, must stay inside the frame
};
using SwitchState = std::variant<SwitchOff, SwitchMatch, SwitchShort, SwitchDelay>;

/// Switch position realizing one binary code chip.
inline SwitchState switch_state_for_chip(int chip) {
    if (chip == +1) return SwitchShort{};
    if (chip == -1) return SwitchOff{};
    throw std::invalid_argument("code chip must be +1 or -1");
}

/// Frame timing: n_f frames of duration t_f (s) per symbol, receiver noise
/// bandwidth w_rx (Hz). The time-bandwidth product t_f * w_rx must exceed 20
/// so the energy detector's squared-noise statistic is deep in its
/// large-degrees-of-freedom regime.
struct FrameGrid {
    std::size_t n_f = 4;
    double t_f = 25e-6; // s
    double w_rx = 1e6;  // Hz

    double time_bandwidth() const noexcept { return t_f * w_rx; }
    /// Samples per frame on the noise-equivalent grid (2 per unit of
    /// time-bandwidth product).
    std::size_t samples_per_frame() const {
        return static_cast<std::size_t>(std::llround(2.0 * t_f * w_rx));
    }
    double symbol_duration() const noexcept { return static_cast<double>(n_f) * t_f; }
};

inline void validate(const FrameGrid& g) {
    if (g.n_f < 1) throw std::invalid_argument("frame count must be >= 1");
    if (!(g.t_f > 0.0) || !(g.w_rx > 0.0))
        throw std::invalid_argument("frame duration and noise bandwidth must be > 0");
    if (!(g.time_bandwidth() > 20.0))
        throw std::invalid_argument("time-bandwidth product must exceed 20, got " +
                                    std::to_string(g.time_bandwidth()));
}

/// One transmitted pulse, sampled over a full frame window.
struct Pulse {
    std::vector<double> samples;
    double energy = 0.0; // sum of squared samples
};

inline double sample_energy(std::span<const double> samples) {
    double e = 0.0;
    for (double v : samples) e += v * v;
    return e;
}

inline Pulse make_pulse(std::vector<double> samples) {
    Pulse p;
    p.energy = sample_energy(samples);
    p.samples = std::move(samples);
    return p;
}

namespace detail {
inline std::vector<double> normalized_to_energy(std::vector<double> samples, double e_p) {
    if (!(e_p > 0.0)) throw std::invalid_argument("pulse energy must be > 0");
    const double raw = sample_energy(samples);
    const double scale = std::sqrt(e_p / raw);
    for (double& v : samples) v *= scale;
    return samples;
}
} // namespace detail

/// Gaussian monocycle (first derivative of a Gaussian) occupying the first
/// quarter of the frame window, rescaled to energy e_p. Antisymmetric about
/// its center, so the sample mean is exactly zero.
inline Pulse make_monocycle(const FrameGrid& grid, double e_p) {
    validate(grid);
    const std::size_t m = grid.samples_per_frame();
    const std::size_t q = m / 4;
    const double center = 0.5 * static_cast<double>(q - 1);
    const double sigma = static_cast<double>(q) / 8.0;
    std::vector<double> samples(m, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
        const double x = static_cast<double>(i) - center;
        samples[i] = -x * std::exp(-x * x / (2.0 * sigma * sigma));
    }
    Pulse p;
    p.samples = detail::normalized_to_energy(std::move(samples), e_p);
    p.energy = e_p;
    return p;
}

/// Rectangular pulse over the first quarter of the frame, energy e_p. The
/// energy detector's statistics depend on the pulse only through e_p, which
/// tests verify by swapping this in for the monocycle.
inline Pulse make_flat_pulse(const FrameGrid& grid, double e_p) {
    validate(grid);
    const std::size_t m = grid.samples_per_frame();
    const std::size_t q = m / 4;
    std::vector<double> samples(m, 0.0);
    for (std::size_t i = 0; i < q; ++i) samples[i] = 1.0;
    Pulse p;
    p.samples = detail::normalized_to_energy(std::move(samples), e_p);
    p.energy = e_p;
    return p;
}

/// The tag's reflection of one incident pulse for a given switch position.
inline std::vector<double> switch_response(const SwitchState& state, const Pulse& incident) {
    const auto& in = incident.samples;
    return std::visit(
        [&](const auto& s) -> std::vector<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SwitchOff>) {
                std::vector<double> out(in.size());
                for (std::size_t i = 0; i < in.size(); ++i) out[i] = -in[i];
                return out;
            } else if constexpr (std::is_same_v<T, SwitchMatch>) {
                if (s.load_fraction < 0.0 || s.load_fraction > 1.0)
                    throw std::invalid_argument("load fraction must lie in [0, 1]");
                std::vector<double> out(in.size());
                const double gain = 1.0 - s.load_fraction;
                for (std::size_t i = 0; i < in.size(); ++i) out[i] = gain * in[i];
                return out;
            } else if constexpr (std::is_same_v<T, SwitchShort>) {
                return in;
            } else {
                if (s.delay >= in.size())
                    throw std::invalid_argument("delay of " + std::to_string(s.delay) +
                                                " samples exceeds the frame window");
                std::vector<double> out(in.size(), 0.0);
                for (std::size_t i = s.delay; i < in.size(); ++i) out[i] = in[i - s.delay];
                return out;
            }
        },
        state);
}

/// Frame-major sample matrix: n_f frames of m samples each.
struct SampledFrameSignal {
    std::size_t frame_count = 0;
    std::size_t frame_length = 0;
    std::vector<double> samples; // frame_count * frame_length, frame-major

    std::span<double> frame(std::size_t j) {
        return {samples.data() + j * frame_length, frame_length};
    }
    std::span<const double> frame(std::size_t j) const {
        return {samples.data() + j * frame_length, frame_length};
    }
};

inline SampledFrameSignal make_frame_signal(std::size_t frames, std::size_t frame_len) {
    SampledFrameSignal s;
    s.frame_count = frames;
    s.frame_length = frame_len;
    s.samples.assign(frames * frame_len, 0.0);
    return s;
}

/// One symbol's worth of the reader's interrogation signal: frame j carries
/// the pulse with the reader code's polarity d_j.
inline SampledFrameSignal assemble_interrogation(const ReaderCode& code, const Pulse& pulse,
                                                 const FrameGrid& grid) {
    validate(grid);
    if (code.elements.size() != grid.n_f)
        throw std::invalid_argument("reader code length " + std::to_string(code.elements.size()) +
                                    " != frame count " + std::to_string(grid.n_f));
    auto out = make_frame_signal(grid.n_f, pulse.samples.size());
    for (std::size_t j = 0; j < grid.n_f; ++j) {
        const double d = static_cast<double>(code.elements[j]);
        auto frame = out.frame(j);
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = d * pulse.samples[i];
    }
    return out;
}

/// The compound received signal for one symbol: per frame j,
///   (alpha^2 * a_j + beta^2) * d_j * p[i] + noise,
/// with i.i.d. zero-mean Gaussian noise of variance n0/2 per sample. When a
/// realized impulse response is supplied, the tag component is the sum of its
/// taps at their delays (first tap is the main arrival the receiver aligns
/// to); scatter interference stays at the frame origin.
inline SampledFrameSignal synthesize_received(const Codeword& codeword, const ReaderCode& code,
                                              const Pulse& pulse, const ChannelRealization& ch,
                                              double n0, RandomStream& rng,
                                              std::span<const CirTap> taps = {}) {
    const std::size_t n_f = code.elements.size();
    if (codeword.elements.size() != n_f)
        throw std::invalid_argument("codeword length " + std::to_string(codeword.elements.size()) +
                                    " != reader code length " + std::to_string(n_f));
    if (n0 < 0.0) throw std::invalid_argument("noise spectral density must be >= 0");
    const std::size_t m = pulse.samples.size();
    for (const CirTap& tap : taps)
        if (tap.delay >= m)
            throw std::invalid_argument("impulse response tap delayed past the frame window");

    const double beta_sq = ch.scatter_gain_sum();
    // A single tap at the frame origin is algebraically the flat path; share
    // the arithmetic so the two routes agree bit for bit under shared draws.
    const bool flat = taps.empty() || (taps.size() == 1 && taps[0].delay == 0);
    const double flat_gain = taps.empty() ? ch.tag_roundtrip_gain : taps[0].amplitude;
    auto out = make_frame_signal(n_f, m);
    for (std::size_t j = 0; j < n_f; ++j) {
        const double a = static_cast<double>(codeword.elements[j]);
        const double d = static_cast<double>(code.elements[j]);
        auto frame = out.frame(j);
        if (flat) {
            const double scale = (flat_gain * a + beta_sq) * d;
            for (std::size_t i = 0; i < m; ++i) frame[i] = scale * pulse.samples[i];
        } else {
            for (const CirTap& tap : taps) {
                const double scale = tap.amplitude * a * d;
                for (std::size_t i = tap.delay; i < m; ++i)
                    frame[i] += scale * pulse.samples[i - tap.delay];
            }
            const double interference = beta_sq * d;
            for (std::size_t i = 0; i < m; ++i) frame[i] += interference * pulse.samples[i];
        }
    }
    if (n0 > 0.0) {
        std::normal_distribution<double> noise(0.0, std::sqrt(n0 / 2.0));
        for (double& v : out.samples) v += noise(rng);
    }
    return out;
}

} // namespace usbc

#endif
