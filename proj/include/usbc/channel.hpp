// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_CHANNEL_HPP
#define USBC_CHANNEL_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "usbc/rng.hpp"

namespace usbc {

/// Three-parameter generalized Nakagami amplitude law. The pdf is
///   f(h) = 2 s z^z h^(2sz-1) / (Gamma(z) Omega^z) * exp(-(z/Omega) h^(2s)),
/// equivalently X = h^(2s) is Gamma(shape z, scale Omega/z).
struct NakagamiParams {
    double shaping = 1.0;        // z
    double spreading = 1.0;      // Omega
    double generalization = 1.0; // s
};

inline void validate(const NakagamiParams& p) {
    if (!(p.shaping > 0.0) || !(p.spreading > 0.0) || !(p.generalization > 0.0))
        throw std::invalid_argument("Nakagami parameters must all be strictly positive");
}

/// E[h^p] from Gamma moments of X = h^(2s):
/// E[X^q] = (Omega/z)^q * Gamma(z + q) / Gamma(z) with q = p/(2s).
inline double nakagami_moment(const NakagamiParams& p, double power) {
    validate(p);
    const double q = power / (2.0 * p.generalization);
    if (p.shaping + q <= 0.0)
        throw std::invalid_argument("moment of order " + std::to_string(power) +
                                    " does not exist for these parameters");
    return std::pow(p.spreading / p.shaping, q) *
           std::exp(std::lgamma(p.shaping + q) - std::lgamma(p.shaping));
}

/// One amplitude draw: sample X ~ Gamma(z, Omega/z), return X^(1/(2s)).
/// Exact and rejection-free at the distribution level.
inline double sample_nakagami(const NakagamiParams& p, RandomStream& rng) {
    validate(p);
    std::gamma_distribution<double> gamma(p.shaping, p.spreading / p.shaping);
    const double x = gamma(rng);
    return std::pow(x, 1.0 / (2.0 * p.generalization));
}

/// Amplitude sampler with optional normalization so that E[h^2] = 1, making
/// the energy gain of a drawn amplitude unit-mean. The constant comes from
/// the closed-form Gamma moment, so the SNR axis stays parameter-free.
class NakagamiSampler {
  public:
    NakagamiSampler() = default;
    NakagamiSampler(const NakagamiParams& params, bool normalize)
        : params_(params), scale_(normalize ? 1.0 / std::sqrt(nakagami_moment(params, 2.0)) : 1.0) {
        validate(params_);
    }

    double sample(RandomStream& rng) const { return scale_ * sample_nakagami(params_, rng); }

    const NakagamiParams& params() const noexcept { return params_; }
    double scale() const noexcept { return scale_; }

  private:
    NakagamiParams params_{};
    double scale_ = 1.0;
};

/// How the tag's round-trip amplitude gain is formed from one-way draws.
/// SingleDraw treats the round-trip gain as the measured primitive; Product
/// multiplies two independent one-way draws.
enum class RoundTripModel { SingleDraw, Product };

/// Quasi-static per-symbol channel state: the tag's round-trip amplitude gain
/// and the per-scatter interference gains. Fixed within one symbol.
struct ChannelRealization {
    double tag_roundtrip_gain = 1.0;   // alpha^2 in the signal model
    std::vector<double> scatter_gains; // beta_l^2, one per scatter

    double scatter_gain_sum() const {
        return std::accumulate(scatter_gains.begin(), scatter_gains.end(), 0.0);
    }
};

/// Fresh independent draws for one symbol.
inline ChannelRealization sample_channel_realization(const NakagamiSampler& tag,
                                                     const NakagamiSampler& scatter,
                                                     std::size_t scatter_count, RandomStream& rng,
                                                     RoundTripModel model = RoundTripModel::SingleDraw) {
    ChannelRealization ch;
    ch.tag_roundtrip_gain = tag.sample(rng);
    if (model == RoundTripModel::Product) ch.tag_roundtrip_gain *= tag.sample(rng);
    ch.scatter_gains.reserve(scatter_count);
    for (std::size_t l = 0; l < scatter_count; ++l) ch.scatter_gains.push_back(scatter.sample(rng));
    return ch;
}

/// Deterministic tissue attenuation: amplitude coefficient a*f^b per unit
/// distance, frequency f in MHz, distance d in cm.
struct AttenuationParams {
    double coefficient = 0.0; // a, np * cm^-1 * MHz^-b
    double exponent = 1.0;    // b
    double frequency = 1.0;   // f, MHz
    double distance = 0.0;    // d, cm
};

inline void validate(const AttenuationParams& p) {
    if (p.coefficient < 0.0) throw std::invalid_argument("attenuation coefficient must be >= 0");
    if (!(p.frequency > 0.0)) throw std::invalid_argument("center frequency must be > 0");
    if (p.distance < 0.0) throw std::invalid_argument("distance must be >= 0");
}

inline double attenuate(double p0, const AttenuationParams& p) {
    validate(p);
    if (p0 < 0.0) throw std::invalid_argument("initial amplitude must be >= 0");
    return p0 * std::exp(-p.coefficient * std::pow(p.frequency, p.exponent) * p.distance);
}

/// Multipath description: per-tap amplitude law and integer sample delay.
struct MultipathTapSpec {
    NakagamiParams amplitude;
    std::size_t delay = 0; // samples
};

struct MultipathProfile {
    std::vector<MultipathTapSpec> taps;
};

inline void validate(const MultipathProfile& profile) {
    if (profile.taps.empty()) throw std::invalid_argument("multipath profile needs >= 1 tap");
    for (std::size_t l = 0; l < profile.taps.size(); ++l) {
        validate(profile.taps[l].amplitude);
        if (l > 0 && profile.taps[l].delay <= profile.taps[l - 1].delay)
            throw std::invalid_argument("multipath tap delays must be strictly increasing");
    }
}

/// One realized channel impulse response tap.
struct CirTap {
    double amplitude = 0.0;
    std::size_t delay = 0; // samples
};

/// Draws one quasi-static impulse response from the profile; delays are
/// copied, amplitudes drawn independently per tap.
inline std::vector<CirTap> build_cir(const MultipathProfile& profile, RandomStream& rng) {
    validate(profile);
    std::vector<CirTap> taps;
    taps.reserve(profile.taps.size());
    for (const auto& spec : profile.taps)
        taps.push_back({sample_nakagami(spec.amplitude, rng), spec.delay});
    return taps;
}

} // namespace usbc

#endif
