// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_THEORY_HPP
#define USBC_THEORY_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "usbc/channel.hpp"
#include "usbc/codebook.hpp"
#include "usbc/errors.hpp"
#include "usbc/quadrature.hpp"
#include "usbc/rng.hpp"

namespace usbc {

/// Operating point for the closed-form BER chain. snr_per_bit is the
/// received per-bit SNR (round-trip energy gain times E_b/N0); with fading
/// present it is the mean of that quantity over the unit-normalized gain.
struct TheoryParams {
    int k = 1;
    std::size_t n_bc = 2;
    double tfwrx = 25.0;
    double snr_per_bit = 1.0;
    std::optional<NakagamiParams> fading;
};

inline void validate(const TheoryParams& p) {
    if (p.k < 1 || p.k > 24) throw std::invalid_argument("bits per symbol must be in [1, 24]");
    if (p.n_bc != (std::size_t{1} << p.k))
        throw std::invalid_argument("codebook size must equal 2^k");
    if (!(p.tfwrx > 20.0))
        throw std::invalid_argument("time-bandwidth product must exceed 20");
    if (!(p.snr_per_bit > 0.0)) throw std::invalid_argument("SNR must be > 0");
    if (p.fading) validate(*p.fading);
}

/// Upper-tail standard normal probability.
inline double q_function(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

/// First two moments of a noise term in the decision-statistic decomposition.
struct NoiseStatistic {
    double mean = 0.0;
    double variance = 1.0;
};

/// Moments of the squared-noise term of one decision statistic: a central
/// chi-square on the round(2*T_f*W_rx)-sample window scaled by N_f*N0/2,
/// i.e. mean T_f*W_rx*N_f*N0 and variance T_f*W_rx*N_f^2*N0^2.
inline NoiseStatistic square_noise_statistic(double tfwrx, double n_f, double n0) {
    if (!(tfwrx > 0.0) || !(n_f > 0.0) || !(n0 > 0.0))
        throw std::invalid_argument("square-noise moments need positive parameters");
    return {tfwrx * n_f * n0, tfwrx * n_f * n_f * n0 * n0};
}

/// Moments of the signal-noise cross term of the matched statistic:
/// zero mean, variance 2 * (alpha^2)^2 * N_f^3 * N0 * E_p.
inline NoiseStatistic cross_noise_statistic(double roundtrip_gain, double n_f, double n0,
                                            double e_p) {
    if (!(roundtrip_gain >= 0.0) || !(n_f > 0.0) || !(n0 > 0.0) || !(e_p > 0.0))
        throw std::invalid_argument("cross-noise moments need positive parameters");
    return {0.0, 2.0 * roundtrip_gain * roundtrip_gain * n_f * n_f * n_f * n0 * e_p};
}

namespace detail {

inline double pow_uint(double base, std::size_t exp) {
    double result = 1.0;
    while (exp != 0) {
        if (exp & 1u) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

/// One Gauss-Hermite evaluation of the correct-detection probability
/// conditioned on the operating point. In units normalized by the matched
/// signal energy, the matched statistic's combined noise n_x has mean
/// T/(K*gamma) and variance 2/(K*gamma) + T/(K*gamma)^2, each competing
/// statistic is Gaussian with the same mean and standard deviation
/// sqrt(T)/(K*gamma), and the correct-detection probability is
///   E over n_x of [1 - Q((1 + n_x - T/(K*gamma)) / (sqrt(T)/(K*gamma)))]^(N_bc - 1).
inline double p_correct_with_nodes(const TheoryParams& p, int nodes) {
    const double kg = static_cast<double>(p.k) * p.snr_per_bit;
    const double sd_eta = std::sqrt(p.tfwrx) / kg;
    const double var_x = 2.0 / kg + p.tfwrx / (kg * kg);
    const double sd_x = std::sqrt(var_x);
    const QuadratureRule& rule = gauss_hermite(nodes);
    // The means of n_x and the competing statistics coincide, so the Q
    // argument reduces to (1 + sqrt(2)*sd_x*t) / sd_eta at node t.
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double deviation = std::sqrt(2.0) * sd_x * rule.nodes[i];
        const double q = q_function((1.0 + deviation) / sd_eta);
        acc += rule.weights[i] * pow_uint(1.0 - q, p.n_bc - 1);
    }
    return acc / std::sqrt(M_PI);
}

} // namespace detail

/// Probability of detecting the transmitted codeword at a fixed operating
/// point, by Gauss-Hermite quadrature with a node-doubling accuracy check:
/// starting from the base order, the rule is doubled until two consecutive
/// orders agree within 1e-8 (the larger codebooks need one extra doubling at
/// mid SNR). Throws AccuracyError if the cap is reached without convergence.
inline double p_correct_conditional(const TheoryParams& p, int nodes = 64, int max_nodes = 2048) {
    validate(p);
    if (nodes < 1) throw std::invalid_argument("quadrature order must be >= 1");
    double coarse = detail::p_correct_with_nodes(p, nodes);
    while (2 * nodes <= max_nodes) {
        const double fine = detail::p_correct_with_nodes(p, 2 * nodes);
        if (std::abs(fine - coarse) <= 1e-8) return std::clamp(fine, 0.0, 1.0);
        coarse = fine;
        nodes *= 2;
    }
    throw AccuracyError("correct-detection quadrature did not converge by " +
                        std::to_string(nodes) + " nodes");
}

/// Average bit errors per bit given a codeword error: a wrong codeword is
/// uniform over the 2^K - 1 alternatives, flipping 2^(K-1)/(2^K - 1) of the
/// K bits on average.
inline double ber_from_pcorrect(double p_corr, int k) {
    if (k < 1) throw std::invalid_argument("bits per symbol must be >= 1");
    if (p_corr < 0.0 || p_corr > 1.0)
        throw std::invalid_argument("probability must lie in [0, 1]");
    const double p_ed = 1.0 - p_corr;
    const double numerator = std::pow(2.0, k - 1);
    return numerator / (std::pow(2.0, k) - 1.0) * p_ed;
}

enum class FadingAverage { MonteCarlo, Quadrature };

namespace detail {

// Below ~1e-9 per-bit SNR the detector is at chance; clamping keeps the
// normalized statistics finite for pathologically deep fades.
inline double conditional_ber_at(const TheoryParams& base, double snr_inst) {
    TheoryParams p = base;
    p.fading.reset();
    p.snr_per_bit = std::max(snr_inst, 1e-9);
    return ber_from_pcorrect(p_correct_conditional(p), p.k);
}

} // namespace detail

inline constexpr std::uint64_t kDefaultFadingSeed = 0x0badfade0badfadeULL;

/// BER at the operating point. Without fading this is the conditional
/// closed-form chain; with fading, the outer expectation over the
/// unit-normalized round-trip gain runs by Monte Carlo (default) or by
/// generalized Gauss-Laguerre quadrature over the Gamma transform.
inline double ber_theoretical(const TheoryParams& p,
                              FadingAverage method = FadingAverage::MonteCarlo,
                              std::size_t fading_draws = 100000,
                              std::uint64_t fading_seed = kDefaultFadingSeed) {
    validate(p);
    if (!p.fading) return ber_from_pcorrect(p_correct_conditional(p), p.k);

    if (method == FadingAverage::MonteCarlo) {
        if (fading_draws < 1) throw std::invalid_argument("need >= 1 fading draw");
        const NakagamiSampler gain(*p.fading, /*normalize=*/true);
        RandomStream rng(fading_seed);
        double acc = 0.0;
        for (std::size_t i = 0; i < fading_draws; ++i) {
            const double h = gain.sample(rng);
            acc += detail::conditional_ber_at(p, p.snr_per_bit * h * h);
        }
        return acc / static_cast<double>(fading_draws);
    }

    // Quadrature route: with X = h^(2s) ~ Gamma(z, Omega/z) and the gain
    // normalized to unit mean square, the instantaneous SNR is
    // gamma * c^2 * X^(1/s); integrate against the Gamma density with a
    // generalized Gauss-Laguerre rule of weight u^(z-1) e^-u.
    const NakagamiParams& f = *p.fading;
    const double theta = f.spreading / f.shaping;
    const double c_sq = 1.0 / nakagami_moment(f, 2.0);
    const QuadratureRule rule = make_gauss_laguerre(64, f.shaping - 1.0);
    const double inv_gamma_z = std::exp(-std::lgamma(f.shaping));
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double gain_sq = c_sq * std::pow(theta * rule.nodes[i], 1.0 / f.generalization);
        acc += rule.weights[i] * detail::conditional_ber_at(p, p.snr_per_bit * gain_sq);
    }
    return std::clamp(acc * inv_gamma_z, 0.0, 1.0);
}

/// Monte Carlo over the decision-statistic decomposition, bypassing waveform
/// synthesis: the matched statistic is signal energy plus a Gaussian
/// cross-term plus the squared-noise term; each competitor is squared noise
/// alone. With exact_noise the squared-noise terms are true central
/// chi-squares on the round(2*T_f*W_rx)-sample window (scaled by N_f*N0/2);
/// otherwise both follow the Gaussian approximation with mean
/// T_f*W_rx*N_f*N0 and variance T_f*W_rx*N_f^2*N0^2.
inline double statistic_oracle(const TheoryParams& p, std::size_t trials, RandomStream& rng,
                               bool exact_noise) {
    validate(p);
    if (trials < 10000) throw std::invalid_argument("statistic oracle needs >= 1e4 trials");

    const double n_f = static_cast<double>(min_frame_count(p.k));
    const double e_p = 1.0;
    const double e_b = n_f * e_p / static_cast<double>(p.k);
    const double n0 = e_b / p.snr_per_bit;
    const long dof = std::llround(2.0 * p.tfwrx);

    std::optional<NakagamiSampler> gain;
    if (p.fading) gain.emplace(*p.fading, /*normalize=*/true);

    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::gamma_distribution<double> chi_square(static_cast<double>(dof) / 2.0, 2.0);
    const double eta_scale = n_f * n0 / 2.0;
    const NoiseStatistic eta = square_noise_statistic(p.tfwrx, n_f, n0);
    const double eta_sd = std::sqrt(eta.variance);

    auto draw_eta = [&]() {
        return exact_noise ? eta_scale * chi_square(rng) : eta.mean + eta_sd * unit_normal(rng);
    };

    std::uint64_t bit_errors = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double h = gain ? gain->sample(rng) : 1.0;
        const double signal = h * h * n_f * n_f * e_p;
        const double cross_sd = std::sqrt(cross_noise_statistic(h, n_f, n0, e_p).variance);
        double best = signal + cross_sd * unit_normal(rng) + draw_eta();
        std::size_t best_index = 0; // transmitted codeword
        for (std::size_t m = 1; m < p.n_bc; ++m) {
            const double j = draw_eta();
            if (j > best) {
                best = j;
                best_index = m;
            }
        }
        bit_errors += std::popcount(best_index); // bits differing from index 0
    }
    return static_cast<double>(bit_errors) / (static_cast<double>(trials) * p.k);
}

} // namespace usbc

#endif
