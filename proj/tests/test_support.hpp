// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors
//
// Shared test oracles. Everything here is intentionally independent of the
// implementation paths it checks (direct pdf integration, sample moments,
// high-precision tail integrals).

#ifndef USBC_TEST_SUPPORT_HPP
#define USBC_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "usbc/channel.hpp"

namespace usbc::test {

/// Generalized Nakagami amplitude pdf, written straight from its definition.
inline double nakagami_pdf(const NakagamiParams& p, double h) {
    if (h <= 0.0) return 0.0;
    const double z = p.shaping, omega = p.spreading, s = p.generalization;
    const double log_pdf = std::log(2.0 * s) + z * std::log(z) +
                           (2.0 * s * z - 1.0) * std::log(h) - std::lgamma(z) -
                           z * std::log(omega) - (z / omega) * std::pow(h, 2.0 * s);
    return std::exp(log_pdf);
}

/// Cumulative trapezoid integration of the pdf on a uniform grid over
/// [0, h_max]. Dense enough that the quadrature error is far below any KS
/// tolerance used in the tests.
struct NumericCdf {
    double dx = 0.0;
    std::vector<double> cumulative;

    double operator()(double x) const {
        if (x <= 0.0) return 0.0;
        const double pos = x / dx;
        const auto idx = static_cast<std::size_t>(pos);
        if (idx + 1 >= cumulative.size()) return cumulative.back();
        const double frac = pos - static_cast<double>(idx);
        return cumulative[idx] + frac * (cumulative[idx + 1] - cumulative[idx]);
    }
};

inline NumericCdf integrate_nakagami_cdf(const NakagamiParams& p, double h_max,
                                         std::size_t intervals = (1u << 21)) {
    NumericCdf cdf;
    cdf.dx = h_max / static_cast<double>(intervals);
    cdf.cumulative.resize(intervals + 1);
    cdf.cumulative[0] = 0.0;
    double prev = nakagami_pdf(p, 0.0);
    for (std::size_t i = 1; i <= intervals; ++i) {
        const double cur = nakagami_pdf(p, static_cast<double>(i) * cdf.dx);
        cdf.cumulative[i] = cdf.cumulative[i - 1] + 0.5 * cdf.dx * (prev + cur);
        prev = cur;
    }
    return cdf;
}

/// Two-sided Kolmogorov-Smirnov statistic of a sorted sample against a CDF.
template <typename Cdf>
double ks_statistic(const std::vector<double>& sorted, const Cdf& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

/// Asymptotic two-sided KS critical value: D > c(alpha)/sqrt(n) rejects.
/// c(0.01) = sqrt(-ln(0.005)/2).
inline double ks_critical_value(double alpha, std::size_t n) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;       // unbiased
    double se_mean = 0.0;        // standard error of the mean
    double se_variance = 0.0;    // standard error of the variance estimate
};

inline SampleMoments sample_moments(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 4) throw std::invalid_argument("need >= 4 samples");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    SampleMoments out;
    out.mean = mean;
    out.variance = m2 * n / (n - 1.0);
    out.se_mean = std::sqrt(out.variance / n);
    // Var(s^2) ~= (m4 - m2^2 (n-3)/(n-1)) / n
    out.se_variance = std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
    return out;
}

} // namespace usbc::test

#endif
