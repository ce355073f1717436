// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "usbc/quadrature.hpp"
#include "usbc/theory.hpp"

using namespace usbc;

namespace {

const NakagamiParams kKidney{0.59, 0.05, 1.12};

TheoryParams params_for(int k, double snr_linear, double tfwrx = 25.0) {
    TheoryParams p;
    p.k = k;
    p.n_bc = std::size_t{1} << k;
    p.tfwrx = tfwrx;
    p.snr_per_bit = snr_linear;
    return p;
}

/// Independent high-precision upper-tail oracle (long double erfc from a
/// separate implementation).
long double q_reference(long double x) {
    return 0.5L * boost::math::erfc(x / boost::math::constants::root_two<long double>());
}

} // namespace

TEST_CASE("Gaussian Q function") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(40.0) == 0.0);
    CHECK(q_function(-40.0) == 1.0);
    CHECK(q_function(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(q_function(-std::numeric_limits<double>::infinity()) == 1.0);

    CHECK(q_function(1.2816) == Catch::Approx(0.1).margin(1e-4));
    CHECK(q_function(1.2816) ==
          Catch::Approx(static_cast<double>(q_reference(1.2816L))).epsilon(1e-12));

    SECTION("relative error below 1e-10 over |x| <= 8") {
        for (double x = -8.0; x <= 8.0 + 1e-12; x += 0.25) {
            const long double ref = q_reference(static_cast<long double>(x));
            const long double rel = std::abs((static_cast<long double>(q_function(x)) - ref) / ref);
            CHECK(rel < 1e-10L);
        }
    }
}

TEST_CASE("Gauss-Hermite rule integrates low moments of exp(-x^2) exactly") {
    const QuadratureRule& rule = gauss_hermite(64);
    double w_sum = 0.0, x2 = 0.0, x4 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        w_sum += rule.weights[i];
        x2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
        x4 += rule.weights[i] * std::pow(rule.nodes[i], 4);
    }
    const double root_pi = std::sqrt(M_PI);
    CHECK(w_sum == Catch::Approx(root_pi).epsilon(1e-13));
    CHECK(x2 == Catch::Approx(0.5 * root_pi).epsilon(1e-13));
    CHECK(x4 == Catch::Approx(0.75 * root_pi).epsilon(1e-13));
}

TEST_CASE("generalized Gauss-Laguerre rule integrates the Gamma weight") {
    const double alpha = -0.41; // kidney-phantom shaping minus one
    const QuadratureRule rule = make_gauss_laguerre(64, alpha);
    double w_sum = 0.0, x1 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        w_sum += rule.weights[i];
        x1 += rule.weights[i] * rule.nodes[i];
    }
    CHECK(w_sum == Catch::Approx(std::tgamma(alpha + 1.0)).epsilon(1e-12));
    CHECK(x1 == Catch::Approx(std::tgamma(alpha + 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(make_gauss_laguerre(16, -1.0), std::invalid_argument);
}

TEST_CASE("correct-detection probability") {
    SECTION("approaches 1 as the SNR grows without bound") {
        CHECK(p_correct_conditional(params_for(1, 1e6)) == Catch::Approx(1.0).margin(1e-9));
        CHECK(p_correct_conditional(params_for(3, 1e6)) == Catch::Approx(1.0).margin(1e-9));
    }

    SECTION("non-decreasing in the SNR") {
        for (int k : {1, 2, 3}) {
            double prev = 0.0;
            for (double snr = 0.25; snr <= 64.0; snr *= 2.0) {
                const double cur = p_correct_conditional(params_for(k, snr));
                CHECK(cur >= prev - 1e-12);
                prev = cur;
            }
        }
    }

    SECTION("the converged value is stable under doubling the base order") {
        for (int k : {1, 2, 4})
            for (double snr : {0.5, 2.0, 4.0, 15.85, 100.0})
                CHECK(std::abs(p_correct_conditional(params_for(k, snr), 64) -
                               p_correct_conditional(params_for(k, snr), 128)) < 1e-8);
    }

    SECTION("hitting the node cap unconverged raises the accuracy error") {
        CHECK_THROWS_AS(p_correct_conditional(params_for(1, 4.0), 1, 2), AccuracyError);
    }

    SECTION("parameter validation") {
        TheoryParams bad = params_for(2, 4.0);
        bad.n_bc = 3;
        CHECK_THROWS_AS(p_correct_conditional(bad), std::invalid_argument);
        CHECK_THROWS_AS(p_correct_conditional(params_for(1, 4.0, 19.0)), std::invalid_argument);
        CHECK_THROWS_AS(p_correct_conditional(params_for(1, 0.0)), std::invalid_argument);
    }

    SECTION("matches the Gaussian-approximation statistic oracle at 6 dB") {
        const TheoryParams p = params_for(1, 4.0);
        const double p_corr = p_correct_conditional(p);
        RandomStream rng(4242);
        const double ber = statistic_oracle(p, 2'000'000, rng, /*exact_noise=*/false);
        // K = 1: BER equals the codeword error probability.
        CHECK(p_corr == Catch::Approx(1.0 - ber).margin(1e-3));
    }
}

TEST_CASE("decision-statistic noise moments") {
    // T = 25, N_f = 4, N0 = 0.5: mean 50, variance 100.
    const NoiseStatistic eta = square_noise_statistic(25.0, 4.0, 0.5);
    CHECK(eta.mean == Catch::Approx(50.0));
    CHECK(eta.variance == Catch::Approx(100.0));
    // Cross term at unit gain: variance 2 * 64 * 0.5 = 64.
    const NoiseStatistic cross = cross_noise_statistic(1.0, 4.0, 0.5, 1.0);
    CHECK(cross.mean == 0.0);
    CHECK(cross.variance == Catch::Approx(64.0));
    CHECK_THROWS_AS(square_noise_statistic(0.0, 4.0, 0.5), std::invalid_argument);
}

TEST_CASE("codeword-error to bit-error conversion") {
    CHECK(ber_from_pcorrect(0.9, 1) == Catch::Approx(0.1).epsilon(1e-12));
    CHECK(ber_from_pcorrect(0.7, 2) == Catch::Approx(0.2).epsilon(1e-12));
    CHECK(ber_from_pcorrect(1.0, 4) == 0.0);

    SECTION("prefactor is 1 at K = 1 and falls toward 1/2") {
        double prev = 1.0 + 1e-12;
        for (int k = 1; k <= 12; ++k) {
            const double prefactor = ber_from_pcorrect(0.0, k);
            CHECK(prefactor < prev);
            CHECK(prefactor > 0.5);
            prev = prefactor;
        }
        CHECK(ber_from_pcorrect(0.0, 20) == Catch::Approx(0.5).margin(1e-5));
    }

    CHECK_THROWS_AS(ber_from_pcorrect(1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(ber_from_pcorrect(-0.1, 1), std::invalid_argument);
}

TEST_CASE("theoretical BER") {
    SECTION("without fading it is the conditional chain") {
        const TheoryParams p = params_for(2, 6.0);
        CHECK(ber_theoretical(p) ==
              Catch::Approx(ber_from_pcorrect(p_correct_conditional(p), 2)).epsilon(1e-12));
    }

    SECTION("decreasing in SNR, conditional and fading-averaged") {
        double prev_cond = 1.0, prev_faded = 1.0;
        for (double snr : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            TheoryParams p = params_for(1, snr);
            const double cond = ber_theoretical(p);
            CHECK(cond < prev_cond);
            prev_cond = cond;
            p.fading = kKidney;
            const double faded = ber_theoretical(p, FadingAverage::Quadrature);
            CHECK(faded < prev_faded);
            prev_faded = faded;
        }
    }

    SECTION("two bits per symbol beat one at and above 6 dB") {
        for (double snr : {4.0, 7.0, 15.85}) {
            CHECK(ber_theoretical(params_for(2, snr)) <= ber_theoretical(params_for(1, snr)));
            TheoryParams p1 = params_for(1, snr), p2 = params_for(2, snr);
            p1.fading = kKidney;
            p2.fading = kKidney;
            CHECK(ber_theoretical(p2, FadingAverage::Quadrature) <=
                  ber_theoretical(p1, FadingAverage::Quadrature));
        }
    }

    SECTION("Monte Carlo and quadrature fading averages agree") {
        for (double snr : {1.0, 4.0, 15.85}) {
            TheoryParams p = params_for(1, snr);
            p.fading = kKidney;
            const double mc = ber_theoretical(p, FadingAverage::MonteCarlo, 100000, 99);
            const double quad = ber_theoretical(p, FadingAverage::Quadrature);
            CHECK(mc == Catch::Approx(quad).margin(5e-3));
        }
    }
}

TEST_CASE("statistic-level oracle") {
    SECTION("requires enough trials") {
        RandomStream rng(1);
        CHECK_THROWS_AS(statistic_oracle(params_for(1, 4.0), 100, rng, true),
                        std::invalid_argument);
    }

    SECTION("vanishes at very high SNR") {
        RandomStream rng(2);
        CHECK(statistic_oracle(params_for(1, 1e6), 100000, rng, true) == 0.0);
        CHECK(statistic_oracle(params_for(2, 1e6), 100000, rng, false) == 0.0);
    }

    SECTION("the Gaussian approximation overstates the BER at 12 dB") {
        TheoryParams p = params_for(1, 15.848931924611133); // 12 dB
        p.fading = kKidney;
        RandomStream rng_a(3), rng_b(3);
        const std::size_t trials = 4'000'000;
        const double exact = statistic_oracle(p, trials, rng_a, true);
        const double gauss = statistic_oracle(p, trials, rng_b, false);
        CHECK(gauss > exact);
    }

    SECTION("estimates are probabilities for benign and extreme inputs") {
        RandomStream rng(4);
        for (int k : {1, 3}) {
            for (double snr : {1e-6, 0.5, 20.0, 1e8}) {
                TheoryParams p = params_for(k, snr);
                const double ber = statistic_oracle(p, 10000, rng, k == 1);
                CHECK(ber >= 0.0);
                CHECK(ber <= 1.0);
                p.fading = kKidney;
                const double faded = statistic_oracle(p, 10000, rng, true);
                CHECK(faded >= 0.0);
                CHECK(faded <= 1.0);
            }
        }
    }

    SECTION("probabilities never leave [0, 1] along the theory chain") {
        for (int k : {1, 2, 4}) {
            for (double snr : {1e-6, 1e-2, 1.0, 1e4, 1e8}) {
                TheoryParams p = params_for(k, snr);
                const double pc = p_correct_conditional(p);
                CHECK(pc >= 0.0);
                CHECK(pc <= 1.0);
                const double ber = ber_theoretical(p);
                CHECK(std::isfinite(ber));
                CHECK(ber >= 0.0);
                CHECK(ber <= 0.5 + 1e-12);
                p.fading = kKidney;
                const double faded = ber_theoretical(p, FadingAverage::Quadrature);
                CHECK(std::isfinite(faded));
                CHECK(faded >= 0.0);
                CHECK(faded <= 0.5 + 1e-12);
            }
        }
    }
}
