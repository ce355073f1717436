// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_HARNESS_HPP
#define USBC_HARNESS_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "usbc/channel.hpp"
#include "usbc/codebook.hpp"
#include "usbc/config.hpp"
#include "usbc/csv.hpp"
#include "usbc/errors.hpp"
#include "usbc/receiver.hpp"
#include "usbc/rng.hpp"
#include "usbc/tagphy.hpp"
#include "usbc/theory.hpp"

namespace usbc {

/// One sweep row. ber_sim = errors / (trials * K); std_error is the binomial
/// standard error on that estimate.
struct BerPoint {
    double axis = 0.0;
    double ber_sim = 0.0;
    double ber_theory_cond = 0.0;
    double ber_theory_faded = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double std_error = 0.0;
};

struct BerCurve {
    std::string axis_label = "snr_db";
    std::vector<BerPoint> rows;
};

namespace detail {

/// Everything fixed for one sweep point. The reader code, codebook, and
/// pulse are shared immutably across all workers.
struct PointSetup {
    int k = 1;
    std::size_t n_f = 4;
    double n0 = 1.0;
    std::size_t point_index = 0;
    std::uint64_t master_seed = 1;
    std::size_t scatters = 1;
    RoundTripModel roundtrip = RoundTripModel::SingleDraw;
    Codebook book;
    ReaderCode code;
    Pulse pulse;
    NakagamiSampler tag_sampler;
    NakagamiSampler scatter_sampler;
    MultipathProfile multipath; // empty taps = flat single path
    std::vector<double> tap_scales;
};

inline PointSetup make_point_setup(const SimConfig& cfg, int k, std::size_t n_f, double snr_db,
                                   std::size_t point_index) {
    PointSetup s;
    s.k = k;
    s.n_f = n_f;
    s.point_index = point_index;
    s.master_seed = cfg.master_seed;
    s.scatters = cfg.scatters;
    s.roundtrip = cfg.roundtrip;
    s.book = build_codebook(n_f, k);
    s.code = generate_reader_code(n_f, derive_seed(cfg.master_seed, lane::reader_code, 0, 0));

    FrameGrid grid;
    grid.n_f = n_f;
    grid.w_rx = 1e6;
    grid.t_f = cfg.tfwrx / grid.w_rx;
    const double e_p = 1.0;
    s.pulse = make_monocycle(grid, e_p);

    // SNR axis: mean received per-bit SNR with the fading normalized to unit
    // mean-square gain and E_p = 1, so N0 follows from the axis value alone.
    const double gamma_bar = std::pow(10.0, snr_db / 10.0);
    const double e_b = static_cast<double>(n_f) * e_p / static_cast<double>(k);
    s.n0 = e_b / gamma_bar;

    s.tag_sampler = NakagamiSampler(cfg.tag, cfg.normalize);
    s.scatter_sampler = NakagamiSampler(cfg.scatter, cfg.normalize);
    s.multipath = cfg.multipath;
    for (const auto& tap : s.multipath.taps)
        s.tap_scales.push_back(cfg.normalize ? 1.0 / std::sqrt(nakagami_moment(tap.amplitude, 2.0))
                                             : 1.0);
    return s;
}

/// One symbol: draw bits and channel from the trial stream, noise from its
/// own stream (so the scatter count never shifts the noise draws), then
/// synthesize, detect, and count bit errors.
inline std::uint64_t run_trial(const PointSetup& s, std::size_t trial) {
    auto trial_rng = make_stream(s.master_seed, lane::trial, s.point_index, trial);
    auto noise_rng = make_stream(s.master_seed, lane::noise, s.point_index, trial);

    BitBlock bits;
    bits.bits.resize(s.k);
    for (int i = 0; i < s.k; ++i) bits.bits[i] = static_cast<std::uint8_t>(trial_rng() & 1u);
    const Codeword& sent = map_bits(bits, s.book);

    ChannelRealization ch;
    std::vector<CirTap> taps;
    if (s.multipath.taps.empty()) {
        ch = sample_channel_realization(s.tag_sampler, s.scatter_sampler, s.scatters, trial_rng,
                                        s.roundtrip);
    } else {
        taps = build_cir(s.multipath, trial_rng);
        for (std::size_t l = 0; l < taps.size(); ++l) taps[l].amplitude *= s.tap_scales[l];
        ch.tag_roundtrip_gain = taps.front().amplitude;
        ch.scatter_gains.reserve(s.scatters);
        for (std::size_t l = 0; l < s.scatters; ++l)
            ch.scatter_gains.push_back(s.scatter_sampler.sample(trial_rng));
    }

    const auto received = synthesize_received(sent, s.code, s.pulse, ch, s.n0, noise_rng, taps);
    const Detection det = detect(received, s.book, s.code);

    std::uint64_t errors = 0;
    for (int i = 0; i < s.k; ++i) errors += (det.bits.bits[i] != bits.bits[i]) ? 1u : 0u;
    return errors;
}

/// Runs [0, trials) split across workers; the per-trial substreams make the
/// partition irrelevant to the result, and the integer error counts reduce
/// exactly, so any worker count produces identical output.
inline std::uint64_t run_point_trials(const PointSetup& s, std::size_t trials, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads == 1 || trials < 2 * threads) {
        std::uint64_t errors = 0;
        for (std::size_t t = 0; t < trials; ++t) errors += run_trial(s, t);
        return errors;
    }
    std::vector<std::uint64_t> partial(threads, 0);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            const std::size_t lo = trials * w / threads;
            const std::size_t hi = trials * (w + 1) / threads;
            std::uint64_t errors = 0;
            for (std::size_t t = lo; t < hi; ++t) errors += run_trial(s, t);
            partial[w] = errors;
        });
    }
    for (auto& th : pool) th.join();
    std::uint64_t errors = 0;
    for (std::uint64_t e : partial) errors += e;
    return errors;
}

inline std::size_t resolve_frame_count(const SimConfig& cfg, int k) {
    return cfg.n_f != 0 ? cfg.n_f : min_frame_count(k);
}

} // namespace detail

/// Simulated bit errors for one (k, snr) point under the given config.
/// Exposed so statistic-level and waveform-level estimates can be compared
/// on identical footing.
inline std::uint64_t simulate_point_bit_errors(const SimConfig& cfg, int k, double snr_db,
                                               std::size_t point_index, std::size_t trials) {
    const auto setup =
        detail::make_point_setup(cfg, k, detail::resolve_frame_count(cfg, k), snr_db, point_index);
    return detail::run_point_trials(setup, trials, cfg.threads);
}

namespace detail {

inline BerPoint make_row(const SimConfig& cfg, int k, double axis, double snr_db,
                         std::size_t point_index) {
    const std::size_t n_f = resolve_frame_count(cfg, k);
    const auto setup = make_point_setup(cfg, k, n_f, snr_db, point_index);
    const std::uint64_t errors = run_point_trials(setup, cfg.trials, cfg.threads);

    BerPoint row;
    row.axis = axis;
    row.trials = cfg.trials;
    row.errors = errors;
    const double bits = static_cast<double>(cfg.trials) * static_cast<double>(k);
    row.ber_sim = static_cast<double>(errors) / bits;
    row.std_error = std::sqrt(row.ber_sim * (1.0 - row.ber_sim) / bits);

    TheoryParams tp;
    tp.k = k;
    tp.n_bc = std::size_t{1} << k;
    tp.tfwrx = cfg.tfwrx;
    tp.snr_per_bit = std::pow(10.0, snr_db / 10.0);
    row.ber_theory_cond = ber_theoretical(tp);
    tp.fading = cfg.tag;
    row.ber_theory_faded =
        ber_theoretical(tp, cfg.faded_average, cfg.theory_fading_draws,
                        derive_seed(cfg.master_seed, lane::theory_fading, point_index, 0));
    return row;
}

} // namespace detail

/// BER versus SNR sweep (the interference-immunity figure).
inline BerCurve run_ber_vs_snr(const SimConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    BerCurve curve;
    curve.axis_label = "snr_db";
    const auto grid = cfg.snr_db.values();
    for (std::size_t i = 0; i < grid.size(); ++i)
        curve.rows.push_back(detail::make_row(cfg, cfg.k, grid[i], grid[i], i));
    return curve;
}

/// BER versus bits-per-symbol sweeps at the default fixed SNRs (6 and 9 dB).
inline std::vector<BerCurve> run_ber_vs_k(const SimConfig& cfg, std::span<const int> k_grid);

/// BER versus bits-per-symbol sweep at one fixed SNR.
inline BerCurve run_ber_vs_k(const SimConfig& cfg, std::span<const int> k_grid, double snr_db) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (k_grid.empty()) throw ConfigError("k grid must be non-empty");
    BerCurve curve;
    curve.axis_label = "k";
    for (std::size_t i = 0; i < k_grid.size(); ++i)
        curve.rows.push_back(
            detail::make_row(cfg, k_grid[i], static_cast<double>(k_grid[i]), snr_db, i));
    return curve;
}

inline std::vector<BerCurve> run_ber_vs_k(const SimConfig& cfg, std::span<const int> k_grid) {
    return {run_ber_vs_k(cfg, k_grid, 6.0), run_ber_vs_k(cfg, k_grid, 9.0)};
}

inline void write_csv(const BerCurve& curve, std::ostream& out) {
    const std::string header[] = {curve.axis_label, "ber_sim",         "ber_theory_cond",
                                  "ber_theory_faded", "trials", "errors", "std_error"};
    write_csv_row(out, header);
    for (const BerPoint& row : curve.rows) {
        const std::string fields[] = {csv_number(row.axis),
                                      csv_number(row.ber_sim),
                                      csv_number(row.ber_theory_cond),
                                      csv_number(row.ber_theory_faded),
                                      csv_number(row.trials),
                                      csv_number(row.errors),
                                      csv_number(row.std_error)};
        write_csv_row(out, fields);
    }
}

inline std::string curve_to_csv(const BerCurve& curve) {
    std::ostringstream out;
    write_csv(curve, out);
    return out.str();
}

inline void write_csv_file(const BerCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(curve, out);
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

} // namespace usbc

#endif
