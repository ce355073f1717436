// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors
//
// Command line front end:
//   usbc simulate  — Monte Carlo BER vs SNR sweep, CSV out
//   usbc theory    — closed-form BER columns over an SNR grid, CSV out
//   usbc codebook  — print the balanced orthogonal codebook as CSV rows
//   usbc waveform  — dump a pulse / switch-state reflection as CSV
//
// Exit codes: 0 success, 1 usage or config error, 2 numerical-accuracy error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "usbc/usbc.hpp"

namespace {

struct SimulateArgs {
    std::optional<int> k;
    std::optional<std::size_t> scatters;
    std::optional<std::string> snr_db;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
    std::string config_path;
};

int cmd_simulate(const SimulateArgs& args) {
    usbc::SimConfig cfg;
    if (!args.config_path.empty()) usbc::load_config_file(cfg, args.config_path);
    if (args.k) cfg.k = *args.k;
    if (args.scatters) cfg.scatters = *args.scatters;
    if (args.snr_db) cfg.snr_db = usbc::parse_snr_grid(*args.snr_db);
    if (args.trials) cfg.trials = *args.trials;
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.threads) cfg.threads = *args.threads;
    if (!args.out.empty()) cfg.out = args.out;
    if (cfg.out.empty()) throw usbc::ConfigError("simulate needs --out (or 'out' in the config)");

    const usbc::BerCurve curve = usbc::run_ber_vs_snr(cfg);
    usbc::write_csv_file(curve, cfg.out);
    return 0;
}

struct TheoryArgs {
    int k = 1;
    std::string snr_db = "0:12:2";
    double tfwrx = 25.0;
    std::size_t draws = 100000;
    std::uint64_t seed = usbc::kDefaultFadingSeed;
    std::string method = "mc";
    std::string out;
    double tag_z = 0.59, tag_omega = 0.05, tag_s = 1.12;
};

int cmd_theory(const TheoryArgs& args) {
    usbc::FadingAverage method;
    if (args.method == "mc") method = usbc::FadingAverage::MonteCarlo;
    else if (args.method == "quadrature") method = usbc::FadingAverage::Quadrature;
    else throw usbc::ConfigError("--method must be 'mc' or 'quadrature'");

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out.empty()) {
        file.open(args.out, std::ios::binary);
        if (!file) throw usbc::ConfigError("cannot open output file: " + args.out);
        out = &file;
    }

    const std::string header[] = {"snr_db", "ber_conditional", "ber_faded"};
    usbc::write_csv_row(*out, header);
    for (double snr : usbc::parse_snr_grid(args.snr_db).values()) {
        usbc::TheoryParams tp;
        tp.k = args.k;
        tp.n_bc = std::size_t{1} << args.k;
        tp.tfwrx = args.tfwrx;
        tp.snr_per_bit = std::pow(10.0, snr / 10.0);
        const double cond = usbc::ber_theoretical(tp);
        tp.fading = usbc::NakagamiParams{args.tag_z, args.tag_omega, args.tag_s};
        const double faded = usbc::ber_theoretical(tp, method, args.draws, args.seed);
        const std::string fields[] = {usbc::csv_number(snr), usbc::csv_number(cond),
                                      usbc::csv_number(faded)};
        usbc::write_csv_row(*out, fields);
    }
    return 0;
}

int cmd_codebook(std::size_t n_f, int k) {
    const usbc::Codebook book = usbc::build_codebook(n_f, k);
    for (const usbc::Codeword& cw : book.codewords) {
        for (std::size_t j = 0; j < cw.elements.size(); ++j) {
            if (j) std::cout << ',';
            std::cout << cw.elements[j];
        }
        std::cout << '\n';
    }
    return 0;
}

struct WaveformArgs {
    std::string state; // empty = raw pulse
    std::string out;
    double tfwrx = 25.0;
    double e_p = 1.0;
    double load = 1.0;
    std::size_t delay = 10;
};

int cmd_waveform(const WaveformArgs& args) {
    usbc::FrameGrid grid;
    grid.n_f = 4;
    grid.w_rx = 1e6;
    grid.t_f = args.tfwrx / grid.w_rx;
    const usbc::Pulse pulse = usbc::make_monocycle(grid, args.e_p);

    std::vector<double> samples;
    if (args.state.empty()) samples = pulse.samples;
    else {
        usbc::SwitchState state;
        if (args.state == "off") state = usbc::SwitchOff{};
        else if (args.state == "a") state = usbc::SwitchMatch{args.load};
        else if (args.state == "b") state = usbc::SwitchShort{};
        else if (args.state == "c") state = usbc::SwitchDelay{args.delay};
        else throw usbc::ConfigError("--state must be one of off|a|b|c");
        samples = usbc::switch_response(state, pulse);
    }

    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw usbc::ConfigError("cannot open output file: " + args.out);
    const std::string header[] = {"sample", "value"};
    usbc::write_csv_row(file, header);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string fields[] = {std::to_string(i), usbc::csv_number(samples[i])};
        usbc::write_csv_row(file, fields);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level simulator for ultrasonic backscatter tags"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo BER vs SNR sweep");
    simulate->add_option("--k", sim.k, "tag bits per symbol");
    simulate->add_option("--scatters", sim.scatters, "number of interfering scatters");
    simulate->add_option("--snr-db", sim.snr_db, "SNR grid START:STOP:STEP in dB");
    simulate->add_option("--trials", sim.trials, "Monte Carlo trials per point");
    simulate->add_option("--seed", sim.seed, "master seed");
    simulate->add_option("--threads", sim.threads, "worker count (0 = hardware)");
    simulate->add_option("--out", sim.out, "output CSV path");
    simulate->add_option("--config", sim.config_path, "key = value config file");

    TheoryArgs theo;
    auto* theory = app.add_subcommand("theory", "Closed-form BER over an SNR grid");
    theory->add_option("--k", theo.k, "tag bits per symbol");
    theory->add_option("--snr-db", theo.snr_db, "SNR grid START:STOP:STEP in dB");
    theory->add_option("--tfwrx", theo.tfwrx, "frame time-bandwidth product");
    theory->add_option("--draws", theo.draws, "fading draws for the averaged column");
    theory->add_option("--seed", theo.seed, "fading draw seed");
    theory->add_option("--method", theo.method, "fading average: mc or quadrature");
    theory->add_option("--tag-z", theo.tag_z, "fading shaping parameter");
    theory->add_option("--tag-omega", theo.tag_omega, "fading spreading parameter");
    theory->add_option("--tag-s", theo.tag_s, "fading generalization parameter");
    theory->add_option("--out", theo.out, "output CSV path (default stdout)");

    std::size_t cb_nf = 0;
    int cb_k = 0;
    auto* codebook = app.add_subcommand("codebook", "Print the codebook as CSV rows of +-1");
    codebook->add_option("--nf", cb_nf, "frames per symbol (power of two)")->required();
    codebook->add_option("--k", cb_k, "tag bits per symbol")->required();

    WaveformArgs wave;
    auto* waveform = app.add_subcommand("waveform", "Dump a pulse or switch reflection as CSV");
    waveform->add_option("--state", wave.state, "switch state off|a|b|c (default: raw pulse)");
    waveform->add_option("--out", wave.out, "output CSV path")->required();
    waveform->add_option("--tfwrx", wave.tfwrx, "frame time-bandwidth product");
    waveform->add_option("--ep", wave.e_p, "pulse energy");
    waveform->add_option("--load", wave.load, "load fraction for state a");
    waveform->add_option("--delay", wave.delay, "delay in samples for state c");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (theory->parsed()) return cmd_theory(theo);
        if (codebook->parsed()) return cmd_codebook(cb_nf, cb_k);
        if (waveform->parsed()) return cmd_waveform(wave);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const usbc::AccuracyError& e) {
        std::cerr << "numerical accuracy error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
