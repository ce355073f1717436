// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_CONFIG_HPP
#define USBC_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "usbc/channel.hpp"
#include "usbc/errors.hpp"
#include "usbc/theory.hpp"

namespace usbc {

/// Inclusive start:stop:step sweep axis in dB.
struct SnrGrid {
    double start = 0.0;
    double stop = 12.0;
    double step = 2.0;

    std::vector<double> values() const {
        if (!(step > 0.0)) throw ConfigError("SNR grid step must be > 0");
        if (stop < start) throw ConfigError("SNR grid stop must be >= start");
        std::vector<double> v;
        for (double x = start; x <= stop + 1e-9; x += step) v.push_back(x);
        return v;
    }
};

/// Full simulation configuration. Field defaults reproduce the headline
/// interference sweep: kidney-phantom fading, 25 time-bandwidth product,
/// 0-12 dB in 2 dB steps, 2e5 trials per point.
struct SimConfig {
    int k = 1;
    std::size_t n_f = 0; // 0 = smallest power of two with n_f - 1 >= 2^k
    SnrGrid snr_db{};
    std::size_t scatters = 1;
    std::size_t trials = 200000;
    double tfwrx = 25.0;
    NakagamiParams tag{0.59, 0.05, 1.12};
    NakagamiParams scatter{0.59, 0.05, 1.12};
    bool normalize = true;
    RoundTripModel roundtrip = RoundTripModel::SingleDraw;
    MultipathProfile multipath{}; // empty taps = single flat path
    std::uint64_t master_seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
    std::size_t theory_fading_draws = 100000;
    FadingAverage faded_average = FadingAverage::MonteCarlo;
    std::string out;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + value);
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + value);
}

} // namespace detail

inline SnrGrid parse_snr_grid(const std::string& text) {
    const auto parts = detail::split(text, ':');
    SnrGrid grid;
    if (parts.size() == 1) {
        grid.start = grid.stop = detail::parse_double("snr_db", parts[0]);
        grid.step = 1.0;
    } else if (parts.size() == 3) {
        grid.start = detail::parse_double("snr_db", parts[0]);
        grid.stop = detail::parse_double("snr_db", parts[1]);
        grid.step = detail::parse_double("snr_db", parts[2]);
    } else {
        throw ConfigError("SNR grid must be START:STOP:STEP or a single value, got '" + text +
                          "'");
    }
    (void)grid.values(); // validate now
    return grid;
}

/// Tap list: "delay:z:omega:s" entries separated by commas.
inline MultipathProfile parse_multipath(const std::string& text) {
    MultipathProfile profile;
    for (const auto& entry : detail::split(text, ',')) {
        const auto fields = detail::split(entry, ':');
        if (fields.size() != 4)
            throw ConfigError("multipath tap must be delay:z:omega:s, got '" + entry + "'");
        MultipathTapSpec tap;
        tap.delay = static_cast<std::size_t>(detail::parse_uint("multipath", fields[0]));
        tap.amplitude = {detail::parse_double("multipath", fields[1]),
                         detail::parse_double("multipath", fields[2]),
                         detail::parse_double("multipath", fields[3])};
        profile.taps.push_back(tap);
    }
    try {
        validate(profile);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad multipath profile: ") + e.what());
    }
    return profile;
}

/// Applies one key = value pair. Unknown keys are an error.
inline void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "k") cfg.k = static_cast<int>(detail::parse_uint(key, value));
    else if (key == "nf") cfg.n_f = detail::parse_uint(key, value);
    else if (key == "snr_db") cfg.snr_db = parse_snr_grid(value);
    else if (key == "scatters") cfg.scatters = detail::parse_uint(key, value);
    else if (key == "trials") cfg.trials = detail::parse_uint(key, value);
    else if (key == "tfwrx") cfg.tfwrx = detail::parse_double(key, value);
    else if (key == "tag_z") cfg.tag.shaping = detail::parse_double(key, value);
    else if (key == "tag_omega") cfg.tag.spreading = detail::parse_double(key, value);
    else if (key == "tag_s") cfg.tag.generalization = detail::parse_double(key, value);
    else if (key == "scatter_z") cfg.scatter.shaping = detail::parse_double(key, value);
    else if (key == "scatter_omega") cfg.scatter.spreading = detail::parse_double(key, value);
    else if (key == "scatter_s") cfg.scatter.generalization = detail::parse_double(key, value);
    else if (key == "normalize") cfg.normalize = detail::parse_bool(key, value);
    else if (key == "roundtrip") {
        if (value == "single") cfg.roundtrip = RoundTripModel::SingleDraw;
        else if (value == "product") cfg.roundtrip = RoundTripModel::Product;
        else throw ConfigError("roundtrip must be 'single' or 'product', got '" + value + "'");
    } else if (key == "multipath") cfg.multipath = parse_multipath(value);
    else if (key == "seed") cfg.master_seed = detail::parse_uint(key, value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(detail::parse_uint(key, value));
    else if (key == "theory_fading_draws") cfg.theory_fading_draws = detail::parse_uint(key, value);
    else if (key == "faded_average") {
        if (value == "mc") cfg.faded_average = FadingAverage::MonteCarlo;
        else if (value == "quadrature") cfg.faded_average = FadingAverage::Quadrature;
        else throw ConfigError("faded_average must be 'mc' or 'quadrature', got '" + value + "'");
    } else if (key == "out") cfg.out = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Loads a flat key = value file ('#' starts a comment).
inline void load_config_file(SimConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(trimmed.substr(0, eq));
        const std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        apply_config_entry(cfg, key, value);
    }
}

} // namespace usbc

#endif
