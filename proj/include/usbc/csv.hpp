// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_CSV_HPP
#define USBC_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace usbc {

/// Quotes a field if it contains a comma, quote, or newline (the numeric
/// output never does, but the writer stays general).
inline std::string csv_field(std::string_view raw) {
    if (raw.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(raw);
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

/// Fixed %.12g formatting keeps output bytes stable across runs.
inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_number(std::uint64_t v) { return std::to_string(v); }

inline void write_csv_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << csv_field(fields[i]);
    }
    out << '\n'; // LF endings
}

} // namespace usbc

#endif
