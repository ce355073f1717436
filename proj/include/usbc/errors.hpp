// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_ERRORS_HPP
#define USBC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace usbc {

/// Raised when a numerical routine cannot certify its accuracy target
/// (e.g. a quadrature refinement fails to converge). Distinct from
/// argument/config errors so callers can map it to its own exit code.
class AccuracyError : public std::runtime_error {
  public:
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration / usage errors (bad key, malformed value, bad grid).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace usbc

#endif
