// SPDX-License-Identifier: Apache-2.0
//
// usbc: link-level toolkit for ultrasonic backscatter communication
// Copyright (c) 2026 the usbc authors

#ifndef USBC_QUADRATURE_HPP
#define USBC_QUADRATURE_HPP

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace usbc {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
/// orthogonal-polynomial recurrence, weights are mu0 times the squared first
/// eigenvector components.
inline QuadratureRule golub_welsch(const std::vector<double>& diag,
                                   const std::vector<double>& offdiag, double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = diag[i];
        if (i + 1 < n) {
            jacobi(i, i + 1) = offdiag[i];
            jacobi(i + 1, i) = offdiag[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("quadrature eigen decomposition failed");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace detail

/// n-point Gauss-Hermite rule for weight exp(-x^2):
/// integral f(x) exp(-x^2) dx ~= sum w_i f(x_i).
inline QuadratureRule make_gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    std::vector<double> diag(n, 0.0), offdiag(n - 1);
    for (int k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(k / 2.0);
    return detail::golub_welsch(diag, offdiag, std::sqrt(M_PI));
}

/// Cached Gauss-Hermite rule; safe for concurrent callers.
inline const QuadratureRule& gauss_hermite(int n) {
    static std::mutex guard;
    static std::map<int, QuadratureRule> cache;
    std::scoped_lock lock(guard);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_hermite(n)).first;
    return it->second;
}

/// n-point generalized Gauss-Laguerre rule for weight x^alpha exp(-x),
/// alpha > -1: integral_0^inf f(x) x^alpha exp(-x) dx ~= sum w_i f(x_i).
inline QuadratureRule make_gauss_laguerre(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
    if (!(alpha > -1.0)) throw std::invalid_argument("Laguerre weight exponent must exceed -1");
    std::vector<double> diag(n), offdiag(n - 1);
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(k * (k + alpha));
    return detail::golub_welsch(diag, offdiag, std::exp(std::lgamma(alpha + 1.0)));
}

} // namespace usbc

#endif
