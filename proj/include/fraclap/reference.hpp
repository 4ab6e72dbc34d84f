#pragma once

#include <cstdint>

// Slow, literal evaluations kept for cross-checking the production paths.
// Nothing in the operator or localization code calls into here.

namespace fraclap::reference {

/// K_s(k) straight from the defining quotient
///   -4^s Gamma(1/2+s) Gamma(|k|-s) / (sqrt(pi) Gamma(-s) Gamma(|k|+1+s)),
/// with plain Gamma evaluations (no log ratios, no reflection).
double kernel_definition_form(double s, std::int64_t k);

/// Largest eigenvalue of the Dirichlet second-difference matrix of size n
/// (diagonal -2, off-diagonals 1) by power iteration on Delta + 4 I.
double log_norm_power_iteration(std::int64_t n, int max_iterations = 200000, double tol = 1e-14);

}  // namespace fraclap::reference
