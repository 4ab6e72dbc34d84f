#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Real-argument Gamma machinery, integer-order modified Bessel functions and
// binomial coefficients. Everything here is pure and thread-safe.

namespace fraclap::special {

/// Distance from a non-positive integer below which Gamma is treated as a pole.
inline constexpr double kPoleTolerance = 1e-12;

/// Largest argument for which Gamma is representable as a double.
inline constexpr double kGammaMaxArgument = 171.6243769563027;

bool near_nonpositive_integer(double z, double tol = kPoleTolerance);

/// ln Gamma(x) for x > 0 (Lanczos approximation, g = 607/128).
double log_gamma(double x);

/// Gamma(z) for real z off the poles. Negative arguments are shifted into
/// (0, 1) and divided by the rising product z (z + 1) ... (z + n - 1).
/// Throws PoleError near {0, -1, -2, ...} and OverflowError past ~171.6.
double gamma(double z);

/// gamma() with the leading Lanczos coefficient shifted by c0_offset. Only
/// for fault-injection checks of the validation suite.
double gamma_perturbed(double z, double c0_offset);

/// 1 / Gamma(z); exactly zero at the poles.
double reciprocal_gamma(double z);

/// ln(Gamma(a) / Gamma(b)) for a, b > 0, evaluated without forming either
/// Gamma value so that ratios at arguments ~1e6 keep full relative accuracy.
double log_gamma_ratio(double a, double b);

/// sin(pi x) with argument reduction done before the multiplication by pi.
double sin_pi(double x);

/// exp(-x) I_|k|(x), x >= 0.
double bessel_i_scaled(std::int64_t k, double x);

/// exp(-x) I_k(x) for k = 0..kmax. Power series for x <= 30, Miller's
/// backward recurrence normalised by I_0 + 2 sum_k I_k = e^x above that.
std::vector<double> bessel_i_scaled_row(double x, std::size_t kmax);

/// Binomial coefficient; exact integer arithmetic for n <= 60.
double binomial(std::int64_t n, std::int64_t k);

}  // namespace fraclap::special
