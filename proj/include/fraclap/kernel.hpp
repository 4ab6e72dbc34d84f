#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// The fractional kernel K_s(k): off-diagonal coefficients of (-Delta)^s,
//
//   ((-Delta)^s u)(n) = A_s u(n) - sum_{k != n} K_s(n - k) u(k).
//
// K_s is even in k, vanishes at k = 0, decays like |k|^{-1-2s} and sums to
// A_s = 4^s Gamma(1/2 + s) / (sqrt(pi) Gamma(1 + s)).

namespace fraclap {

/// Orders within this distance of an integer use the integer limit kernel.
inline constexpr double kIntegerOrderTolerance = 1e-9;

bool is_near_integer_order(double s) noexcept;

/// K_s(k) for non-integer s > 0 through the Gamma-ratio form
///   (-1)^{k+1} Gamma(2s+1) / (Gamma(1+s+k) Gamma(1+s-k)),
/// using the reflection formula and log-Gamma ratios once |k| > s.
double kernel_value(double s, std::int64_t k);

/// lim_{z -> s} K_z(k) at integer order: (-1)^{k+1} C(2s, s+|k|) for
/// 1 <= |k| <= s, zero otherwise.
double kernel_limit_at_integer(std::int64_t s, std::int64_t k);

/// kernel_value away from integers, kernel_limit_at_integer within 1e-9.
double kernel_extended(double s, std::int64_t k);

/// A_s; exact central binomial coefficient at integer s.
double kernel_sum(double s);

/// lim_k |K_s(k)| k^{1+2s} = 4^s Gamma(1/2+s) / (sqrt(pi) |Gamma(-s)|).
double kernel_asymptotic_constant(double s);

/// Certified bound on sum_{|k| > radius} |K_s(k)|; zero at integer order.
double kernel_tail_bound(double s, std::int64_t radius);

struct KernelTable {
  double s = 0.0;
  std::int64_t radius = 0;
  std::vector<double> values;  // K_s(k), k = 0..radius
  double total_sum = 0.0;      // A_s
  double tail_bound = 0.0;

  /// K_s(k) for |k| <= radius, zero beyond.
  double at(std::int64_t k) const noexcept;

  /// Coefficients for k = -radius..radius.
  std::vector<double> symmetric() const;
};

/// Requires radius >= max(2, ceil(s) + 1).
KernelTable build_table(double s, std::int64_t radius);

/// max over k in [ceil(s)+1, k_max] of |K_s(k)| k^{1+2s}. For k_max >= 1000 the
/// sequence must have settled: the values at k_max and k_max/2 agree to 1e-3
/// relative, otherwise NonConvergenceError.
double decay_certificate(double s, std::int64_t k_max);

/// |Gamma(m-s)/(2s Gamma(m+s)) + sum_{k=1}^{m-1} Gamma(k-s)/Gamma(k+1+s)
///   + Gamma(-s)/(2 Gamma(1+s))|, which vanishes identically.
double partial_sum_identity_check(double s, std::int64_t m);

/// Same check against a caller-supplied Gamma implementation.
double partial_sum_identity_check(double s, std::int64_t m,
                                  const std::function<double(double)>& gamma_fn);

}  // namespace fraclap
