#include "fraclap/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/special_functions.hpp"

namespace fraclap {

namespace {

constexpr double kTailSafetyFactor = 1.5;

void require_positive_order(double s, const char* where) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError(std::string(where) + ": order s must be positive and finite");
  }
}

void require_non_integer_order(double s, const char* where) {
  if (is_near_integer_order(s)) {
    throw NearIntegerOrderError(std::string(where) + ": s = " + std::to_string(s) +
                                " is within 1e-9 of an integer; use kernel_extended");
  }
}

std::int64_t abs_index(std::int64_t k) noexcept { return k < 0 ? -k : k; }

// |K_s(k)| k^{1+2s}, k > s.
double scaled_magnitude(double s, std::int64_t k) {
  const double kd = static_cast<double>(k);
  return std::abs(kernel_value(s, k)) * std::pow(kd, 1.0 + 2.0 * s);
}

}  // namespace

bool is_near_integer_order(double s) noexcept {
  return std::abs(s - std::round(s)) <= kIntegerOrderTolerance;
}

double kernel_value(double s, std::int64_t k) {
  require_positive_order(s, "kernel_value");
  require_non_integer_order(s, "kernel_value");
  k = abs_index(k);
  if (k == 0) {
    return 0.0;
  }
  const double kd = static_cast<double>(k);
  if (kd < s) {
    // All Gamma arguments positive: 1 + s - k > 1 + s - floor(s) > 1.
    const double magnitude =
        std::exp(special::log_gamma_ratio(2.0 * s + 1.0, 1.0 + s + kd) -
                 special::log_gamma(1.0 + s - kd));
    return (k % 2 == 1) ? magnitude : -magnitude;
  }
  // Reflection: 1/Gamma(1+s-k) = Gamma(k-s) sin(pi(1+s-k)) / pi, and
  // (-1)^{k+1} sin(pi(1+s-k)) = sin(pi s).
  const double sine = special::sin_pi(s);
  const double log_magnitude = special::log_gamma(2.0 * s + 1.0) + std::log(std::abs(sine)) -
                               std::log(std::numbers::pi) +
                               special::log_gamma_ratio(kd - s, kd + 1.0 + s);
  const double magnitude = std::exp(log_magnitude);
  return sine > 0.0 ? magnitude : -magnitude;
}

double kernel_limit_at_integer(std::int64_t s, std::int64_t k) {
  if (s < 1) {
    throw DomainError("kernel_limit_at_integer: s must be a positive integer");
  }
  k = abs_index(k);
  if (k == 0 || k > s) {
    return 0.0;
  }
  const double c = special::binomial(2 * s, s + k);
  return (k % 2 == 1) ? c : -c;
}

double kernel_extended(double s, std::int64_t k) {
  require_positive_order(s, "kernel_extended");
  if (is_near_integer_order(s)) {
    return kernel_limit_at_integer(static_cast<std::int64_t>(std::round(s)), k);
  }
  return kernel_value(s, k);
}

double kernel_sum(double s) {
  require_positive_order(s, "kernel_sum");
  if (s == std::round(s) && s <= 30.0) {
    const auto m = static_cast<std::int64_t>(s);
    return special::binomial(2 * m, m);
  }
  return std::exp(s * std::log(4.0) + special::log_gamma_ratio(0.5 + s, 1.0 + s)) /
         std::sqrt(std::numbers::pi);
}

double kernel_asymptotic_constant(double s) {
  require_positive_order(s, "kernel_asymptotic_constant");
  return std::exp(s * std::log(4.0) + special::log_gamma(0.5 + s)) *
         std::abs(special::reciprocal_gamma(-s)) / std::sqrt(std::numbers::pi);
}

double kernel_tail_bound(double s, std::int64_t radius) {
  require_positive_order(s, "kernel_tail_bound");
  if (radius < 1) {
    throw DomainError("kernel_tail_bound: radius must be positive");
  }
  if (is_near_integer_order(s)) {
    const auto m = static_cast<std::int64_t>(std::round(s));
    double tail = 0.0;
    for (std::int64_t k = radius + 1; k <= m; ++k) {
      tail += 2.0 * std::abs(kernel_limit_at_integer(m, k));
    }
    return tail;
  }
  const auto floor_s = static_cast<std::int64_t>(std::floor(s));
  // Terms with radius < k <= floor(s) precede the monotone decay regime.
  const std::int64_t start = std::max(radius, floor_s);
  double explicit_part = 0.0;
  for (std::int64_t k = radius + 1; k <= start; ++k) {
    explicit_part += 2.0 * std::abs(kernel_value(s, k));
  }
  // k -> |K_s(k)| k^{1+2s} decreases towards its limit for k > s, so its value
  // just past the cut dominates the whole tail.
  double c = kernel_asymptotic_constant(s);
  const std::int64_t scan_from = std::max((start + 1) / 2, floor_s + 1);
  for (std::int64_t k = scan_from; k <= start + 1; ++k) {
    c = std::max(c, scaled_magnitude(s, k));
  }
  c *= kTailSafetyFactor;
  const double start_d = static_cast<double>(start);
  return explicit_part + 2.0 * c * std::pow(start_d, -2.0 * s) / (2.0 * s);
}

double KernelTable::at(std::int64_t k) const noexcept {
  k = abs_index(k);
  return k <= radius ? values[static_cast<std::size_t>(k)] : 0.0;
}

std::vector<double> KernelTable::symmetric() const {
  std::vector<double> out(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t k = -radius; k <= radius; ++k) {
    out[static_cast<std::size_t>(k + radius)] = values[static_cast<std::size_t>(abs_index(k))];
  }
  return out;
}

KernelTable build_table(double s, std::int64_t radius) {
  require_positive_order(s, "build_table");
  const auto min_radius = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(s)) + 1);
  if (radius < min_radius) {
    throw DomainError("build_table: radius must be at least max(2, ceil(s) + 1) = " +
                      std::to_string(min_radius));
  }
  KernelTable table;
  table.s = s;
  table.radius = radius;
  table.values.resize(static_cast<std::size_t>(radius + 1));
  for (std::int64_t k = 0; k <= radius; ++k) {
    table.values[static_cast<std::size_t>(k)] = kernel_extended(s, k);
  }
  table.total_sum = kernel_sum(s);
  table.tail_bound = kernel_tail_bound(s, radius);
  return table;
}

double decay_certificate(double s, std::int64_t k_max) {
  require_positive_order(s, "decay_certificate");
  require_non_integer_order(s, "decay_certificate");
  const auto k_min = static_cast<std::int64_t>(std::ceil(s)) + 1;
  if (k_max < k_min) {
    throw DomainError("decay_certificate: k_max must be at least ceil(s) + 1");
  }
  double best = 0.0;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    best = std::max(best, scaled_magnitude(s, k));
  }
  if (k_max >= 1000) {
    const double at_end = scaled_magnitude(s, k_max);
    const double at_half = scaled_magnitude(s, k_max / 2);
    if (std::abs(at_end - at_half) > 1e-3 * at_end) {
      throw NonConvergenceError("decay_certificate: |K_s(k)| k^(1+2s) has not settled by k_max");
    }
  }
  return best;
}

double partial_sum_identity_check(double s, std::int64_t m,
                                  const std::function<double(double)>& gamma_fn) {
  require_positive_order(s, "partial_sum_identity_check");
  require_non_integer_order(s, "partial_sum_identity_check");
  if (m < 1) {
    throw DomainError("partial_sum_identity_check: m must be at least 1");
  }
  const double md = static_cast<double>(m);
  double lhs = gamma_fn(md - s) / (2.0 * s * gamma_fn(md + s));
  for (std::int64_t k = 1; k < m; ++k) {
    const double kd = static_cast<double>(k);
    lhs += gamma_fn(kd - s) / gamma_fn(kd + 1.0 + s);
  }
  const double rhs = -gamma_fn(-s) / (2.0 * gamma_fn(1.0 + s));
  return std::abs(lhs - rhs);
}

double partial_sum_identity_check(double s, std::int64_t m) {
  return partial_sum_identity_check(s, m, [](double z) { return special::gamma(z); });
}

}  // namespace fraclap
