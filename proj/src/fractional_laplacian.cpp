#include "fraclap/fractional_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/simd.hpp"
#include "fraclap/special_functions.hpp"

namespace fraclap {

namespace {

constexpr double kQuadratureConvergenceTol = 1e-6;
// Inner substitution z = z0 w^{q/(1-sigma)}; q = 3 leaves a w^2 weight that
// Gauss-Legendre integrates to full accuracy.
constexpr double kInnerSmoothing = 3.0;
constexpr int kTailTerms = 8;

std::int64_t floor_order(double s) {
  return is_near_integer_order(s) ? static_cast<std::int64_t>(std::round(s))
                                  : static_cast<std::int64_t>(std::floor(s));
}

// Symmetric convolution out(n) = sum_k table[|n - k|] u(k) on [lo, hi].
std::vector<double> convolve_symmetric(const std::vector<double>& symmetric, std::int64_t half,
                                       const Sequence& u, std::int64_t lo, std::int64_t hi) {
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  if (u.empty()) {
    return out;
  }
  const auto& ops = simd::active();
  const auto values = u.values();
  const std::span<const double> table(symmetric);
  for (std::int64_t n = lo; n <= hi; ++n) {
    const auto start = static_cast<std::size_t>(half + u.first() - n);
    out[static_cast<std::size_t>(n - lo)] =
        simd::pairwise_dot(ops, table.subspan(start, values.size()), values);
  }
  return out;
}

std::vector<double> mirrored(const std::vector<double>& one_sided) {
  const auto half = one_sided.size() - 1;
  std::vector<double> out(2 * half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    out[half + j] = one_sided[j];
    out[half - j] = one_sided[j];
  }
  return out;
}

std::int64_t required_offset(const Sequence& u, std::int64_t lo, std::int64_t hi) {
  return std::max(hi - u.first(), u.last() - lo);
}

}  // namespace

std::string_view to_string(EvaluationPath path) noexcept {
  switch (path) {
    case EvaluationPath::binomial:
      return "binomial";
    case EvaluationPath::quadrature:
      return "quadrature";
    case EvaluationPath::composed:
      return "composed";
    case EvaluationPath::series:
      break;
  }
  return "series";
}

EvaluationPath parse_evaluation_path(std::string_view name) {
  for (auto path : {EvaluationPath::series, EvaluationPath::binomial, EvaluationPath::quadrature,
                    EvaluationPath::composed}) {
    if (to_string(path) == name) {
      return path;
    }
  }
  throw ParseError("unknown evaluation path '" + std::string(name) + "'");
}

void OperatorSpec::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("operator: s must be positive and finite");
  }
  if (radius < 2) {
    throw DomainError("operator: radius must be at least 2");
  }
  if (path == EvaluationPath::series && radius < static_cast<std::int64_t>(std::ceil(s)) + 1) {
    throw DomainError("operator: series path needs radius >= ceil(s) + 1");
  }
  if (!(error_budget >= 0.0)) {
    throw DomainError("operator: error budget must be non-negative");
  }
  if (path == EvaluationPath::binomial && !is_near_integer_order(s)) {
    throw DomainError("operator: binomial path requires an integer order");
  }
  if (path == EvaluationPath::quadrature && is_near_integer_order(s)) {
    throw NearIntegerOrderError("operator: quadrature path requires a non-integer order");
  }
}

void QuadratureScheme::validate() const {
  if (!(split_point > 0.0) || !(z_max > split_point)) {
    throw DomainError("quadrature: need 0 < split_point < z_max");
  }
  if (nodes_inner < 8 || nodes_outer < 8) {
    throw DomainError("quadrature: node counts must be at least 8");
  }
}

SeriesStencil::SeriesStencil(double s, std::int64_t max_offset)
    : s_(s), diagonal_(kernel_sum(s)), max_offset_(max_offset) {
  if (max_offset < 0) {
    throw DomainError("SeriesStencil: negative offset range");
  }
  std::vector<double> one_sided(static_cast<std::size_t>(max_offset + 1));
  for (std::int64_t k = 0; k <= max_offset; ++k) {
    one_sided[static_cast<std::size_t>(k)] = kernel_extended(s, k);
  }
  symmetric_ = mirrored(one_sided);
}

double SeriesStencil::coefficient(std::int64_t j) const noexcept {
  if (j < -max_offset_ || j > max_offset_) {
    return 0.0;
  }
  return symmetric_[static_cast<std::size_t>(j + max_offset_)];
}

std::vector<double> SeriesStencil::evaluate(const Sequence& u, std::int64_t lo,
                                            std::int64_t hi) const {
  if (u.empty()) {
    return std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0);
  }
  if (required_offset(u, lo, hi) > max_offset_) {
    throw DomainError("SeriesStencil: requested window exceeds the tabulated kernel");
  }
  std::vector<double> out = convolve_symmetric(symmetric_, max_offset_, u, lo, hi);
  for (std::int64_t n = lo; n <= hi; ++n) {
    auto& value = out[static_cast<std::size_t>(n - lo)];
    value = diagonal_ * u(n) - value;
  }
  return out;
}

Sequence apply_integer_power(const Sequence& u, std::int64_t m) {
  if (m < 0) {
    throw DomainError("apply_integer_power: power must be non-negative");
  }
  if (m == 0 || u.empty()) {
    return u;
  }
  std::vector<double> stencil(static_cast<std::size_t>(2 * m + 1));
  for (std::int64_t k = 0; k <= 2 * m; ++k) {
    const double c = special::binomial(2 * m, k);
    stencil[static_cast<std::size_t>(k)] = ((k - m) % 2 == 0) ? c : -c;
  }
  const std::int64_t lo = u.first() - m;
  const std::int64_t hi = u.last() + m;
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::int64_t n = lo; n <= hi; ++n) {
    double acc = 0.0;
    for (std::int64_t k = 0; k <= 2 * m; ++k) {
      acc += stencil[static_cast<std::size_t>(k)] * u(n - m + k);
    }
    out[static_cast<std::size_t>(n - lo)] = acc;
  }
  return Sequence(lo, std::move(out));
}

Application apply_fractional(const Sequence& u, const OperatorSpec& spec) {
  spec.validate();
  const double certificate = kernel_tail_bound(spec.s, spec.radius) * u.sup_norm();
  if (certificate > spec.error_budget) {
    throw BudgetExceededError("apply_fractional: certified truncation " +
                              std::to_string(certificate) + " exceeds budget " +
                              std::to_string(spec.error_budget));
  }
  if (u.empty()) {
    return {Sequence(), 0.0};
  }
  const std::int64_t lo = u.first() - spec.radius;
  const std::int64_t hi = u.last() + spec.radius;
  const SeriesStencil stencil(spec.s, required_offset(u, lo, hi));
  return {Sequence(lo, stencil.evaluate(u, lo, hi)), certificate};
}

Application apply_composed(const Sequence& u, double s, std::int64_t radius, double error_budget) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("apply_composed: s must be positive and finite");
  }
  const std::int64_t m = floor_order(s);
  const Sequence v = apply_integer_power(u, m);
  if (is_near_integer_order(s)) {
    return {v, 0.0};
  }
  OperatorSpec spec;
  spec.s = s - static_cast<double>(m);
  spec.radius = radius;
  spec.error_budget = error_budget;
  return apply_fractional(v, spec);
}

Sequence heat_semigroup(const Sequence& u, double z, std::int64_t radius) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError("heat_semigroup: z must be non-negative and finite");
  }
  if (radius < 0) {
    throw DomainError("heat_semigroup: radius must be non-negative");
  }
  if (z == 0.0 || u.empty()) {
    return u;
  }
  const std::int64_t lo = u.first() - radius;
  const std::int64_t hi = u.last() + radius;
  const std::int64_t reach = required_offset(u, lo, hi);
  const auto row = special::bessel_i_scaled_row(2.0 * z, static_cast<std::size_t>(reach));
  return Sequence(lo, convolve_symmetric(mirrored(row), reach, u, lo, hi));
}

namespace {

struct IntegralEstimate {
  std::vector<double> values;  // int_0^inf z^{-sigma-1} ((S_z - I) v)(n) dz on the window
  double tail_remainder = 0.0;
};

// Taylor coefficients Delta^j v / j!, j = 1..J, of (S_z - I) v = sum_j z^j Delta^j v / j!.
std::vector<Sequence> semigroup_taylor(const Sequence& v, double z0) {
  std::vector<Sequence> coefficients;
  const double scale = std::max(v.sup_norm(), 1e-300);
  Sequence term = v;
  double zj = 1.0;
  for (int j = 1; j <= 400; ++j) {
    term = apply_integer_power(term, 1).scaled(-1.0 / j);
    zj *= z0;
    coefficients.push_back(term);
    if (j > 4.0 * z0 + 4.0 && zj * term.sup_norm() <= 1e-20 * scale) {
      break;
    }
  }
  return coefficients;
}

// a_j(nu) of e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_j (-1)^j a_j(nu) x^{-j}.
double hankel_coefficient(std::int64_t nu, int j) {
  const double mu = 4.0 * static_cast<double>(nu) * static_cast<double>(nu);
  double a = 1.0;
  for (int i = 1; i <= j; ++i) {
    const double odd = 2.0 * i - 1.0;
    a *= (mu - odd * odd) / (8.0 * i);
  }
  return a;
}

IntegralEstimate semigroup_integral(const Sequence& v, double sigma, std::int64_t lo,
                                    std::int64_t hi, const QuadratureScheme& scheme) {
  const auto width = static_cast<std::size_t>(hi - lo + 1);
  IntegralEstimate est;
  est.values.assign(width, 0.0);
  const double z0 = scheme.split_point;
  const std::int64_t reach = required_offset(v, lo, hi);
  const double reach_d = static_cast<double>(reach);
  // Beyond z_max the large-argument expansion of I_nu(2z) is used term by
  // term; it needs 2 z_max well above nu^2.
  const double z_max = std::max({scheme.z_max, 16.0 * reach_d * reach_d, 4.0 * z0});

  // (0, z0]: with z = z0 w^p, p = q / (1 - sigma), the integrand becomes
  // z0^{1-sigma} p w^{q-1} G(z), G(z) = ((S_z - I) v)(n) / z.
  {
    const auto taylor = semigroup_taylor(v, z0);
    const double p = kInnerSmoothing / (1.0 - sigma);
    const double prefactor = std::pow(z0, 1.0 - sigma) * p;
    const auto& rule = quadrature::gauss_legendre(scheme.nodes_inner);
    std::vector<double> g(width);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = 0.5 * (rule.nodes[i] + 1.0);
      const double weight = 0.5 * rule.weights[i];
      const double z = z0 * std::pow(w, p);
      const double factor = weight * prefactor * std::pow(w, kInnerSmoothing - 1.0);
      for (std::int64_t n = lo; n <= hi; ++n) {
        double acc = 0.0;
        for (auto it = taylor.rbegin(); it != taylor.rend(); ++it) {
          acc = acc * z + (*it)(n);
        }
        est.values[static_cast<std::size_t>(n - lo)] += factor * acc;
      }
    }
  }

  // [z0, z_max] in y = ln z: integrand z^{-sigma} ((S_z - I) v)(n).
  {
    const auto& rule = quadrature::gauss_legendre(scheme.nodes_outer);
    const double ya = std::log(z0);
    const double yb = std::log(z_max);
    const double half_len = 0.5 * (yb - ya);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = ya + half_len * (rule.nodes[i] + 1.0);
      const double z = std::exp(y);
      const double factor = half_len * rule.weights[i] * std::pow(z, -sigma);
      const auto row = special::bessel_i_scaled_row(2.0 * z, static_cast<std::size_t>(reach));
      const auto heat = convolve_symmetric(mirrored(row), reach, v, lo, hi);
      for (std::int64_t n = lo; n <= hi; ++n) {
        const auto idx = static_cast<std::size_t>(n - lo);
        est.values[idx] += factor * (heat[idx] - v(n));
      }
    }
  }

  // [z_max, inf): -v(n) z_max^{-sigma}/sigma plus the expansion
  // e^{-2z} I_nu(2z) ~ (4 pi z)^{-1/2} sum_j (-1)^j a_j(nu) (2z)^{-j},
  // integrated exactly against z^{-sigma-1}.
  {
    std::vector<double> tail_kernel(static_cast<std::size_t>(reach + 1));
    double worst_last_term = 0.0;
    const double lead = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (std::int64_t nu = 0; nu <= reach; ++nu) {
      double sum = 0.0;
      double last = 0.0;
      for (int j = 0; j <= kTailTerms; ++j) {
        const double e = sigma + 0.5 + j;
        const double term = ((j % 2 == 0) ? 1.0 : -1.0) * hankel_coefficient(nu, j) *
                            std::pow(2.0, -j) * std::pow(z_max, -e) / e;
        sum += term;
        last = term;
      }
      tail_kernel[static_cast<std::size_t>(nu)] = lead * sum;
      worst_last_term = std::max(worst_last_term, lead * std::abs(last));
    }
    const auto conv = convolve_symmetric(mirrored(tail_kernel), reach, v, lo, hi);
    const double constant = std::pow(z_max, -sigma) / sigma;
    double l1 = 0.0;
    for (double x : v.values()) {
      l1 += std::abs(x);
    }
    for (std::int64_t n = lo; n <= hi; ++n) {
      const auto idx = static_cast<std::size_t>(n - lo);
      est.values[idx] += conv[idx] - constant * v(n);
    }
    est.tail_remainder = worst_last_term * l1;
  }
  return est;
}

}  // namespace

Application apply_quadrature_oracle(const Sequence& u, double s, const QuadratureScheme& scheme,
                                    std::int64_t radius) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("apply_quadrature_oracle: s must be positive and finite");
  }
  if (is_near_integer_order(s)) {
    throw NearIntegerOrderError("apply_quadrature_oracle: s must not be an integer");
  }
  scheme.validate();
  if (radius < 0) {
    throw DomainError("apply_quadrature_oracle: radius must be non-negative");
  }
  if (u.empty()) {
    return {Sequence(), 0.0};
  }
  const auto m = static_cast<std::int64_t>(std::floor(s));
  const double sigma = s - static_cast<double>(m);
  const Sequence v = apply_integer_power(u, m);
  const std::int64_t lo = u.first() - radius;
  const std::int64_t hi = u.last() + radius;
  const double prefactor = special::reciprocal_gamma(-sigma);

  QuadratureScheme doubled = scheme;
  doubled.nodes_inner *= 2;
  doubled.nodes_outer *= 2;
  const auto coarse = semigroup_integral(v, sigma, lo, hi, scheme);
  const auto fine = semigroup_integral(v, sigma, lo, hi, doubled);

  double change = 0.0;
  std::vector<double> out(fine.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = prefactor * fine.values[i];
    change = std::max(change, std::abs(prefactor * (fine.values[i] - coarse.values[i])));
  }
  if (change > kQuadratureConvergenceTol) {
    throw NonConvergenceError("apply_quadrature_oracle: node doubling changed the result by " +
                              std::to_string(change));
  }
  return {Sequence(lo, std::move(out)), change + std::abs(prefactor) * fine.tail_remainder};
}

Application apply(const Sequence& u, const OperatorSpec& spec, const QuadratureScheme& scheme) {
  spec.validate();
  switch (spec.path) {
    case EvaluationPath::binomial:
      return {apply_integer_power(u, static_cast<std::int64_t>(std::round(spec.s))), 0.0};
    case EvaluationPath::quadrature:
      return apply_quadrature_oracle(u, spec.s, scheme, spec.radius);
    case EvaluationPath::composed:
      return apply_composed(u, spec.s, spec.radius, spec.error_budget);
    case EvaluationPath::series:
      break;
  }
  return apply_fractional(u, spec);
}

double log_norm_estimate(std::int64_t window) {
  if (window < 2) {
    throw DomainError("log_norm_estimate: window must be at least 2");
  }
  const double sine = std::sin(std::numbers::pi / (2.0 * static_cast<double>(window + 1)));
  return -4.0 * sine * sine;
}

}  // namespace fraclap
