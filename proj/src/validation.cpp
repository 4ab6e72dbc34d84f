#include "fraclap/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/fractional_laplacian.hpp"
#include "fraclap/io.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/reference.hpp"
#include "fraclap/special_functions.hpp"

namespace fraclap {

namespace {

CheckResult make(std::string name, double deviation, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.deviation = deviation;
  r.tolerance = tolerance;
  r.passed = std::isfinite(deviation) && deviation <= tolerance;
  r.detail = std::move(detail);
  return r;
}

// Runs a check body, turning library exceptions into a failed row.
template <class F>
CheckResult guarded(const std::string& name, double tolerance, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    CheckResult r = make(name, INFINITY, tolerance, e.what());
    r.passed = false;
    return r;
  }
}

Sequence random_sequence(std::mt19937_64& rng, int length) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(length));
  for (double& x : v) {
    x = value(rng);
  }
  std::uniform_int_distribution<int> shift(-3, 3);
  return Sequence(shift(rng), std::move(v));
}

CheckResult check_dual_form() {
  return guarded("kernel dual-form agreement", 1e-10, [] {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> order(0.0, 6.0);
    std::uniform_int_distribution<std::int64_t> offset(-64, 64);
    double worst = 0.0;
    for (int i = 0; i < 500;) {
      const double s = order(rng);
      if (s <= 0.0 || std::abs(s - std::round(s)) <= 1e-3) {
        continue;
      }
      const std::int64_t k = offset(rng);
      const double a = kernel_value(s, k);
      const double b = reference::kernel_definition_form(s, k);
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) {
        worst = std::max(worst, std::abs(a - b) / scale);
      }
      ++i;
    }
    return make("kernel dual-form agreement", worst, 1e-10, "500 samples, relative");
  });
}

CheckResult check_sum_identity() {
  return guarded("kernel sum identity", 1.0, [] {
    // Deviation is reported relative to the certified tail, so <= 1 passes.
    double worst_ratio = 0.0;
    for (double s : {0.25, 0.5, 0.9, 1.5, 2.5, 3.7}) {
      double partial = 0.0;
      double magnitude = 0.0;
      for (std::int64_t k = 1024; k >= 1; --k) {
        const double kv = kernel_value(s, k);
        partial += kv;
        magnitude += std::abs(kv);
      }
      const double a = kernel_sum(s);
      const double deviation = std::abs(2.0 * partial - a);
      // Floor for rounding in the sum once the tail drops below double resolution.
      const double rounding = 32.0 * std::numeric_limits<double>::epsilon() * (a + 2.0 * magnitude);
      const double allowed = kernel_tail_bound(s, 1024) + rounding;
      worst_ratio = std::max(worst_ratio, deviation / allowed);
    }
    return make("kernel sum identity", worst_ratio, 1.0, "|sum - A_s| / (tail_bound(1024) + rounding)");
  });
}

CheckResult check_partial_sum(const std::function<double(double)>& gamma_fn) {
  return guarded("partial-sum identity", 1e-10, [&] {
    double worst = 0.0;
    for (double s : {0.5, 1.5, 2.5, 0.25}) {
      for (std::int64_t m = 1; m <= 10; ++m) {
        worst = std::max(worst, gamma_fn ? partial_sum_identity_check(s, m, gamma_fn)
                                         : partial_sum_identity_check(s, m));
      }
    }
    return make("partial-sum identity", worst, 1e-10);
  });
}

CheckResult check_integer_limit() {
  return guarded("integer-order limit", 1e-4, [] {
    double worst = 0.0;
    bool monotone = true;
    for (std::int64_t m = 1; m <= 3; ++m) {
      const Sequence exact = apply_integer_power(delta(0), m);
      for (double sign : {-1.0, 1.0}) {
        double previous = INFINITY;
        for (double h : {1e-2, 1e-4, 1e-6}) {
          OperatorSpec spec;
          spec.s = static_cast<double>(m) + sign * h;
          spec.radius = 64;
          const double d = sup_distance(apply_fractional(delta(0), spec).result, exact);
          monotone = monotone && d < previous;
          previous = d;
        }
        worst = std::max(worst, previous);
      }
    }
    CheckResult r = make("integer-order limit", worst, 1e-4, monotone ? "monotone" : "not monotone");
    r.passed = r.passed && monotone;
    return r;
  });
}

CheckResult check_oracle(ValidationLevel level) {
  return guarded("series vs semigroup quadrature", 1e-6, [&] {
    std::vector<double> orders = {0.5, 1.5};
    int random_inputs = 0;
    if (level == ValidationLevel::full) {
      orders = {0.3, 0.5, 0.8, 1.2, 1.5, 2.7};
      random_inputs = 5;
    }
    std::mt19937_64 rng(7);
    std::vector<Sequence> inputs{delta(0)};
    for (int i = 0; i < random_inputs; ++i) {
      inputs.push_back(random_sequence(rng, 8));
    }
    double worst = 0.0;
    for (double s : orders) {
      OperatorSpec spec;
      spec.s = s;
      spec.radius = 16;
      for (const auto& u : inputs) {
        const auto series = apply_fractional(u, spec);
        const auto oracle = apply_quadrature_oracle(u, s, QuadratureScheme{}, spec.radius);
        worst = std::max(worst, sup_distance(series.result, oracle.result));
      }
    }
    return make("series vs semigroup quadrature", worst, 1e-6,
                std::to_string(orders.size()) + " orders, " + std::to_string(inputs.size()) +
                    " inputs");
  });
}

CheckResult check_semigroup() {
  return guarded("heat semigroup law", 1e-10, [] {
    const Sequence d = delta(0);
    double worst = 0.0;
    if (!(heat_semigroup(d, 0.0, 40) == d)) {
      worst = INFINITY;
    }
    const Sequence ab = heat_semigroup(heat_semigroup(d, 0.7, 40), 1.3, 40);
    const Sequence direct = heat_semigroup(d, 2.0, 80);
    worst = std::max(worst, sup_distance(ab, direct));
    double mass = 0.0;
    for (double x : heat_semigroup(d, 5.0, 80).values()) {
      mass += x;
    }
    worst = std::max(worst, std::abs(mass - 1.0));
    return make("heat semigroup law", worst, 1e-10, "S_0 = I, S_a S_b = S_{a+b}, mass");
  });
}

CheckResult check_decay_constant() {
  return guarded("decay constant at k = 1e4", 1e-3, [] {
    double worst = 0.0;
    for (double s : {0.5, 1.5}) {
      const double limit = kernel_asymptotic_constant(s);
      decay_certificate(s, 10000);
      const double at_end = std::abs(kernel_value(s, 10000)) * std::pow(1e4, 1.0 + 2.0 * s);
      worst = std::max(worst, std::abs(at_end - limit) / limit);
    }
    return make("decay constant at k = 1e4", worst, 1e-3, "relative");
  });
}

CheckResult check_log_norm() {
  return guarded("log-norm estimate", 1e-8, [] {
    double worst = 0.0;
    for (std::int64_t n : {8, 32}) {
      worst = std::max(worst, std::abs(log_norm_estimate(n) - reference::log_norm_power_iteration(n)));
    }
    return make("log-norm estimate", worst, 1e-8, "vs power iteration");
  });
}

}  // namespace

ValidationLevel parse_validation_level(std::string_view name) {
  if (name == "quick") {
    return ValidationLevel::quick;
  }
  if (name == "full") {
    return ValidationLevel::full;
  }
  throw ParseError("unknown validation level '" + std::string(name) + "'");
}

bool ValidationReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationOptions& options) {
  ValidationReport report;
  report.level = options.level;
  report.checks.push_back(check_dual_form());
  report.checks.push_back(check_sum_identity());
  report.checks.push_back(check_partial_sum(options.gamma_fn));
  report.checks.push_back(check_integer_limit());
  report.checks.push_back(check_semigroup());
  report.checks.push_back(check_oracle(options.level));
  if (options.level == ValidationLevel::full) {
    report.checks.push_back(check_decay_constant());
    report.checks.push_back(check_log_norm());
  }
  return report;
}

void write_validation_report(std::ostream& out, const ValidationReport& report) {
  out << "convention: " << kPowerZeroConvention << '\n';
  out << "level: " << (report.level == ValidationLevel::full ? "full" : "quick") << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-6s %-12s %-12s %s\n", "check", "result", "deviation",
                "tolerance", "detail");
  out << line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-34s %-6s %-12.3e %-12.3e %s\n", c.name.c_str(),
                  c.passed ? "PASS" : "FAIL", c.deviation, c.tolerance, c.detail.c_str());
    out << line;
  }
  out << (report.all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
}

}  // namespace fraclap
