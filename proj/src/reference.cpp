#include "fraclap/reference.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/special_functions.hpp"

namespace fraclap::reference {

double kernel_definition_form(double s, std::int64_t k) {
  if (k == 0) {
    return 0.0;
  }
  const double kd = static_cast<double>(k < 0 ? -k : k);
  using special::gamma;
  return -std::pow(4.0, s) * gamma(0.5 + s) * gamma(kd - s) /
         (std::sqrt(std::numbers::pi) * gamma(-s) * gamma(kd + 1.0 + s));
}

double log_norm_power_iteration(std::int64_t n, int max_iterations, double tol) {
  if (n < 2) {
    throw DomainError("log_norm_power_iteration: n must be at least 2");
  }
  const auto size = static_cast<std::size_t>(n);
  // Delta + 4 I is positive definite with spectrum in (0, 4); its top
  // eigenvalue minus 4 is the top eigenvalue of Delta.
  std::vector<double> v(size), w(size);
  for (std::size_t i = 0; i < size; ++i) {
    v[i] = 1.0 + 0.5 * std::cos(static_cast<double>(i));
  }
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    double nv = 0.0;
    for (double x : v) {
      nv += x * x;
    }
    nv = std::sqrt(nv);
    for (double& x : v) {
      x /= nv;
    }
    for (std::size_t i = 0; i < size; ++i) {
      const double left = i > 0 ? v[i - 1] : 0.0;
      const double right = i + 1 < size ? v[i + 1] : 0.0;
      w[i] = left + 2.0 * v[i] + right;
    }
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      rayleigh += v[i] * w[i];
    }
    const bool done = it > 0 && std::abs(rayleigh - lambda) <= tol * std::abs(rayleigh);
    lambda = rayleigh;
    v.swap(w);
    if (done) {
      break;
    }
  }
  return lambda - 4.0;
}

}  // namespace fraclap::reference
