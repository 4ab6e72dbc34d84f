#include "fraclap/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap::special {

namespace {

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 14> kLanczosCoefficients = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr double kSqrtTwoPi = 2.5066282746310005024;

// Stirling remainder lnGamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2], x >= 16.
double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = -3617.0 / 122400.0;
  series = series * inv2 + 1.0 / 156.0;
  series = series * inv2 - 691.0 / 360360.0;
  series = series * inv2 + 1.0 / 1188.0;
  series = series * inv2 - 1.0 / 1680.0;
  series = series * inv2 + 1.0 / 1260.0;
  series = series * inv2 - 1.0 / 360.0;
  series = series * inv2 + 1.0 / 12.0;
  return series * inv;
}

constexpr double kStirlingThreshold = 16.0;

std::string describe(double z) {
  return std::to_string(z);
}

}  // namespace

bool near_nonpositive_integer(double z, double tol) {
  if (z > tol) {
    return false;
  }
  return std::abs(z - std::round(z)) <= tol;
}

namespace {

double lanczos_log_gamma(double x, double c0) {
  double y = x;
  double tmp = x + kLanczosG + 0.5;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = c0;
  for (double c : kLanczosCoefficients) {
    y += 1.0;
    ser += c / y;
  }
  return tmp + std::log(kSqrtTwoPi * ser / x);
}

double gamma_impl(double z, double c0) {
  if (near_nonpositive_integer(z)) {
    throw PoleError("gamma: pole at " + describe(z));
  }
  if (z > 0.0) {
    if (z > kGammaMaxArgument) {
      throw OverflowError("gamma: overflow at " + describe(z) + "; use log_gamma_ratio");
    }
    return std::exp(lanczos_log_gamma(z, c0));
  }
  // Gamma(z) = Gamma(z + n) / ((z + n - 1)(z + n - 2) ... z), n = |floor(z)|.
  const double n = -std::floor(z);
  double denominator = 1.0;
  for (double i = 0.0; i < n; i += 1.0) {
    denominator *= z + i;
  }
  const double result = std::exp(lanczos_log_gamma(z + n, c0)) / denominator;
  if (!std::isfinite(result)) {
    throw OverflowError("gamma: overflow at " + describe(z));
  }
  return result;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " + describe(x));
  }
  return lanczos_log_gamma(x, kLanczosC0);
}

double gamma(double z) {
  return gamma_impl(z, kLanczosC0);
}

double gamma_perturbed(double z, double c0_offset) {
  return gamma_impl(z, kLanczosC0 + c0_offset);
}

double reciprocal_gamma(double z) {
  if (near_nonpositive_integer(z)) {
    return 0.0;
  }
  if (z > 0.0) {
    return std::exp(-log_gamma(z));
  }
  const double n = -std::floor(z);
  double product = 1.0;
  for (double i = 0.0; i < n; i += 1.0) {
    product *= z + i;
  }
  return product * std::exp(-log_gamma(z + n));
}

double log_gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("log_gamma_ratio: arguments must be positive");
  }
  if (a == b) {
    return 0.0;
  }
  // Gamma(a)/Gamma(b) = Gamma(a+1)/Gamma(b+1) * (b/a); shift into the
  // Stirling regime.
  double shift_log = 0.0;
  while (std::min(a, b) < kStirlingThreshold) {
    const double q = b / a;
    shift_log += (std::isfinite(q) && q > 0.0) ? std::log(q) : std::log(b) - std::log(a);
    a += 1.0;
    b += 1.0;
  }
  const double d = a - b;
  double lead;
  if (std::abs(d) <= 0.5 * b) {
    lead = (a - 0.5) * std::log1p(d / b);
  } else {
    lead = (a - 0.5) * (std::log(a) - std::log(b));
  }
  return shift_log + lead + d * std::log(b) - d +
         (stirling_correction(a) - stirling_correction(b));
}

double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(std::numbers::pi * r);
}

std::vector<double> bessel_i_scaled_row(double x, std::size_t kmax) {
  if (!(x >= 0.0)) {
    throw DomainError("bessel_i_scaled: x must be non-negative");
  }
  std::vector<double> row(kmax + 1, 0.0);
  if (x == 0.0) {
    row[0] = 1.0;
    return row;
  }
  if (x <= 30.0) {
    const double half = 0.5 * x;
    const double quarter_sq = half * half;
    double lead = std::exp(-x);  // e^{-x} (x/2)^k / k!
    for (std::size_t k = 0; k <= kmax; ++k) {
      if (k > 0) {
        lead *= half / static_cast<double>(k);
      }
      if (lead == 0.0) {
        break;
      }
      double term = lead;
      double sum = term;
      for (double j = 0.0;; j += 1.0) {
        term *= quarter_sq / ((j + 1.0) * (j + static_cast<double>(k) + 1.0));
        sum += term;
        if (term <= 1e-17 * sum) {
          break;
        }
      }
      row[k] = sum;
    }
    return row;
  }

  // Miller: I_{k-1} = I_{k+1} + (2k/x) I_k from a start index far enough past
  // kmax that the dominant (K-type) solution has died out.
  const double kd = static_cast<double>(kmax);
  const auto start = static_cast<std::size_t>(std::ceil(std::sqrt(kd * kd + 100.0 * x))) + 30;
  constexpr double kRescaleAbove = 1e250;
  constexpr double kRescaleBy = 1e-250;
  double next = 0.0;  // f_{k+1}
  double cur = 1e-30;  // f_k
  double norm = 0.0;
  for (std::size_t k = start; k >= 1; --k) {
    if (k <= kmax) {
      row[k] = cur;
    }
    norm += 2.0 * cur;
    const double prev = next + (2.0 * static_cast<double>(k) / x) * cur;
    next = cur;
    cur = prev;
    if (cur > kRescaleAbove) {
      cur *= kRescaleBy;
      next *= kRescaleBy;
      norm *= kRescaleBy;
      for (std::size_t j = k; j <= kmax; ++j) {
        row[j] *= kRescaleBy;
      }
    }
  }
  row[0] = cur;
  norm += cur;
  for (double& v : row) {
    v /= norm;
  }
  return row;
}

double bessel_i_scaled(std::int64_t k, double x) {
  const auto order = static_cast<std::size_t>(k < 0 ? -k : k);
  return bessel_i_scaled_row(x, order)[order];
}

double binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("binomial: requires 0 <= k <= n");
  }
  const std::int64_t kk = std::min(k, n - k);
  if (n <= 60) {
    std::uint64_t r = 1;  // r * 60 stays below 2^64 for n <= 60
    for (std::int64_t i = 1; i <= kk; ++i) {
      r = r * static_cast<std::uint64_t>(n - kk + i) / static_cast<std::uint64_t>(i);
    }
    return static_cast<double>(r);
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(kk);
  const double value =
      std::exp(log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0));
  return value < 0x1p53 ? std::round(value) : value;
}

}  // namespace fraclap::special
