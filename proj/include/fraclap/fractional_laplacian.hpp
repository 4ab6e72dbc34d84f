#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "fraclap/lattice.hpp"

namespace fraclap {

enum class EvaluationPath { series, binomial, quadrature, composed };

std::string_view to_string(EvaluationPath path) noexcept;
/// Throws ParseError on an unknown name.
EvaluationPath parse_evaluation_path(std::string_view name);

/// One application of (-Delta)^s.
struct OperatorSpec {
  double s = 0.5;
  /// Kernel truncation radius R: results are reported on supp(u) dilated by R.
  std::int64_t radius = 64;
  EvaluationPath path = EvaluationPath::series;
  /// Admissible sup-norm truncation error per application.
  double error_budget = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Integration scheme for the semigroup-integral evaluation.
struct QuadratureScheme {
  double split_point = 1.0;  // z0
  int nodes_inner = 96;      // Gauss-Legendre points on (0, z0]
  int nodes_outer = 96;      // Gauss-Legendre points on [z0, z_max] (log scale)
  double z_max = 200.0;      // raised automatically where the tail expansion needs it

  void validate() const;
};

/// Result of an operator application with its certified truncation bound:
/// every value outside the reported window, and the error of every value
/// inside it, is at most `truncation_bound` in absolute value.
struct Application {
  Sequence result;
  double truncation_bound = 0.0;
};

/// Dense evaluation of A u(n) - sum_k c(|n - k|) u(k) with a precomputed
/// symmetric coefficient array. Shared by the series path and the
/// Hamiltonian.
class SeriesStencil {
 public:
  /// Kernel of order s tabulated for offsets |j| <= max_offset.
  SeriesStencil(double s, std::int64_t max_offset);

  double order() const noexcept { return s_; }
  double diagonal() const noexcept { return diagonal_; }
  std::int64_t max_offset() const noexcept { return max_offset_; }
  double coefficient(std::int64_t j) const noexcept;

  /// Values on [lo, hi]; requires every |n - k| <= max_offset.
  std::vector<double> evaluate(const Sequence& u, std::int64_t lo, std::int64_t hi) const;

 private:
  double s_;
  double diagonal_;
  std::int64_t max_offset_;
  std::vector<double> symmetric_;  // c(j), j = -max_offset..max_offset
};

/// Exact binomial stencil sum_{k=0}^{2m} (-1)^{k-m} C(2m,k) u(n-m+k); m = 0 is
/// the identity.
Sequence apply_integer_power(const Sequence& u, std::int64_t m);

/// Series path: A_s u(n) - sum_k K_s(n-k) u(k) on supp(u) dilated by
/// spec.radius. Throws BudgetExceededError when tail_bound(R) sup|u| exceeds
/// spec.error_budget.
Application apply_fractional(const Sequence& u, const OperatorSpec& spec);

/// (-Delta)^{s - floor(s)} applied after the integer power floor(s).
Application apply_composed(const Sequence& u, double s, std::int64_t radius,
                           double error_budget = std::numeric_limits<double>::infinity());

/// Heat semigroup (S_z u)(n) = sum_k e^{-2z} I_{n-k}(2z) u(k) on supp(u)
/// dilated by radius; z = 0 returns u unchanged.
Sequence heat_semigroup(const Sequence& u, double z, std::int64_t radius);

/// Semigroup-integral evaluation
///   1/Gamma(-sigma) int_0^inf z^{-sigma-1} (S_z - I)(-Delta)^{floor s} u dz,
/// sigma = s - floor(s), on supp(u) dilated by radius. Slow; meant as an
/// independent check on the series path. Throws NonConvergenceError if
/// doubling both node counts moves the result by more than 1e-6.
Application apply_quadrature_oracle(const Sequence& u, double s, const QuadratureScheme& scheme,
                                    std::int64_t radius);

/// Dispatch on spec.path.
Application apply(const Sequence& u, const OperatorSpec& spec,
                  const QuadratureScheme& scheme = QuadratureScheme{});

/// Largest Rayleigh quotient of Delta over sequences supported on a width-N
/// window: -4 sin^2(pi / (2 (N + 1))).
double log_norm_estimate(std::int64_t window);

}  // namespace fraclap
