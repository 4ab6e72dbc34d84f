#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fraclap {

/// Finitely supported real sequence on Z: a dense window of values starting at
/// `offset`; every index outside the window is zero. Immutable once built.
class Sequence {
 public:
  Sequence() = default;
  Sequence(std::int64_t offset, std::vector<double> values);

  static Sequence zero() { return Sequence(); }

  std::int64_t offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  /// First and last stored index (meaningless for the empty sequence).
  std::int64_t first() const noexcept { return offset_; }
  std::int64_t last() const noexcept {
    return offset_ + static_cast<std::int64_t>(values_.size()) - 1;
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Value at index n (zero outside the window).
  double operator()(std::int64_t n) const noexcept;

  /// Same sequence with leading and trailing exact zeros trimmed.
  Sequence normalized() const;

  /// Same sequence stored on a window covering at least [lo, hi].
  Sequence padded(std::int64_t lo, std::int64_t hi) const;

  /// Restriction to [lo, hi] (entries outside are dropped).
  Sequence clipped(std::int64_t lo, std::int64_t hi) const;

  Sequence scaled(double a) const;

  double sup_norm() const noexcept;

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::int64_t offset_ = 0;
  std::vector<double> values_;
};

/// Kronecker delta at n.
Sequence delta(std::int64_t n);

/// Sum over the overlap of the supports (pairwise summation past 1024 terms).
double inner(const Sequence& u, const Sequence& v);

double norm(const Sequence& u);

/// Finite-eps norm-derivative pairing ((|v + eps u| - |v|)/eps) |v|.
/// Throws DegenerateInputError if |v| = 0 and DomainError if eps <= 0.
double semi_inner_fd(const Sequence& u, const Sequence& v, double eps);

/// a u + v on the merged window, normalized.
Sequence axpy(double a, const Sequence& u, const Sequence& v);

/// max_n |u(n) - v(n)|.
double sup_distance(const Sequence& u, const Sequence& v);

}  // namespace fraclap
