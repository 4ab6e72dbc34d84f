#include "fraclap/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "fraclap/errors.hpp"
#include "fraclap/simd.hpp"

namespace fraclap {

Sequence::Sequence(std::int64_t offset, std::vector<double> values)
    : offset_(offset), values_(std::move(values)) {
  if (values_.empty()) {
    offset_ = 0;
  }
}

double Sequence::operator()(std::int64_t n) const noexcept {
  const std::int64_t i = n - offset_;
  if (i < 0 || i >= static_cast<std::int64_t>(values_.size())) {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(i)];
}

Sequence Sequence::normalized() const {
  auto begin = std::find_if(values_.begin(), values_.end(), [](double x) { return x != 0.0; });
  if (begin == values_.end()) {
    return Sequence();
  }
  auto end = std::find_if(values_.rbegin(), values_.rend(), [](double x) { return x != 0.0; }).base();
  return Sequence(offset_ + (begin - values_.begin()), std::vector<double>(begin, end));
}

Sequence Sequence::padded(std::int64_t lo, std::int64_t hi) const {
  if (!empty()) {
    lo = std::min(lo, first());
    hi = std::max(hi, last());
  }
  if (hi < lo) {
    return *this;
  }
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out[static_cast<std::size_t>(offset_ - lo) + i] = values_[i];
  }
  return Sequence(lo, std::move(out));
}

Sequence Sequence::clipped(std::int64_t lo, std::int64_t hi) const {
  if (empty()) {
    return *this;
  }
  lo = std::max(lo, first());
  hi = std::min(hi, last());
  if (hi < lo) {
    return Sequence();
  }
  auto b = values_.begin() + (lo - offset_);
  return Sequence(lo, std::vector<double>(b, b + (hi - lo + 1)));
}

Sequence Sequence::scaled(double a) const {
  std::vector<double> out(values_);
  for (double& x : out) {
    x *= a;
  }
  return Sequence(offset_, std::move(out));
}

double Sequence::sup_norm() const noexcept {
  double m = 0.0;
  for (double x : values_) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

Sequence delta(std::int64_t n) { return Sequence(n, {1.0}); }

double inner(const Sequence& u, const Sequence& v) {
  if (u.empty() || v.empty()) {
    return 0.0;
  }
  const std::int64_t lo = std::max(u.first(), v.first());
  const std::int64_t hi = std::min(u.last(), v.last());
  if (hi < lo) {
    return 0.0;
  }
  const auto n = static_cast<std::size_t>(hi - lo + 1);
  return simd::pairwise_dot(u.values().subspan(static_cast<std::size_t>(lo - u.first()), n),
                            v.values().subspan(static_cast<std::size_t>(lo - v.first()), n));
}

double norm(const Sequence& u) { return std::sqrt(inner(u, u)); }

double semi_inner_fd(const Sequence& u, const Sequence& v, double eps) {
  if (!(eps > 0.0)) {
    throw DomainError("semi_inner_fd: eps must be positive");
  }
  const double nv = norm(v);
  if (nv == 0.0) {
    throw DegenerateInputError("semi_inner_fd: v has zero norm");
  }
  return (norm(axpy(eps, u, v)) - nv) / eps * nv;
}

Sequence axpy(double a, const Sequence& u, const Sequence& v) {
  if (u.empty()) {
    return v.normalized();
  }
  const std::int64_t lo = v.empty() ? u.first() : std::min(u.first(), v.first());
  const std::int64_t hi = v.empty() ? u.last() : std::max(u.last(), v.last());
  std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
  if (!v.empty()) {
    const auto vs = v.values();
    std::copy(vs.begin(), vs.end(), out.begin() + (v.first() - lo));
  }
  const auto us = u.values();
  simd::active().axpy(a, us.data(), out.data() + (u.first() - lo), us.size());
  return Sequence(lo, std::move(out)).normalized();
}

double sup_distance(const Sequence& u, const Sequence& v) {
  if (u.empty() && v.empty()) {
    return 0.0;
  }
  const std::int64_t lo = u.empty() ? v.first() : v.empty() ? u.first() : std::min(u.first(), v.first());
  const std::int64_t hi = u.empty() ? v.last() : v.empty() ? u.last() : std::max(u.last(), v.last());
  double m = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    m = std::max(m, std::abs(u(n) - v(n)));
  }
  return m;
}

}  // namespace fraclap
