#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Inner-loop kernels with a scalar reference implementation and vector
// variants chosen once at startup from the host CPU. Set FRACLAP_SIMD=scalar
// to force the reference path.

namespace fraclap::simd {

enum class Isa { scalar, avx2, neon };

struct Ops {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
};

const Ops& scalar_ops() noexcept;

/// Vector variants compiled into this build and supported by the running CPU
/// (nullptr otherwise).
const Ops* avx2_ops() noexcept;
const Ops* neon_ops() noexcept;

/// The variant used by the library.
const Ops& active() noexcept;

std::string_view isa_name(Isa isa) noexcept;

/// Pairwise summation over blocks of at most kPairwiseBlock products; the
/// split points depend only on the length, so results are reproducible.
inline constexpr std::size_t kPairwiseBlock = 1024;

double pairwise_dot(const Ops& ops, std::span<const double> a, std::span<const double> b) noexcept;

inline double pairwise_dot(std::span<const double> a, std::span<const double> b) noexcept {
  return pairwise_dot(active(), a, b);
}

}  // namespace fraclap::simd
