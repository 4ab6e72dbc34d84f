#include <cstdlib>
#include <string_view>

#include "fraclap/simd.hpp"
#include "simd/ops_internal.hpp"

namespace fraclap::simd {

namespace {

constexpr Ops kScalar{Isa::scalar, &detail::dot_scalar, &detail::axpy_scalar};

#if defined(FRACLAP_HAVE_AVX2)
constexpr Ops kAvx2{Isa::avx2, &detail::dot_avx2, &detail::axpy_avx2};
#endif

#if defined(FRACLAP_HAVE_NEON)
constexpr Ops kNeon{Isa::neon, &detail::dot_neon, &detail::axpy_neon};
#endif

const Ops& select() noexcept {
  if (const char* forced = std::getenv("FRACLAP_SIMD")) {
    if (std::string_view(forced) == "scalar") {
      return kScalar;
    }
  }
  if (const Ops* ops = avx2_ops()) {
    return *ops;
  }
  if (const Ops* ops = neon_ops()) {
    return *ops;
  }
  return kScalar;
}

}  // namespace

const Ops& scalar_ops() noexcept { return kScalar; }

const Ops* avx2_ops() noexcept {
#if defined(FRACLAP_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Ops* neon_ops() noexcept {
#if defined(FRACLAP_HAVE_NEON)
  return &kNeon;
#else
  return nullptr;
#endif
}

const Ops& active() noexcept {
  static const Ops& ops = select();
  return ops;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
    case Isa::scalar:
      break;
  }
  return "scalar";
}

double pairwise_dot(const Ops& ops, std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  if (n <= kPairwiseBlock) {
    return ops.dot(a.data(), b.data(), n);
  }
  const std::size_t half = n / 2;
  return pairwise_dot(ops, a.first(half), b.first(half)) +
         pairwise_dot(ops, a.subspan(half, n - half), b.subspan(half, n - half));
}

}  // namespace fraclap::simd
