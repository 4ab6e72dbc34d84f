#pragma once

#include <cstddef>

namespace fraclap::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept;
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept;

#if defined(FRACLAP_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) noexcept;
#endif

#if defined(FRACLAP_HAVE_NEON)
double dot_neon(const double* a, const double* b, std::size_t n) noexcept;
void axpy_neon(double alpha, const double* x, double* y, std::size_t n) noexcept;
#endif

}  // namespace fraclap::simd::detail
