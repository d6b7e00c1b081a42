#pragma once

#include <cstddef>

#include "fkpp/numerics/tridiagonal.hpp"

namespace fkpp::simd::detail {

struct KernelTable {
  void (*logistic_map)(double* u, std::size_t n, double growth);
  void (*stencil3)(double* out, const double* u, const double* lo,
                   const double* mid, const double* hi, std::size_t n);
  void (*combine3)(double* out, const double* prev, const double* cur,
                   const double* next, double lo, double mid, double hi,
                   std::size_t n);
  void (*thomas_batch)(const TridiagonalFactor& f, double* data,
                       std::size_t systems);
};

extern const KernelTable scalar_kernels;
#if defined(FKPP_HAVE_AVX2)
extern const KernelTable avx2_kernels;
#endif

}  // namespace fkpp::simd::detail
