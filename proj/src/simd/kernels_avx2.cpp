// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace fkpp::simd::detail {
namespace {

void logistic_map(double* u, std::size_t n, double growth) {
  const double gm1 = growth - 1.0;
  const __m256d g = _mm256_set1_pd(growth);
  const __m256d gm = _mm256_set1_pd(gm1);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(u + i);
    const __m256d num = _mm256_mul_pd(x, g);
    const __m256d den = _mm256_add_pd(one, _mm256_mul_pd(x, gm));
    _mm256_storeu_pd(u + i, _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) u[i] = (u[i] * growth) / (1.0 + u[i] * gm1);
}

void stencil3(double* out, const double* u, const double* lo, const double* mid,
              const double* hi, std::size_t n) {
  if (n < 3) {
    scalar_kernels.stencil3(out, u, lo, mid, hi, n);
    return;
  }
  out[0] = u[0] + (mid[0] * u[0] + hi[0] * u[1]);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d um = _mm256_loadu_pd(u + i - 1);
    const __m256d uc = _mm256_loadu_pd(u + i);
    const __m256d up = _mm256_loadu_pd(u + i + 1);
    __m256d acc = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(lo + i), um),
                                _mm256_mul_pd(_mm256_loadu_pd(mid + i), uc));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(hi + i), up));
    _mm256_storeu_pd(out + i, _mm256_add_pd(uc, acc));
  }
  for (; i + 1 < n; ++i) {
    out[i] = u[i] + ((lo[i] * u[i - 1] + mid[i] * u[i]) + hi[i] * u[i + 1]);
  }
  out[n - 1] = u[n - 1] + (lo[n - 1] * u[n - 2] + mid[n - 1] * u[n - 1]);
}

void combine3(double* out, const double* prev, const double* cur,
              const double* next, double lo, double mid, double hi,
              std::size_t n) {
  const __m256d vl = _mm256_set1_pd(lo);
  const __m256d vm = _mm256_set1_pd(mid);
  const __m256d vh = _mm256_set1_pd(hi);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d c = _mm256_loadu_pd(cur + k);
    __m256d acc = _mm256_add_pd(_mm256_mul_pd(vl, _mm256_loadu_pd(prev + k)),
                                _mm256_mul_pd(vm, c));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vh, _mm256_loadu_pd(next + k)));
    _mm256_storeu_pd(out + k, _mm256_add_pd(c, acc));
  }
  for (; k < n; ++k) {
    out[k] = cur[k] + ((lo * prev[k] + mid * cur[k]) + hi * next[k]);
  }
}

void thomas_batch(const TridiagonalFactor& f, double* data, std::size_t m) {
  const std::size_t n = f.size();
  const std::size_t m4 = m - m % 4;
  {
    const __m256d ip = _mm256_set1_pd(f.inv_pivot[0]);
    std::size_t s = 0;
    for (; s < m4; s += 4) {
      _mm256_storeu_pd(data + s, _mm256_mul_pd(_mm256_loadu_pd(data + s), ip));
    }
    for (; s < m; ++s) data[s] = data[s] * f.inv_pivot[0];
  }
  for (std::size_t k = 1; k < n; ++k) {
    double* row = data + k * m;
    const double* prev = row - m;
    const __m256d l = _mm256_set1_pd(f.lower[k]);
    const __m256d ip = _mm256_set1_pd(f.inv_pivot[k]);
    std::size_t s = 0;
    for (; s < m4; s += 4) {
      const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(row + s),
                                      _mm256_mul_pd(l, _mm256_loadu_pd(prev + s)));
      _mm256_storeu_pd(row + s, _mm256_mul_pd(r, ip));
    }
    for (; s < m; ++s) row[s] = (row[s] - f.lower[k] * prev[s]) * f.inv_pivot[k];
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    double* row = data + k * m;
    const double* next = row + m;
    const __m256d c = _mm256_set1_pd(f.forward[k]);
    std::size_t s = 0;
    for (; s < m4; s += 4) {
      const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(row + s),
                                      _mm256_mul_pd(c, _mm256_loadu_pd(next + s)));
      _mm256_storeu_pd(row + s, r);
    }
    for (; s < m; ++s) row[s] = row[s] - f.forward[k] * next[s];
  }
}

}  // namespace

const KernelTable avx2_kernels{&logistic_map, &stencil3, &combine3,
                               &thomas_batch};

}  // namespace fkpp::simd::detail
