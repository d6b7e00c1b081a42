#include "kernels_impl.hpp"

namespace fkpp::simd::detail {
namespace {

void logistic_map(double* u, std::size_t n, double growth) {
  const double gm1 = growth - 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (u[i] * growth) / (1.0 + u[i] * gm1);
  }
}

void stencil3(double* out, const double* u, const double* lo, const double* mid,
              const double* hi, std::size_t n) {
  if (n == 1) {
    out[0] = u[0] + mid[0] * u[0];
    return;
  }
  out[0] = u[0] + (mid[0] * u[0] + hi[0] * u[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = u[i] + ((lo[i] * u[i - 1] + mid[i] * u[i]) + hi[i] * u[i + 1]);
  }
  out[n - 1] = u[n - 1] + (lo[n - 1] * u[n - 2] + mid[n - 1] * u[n - 1]);
}

void combine3(double* out, const double* prev, const double* cur,
              const double* next, double lo, double mid, double hi,
              std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = cur[k] + ((lo * prev[k] + mid * cur[k]) + hi * next[k]);
  }
}

void thomas_batch(const TridiagonalFactor& f, double* data, std::size_t m) {
  const std::size_t n = f.size();
  for (std::size_t s = 0; s < m; ++s) data[s] = data[s] * f.inv_pivot[0];
  for (std::size_t k = 1; k < n; ++k) {
    double* row = data + k * m;
    const double* prev = row - m;
    const double l = f.lower[k];
    const double ip = f.inv_pivot[k];
    for (std::size_t s = 0; s < m; ++s) row[s] = (row[s] - l * prev[s]) * ip;
  }
  for (std::size_t k = n - 1; k-- > 0;) {
    double* row = data + k * m;
    const double* next = row + m;
    const double c = f.forward[k];
    for (std::size_t s = 0; s < m; ++s) row[s] = row[s] - c * next[s];
  }
}

}  // namespace

const KernelTable scalar_kernels{&logistic_map, &stencil3, &combine3,
                                 &thomas_batch};

}  // namespace fkpp::simd::detail
