#include "fkpp/numerics/tridiagonal.hpp"

#include <cmath>
#include <sstream>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

void check_shape(std::span<const double> lower, std::span<const double> diag,
                 std::span<const double> upper, std::size_t rhs_size) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs_size != n) {
    throw DomainError("tridiagonal: array lengths must agree and be nonzero");
  }
}

}  // namespace

TridiagonalFactor factor_tridiagonal(std::span<const double> lower,
                                     std::span<const double> diag,
                                     std::span<const double> upper) {
  check_shape(lower, diag, upper, diag.size());
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(lower[i]) : 0.0) +
                       (i + 1 < n ? std::abs(upper[i]) : 0.0);
    if (!(std::abs(diag[i]) > off)) {
      std::ostringstream os;
      os << "tridiagonal: row " << i << " is not strictly diagonally dominant";
      throw NumericalError(os.str());
    }
  }
  TridiagonalFactor f;
  f.lower.assign(lower.begin(), lower.end());
  f.lower[0] = 0.0;
  f.forward.assign(n, 0.0);
  f.inv_pivot.assign(n, 0.0);
  f.inv_pivot[0] = 1.0 / diag[0];
  f.forward[0] = n > 1 ? upper[0] * f.inv_pivot[0] : 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double pivot = diag[i] - lower[i] * f.forward[i - 1];
    f.inv_pivot[i] = 1.0 / pivot;
    f.forward[i] = i + 1 < n ? upper[i] * f.inv_pivot[i] : 0.0;
  }
  return f;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  check_shape(lower, diag, upper, rhs.size());
  const TridiagonalFactor f = factor_tridiagonal(lower, diag, upper);
  const std::size_t n = f.size();
  std::vector<double> y(rhs.begin(), rhs.end());
  y[0] = y[0] * f.inv_pivot[0];
  for (std::size_t k = 1; k < n; ++k) y[k] = (y[k] - f.lower[k] * y[k - 1]) * f.inv_pivot[k];
  for (std::size_t k = n - 1; k-- > 0;) y[k] = y[k] - f.forward[k] * y[k + 1];
  return y;
}

std::vector<double> apply_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> x) {
  check_shape(lower, diag, upper, x.size());
  const std::size_t n = x.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += lower[i] * x[i - 1];
    if (i + 1 < n) s += upper[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

}  // namespace fkpp
