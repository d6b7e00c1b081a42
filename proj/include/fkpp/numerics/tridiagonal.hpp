#pragma once

#include <span>
#include <vector>

namespace fkpp {

// Solves T y = rhs for the tridiagonal T with sub-diagonal `lower`
// (lower[0] unused), diagonal `diag` and super-diagonal `upper`
// (upper[n-1] unused). Requires strict diagonal dominance; throws
// NumericalError otherwise.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

// y = T x for the same storage convention.
std::vector<double> apply_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> x);

// Thomas factorization of a fixed matrix, reused across many right-hand
// sides. forward[i] is the modified super-diagonal, inv_pivot[i] the
// reciprocal pivot; lower is kept for the forward sweep.
struct TridiagonalFactor {
  std::vector<double> lower;
  std::vector<double> forward;
  std::vector<double> inv_pivot;

  std::size_t size() const { return inv_pivot.size(); }
};

TridiagonalFactor factor_tridiagonal(std::span<const double> lower,
                                     std::span<const double> diag,
                                     std::span<const double> upper);

}  // namespace fkpp
