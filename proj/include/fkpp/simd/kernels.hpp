#pragma once

// Data-parallel inner loops of the solver. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the variant is
// chosen once at startup from the CPU feature set. All variants perform the
// same IEEE operations in the same order, so their results are
// bit-identical (the build disables FMA contraction).
//
// The environment variable FKPP_SIMD=scalar|avx2 overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>

#include "fkpp/numerics/tridiagonal.hpp"

namespace fkpp::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);
bool available(Backend b);
Backend active();
// Throws ConfigurationError if the backend is not available on this CPU.
void set_backend(Backend b);

// u <- u g / (1 + u (g - 1)), the exact logistic flow with growth g = e^s.
void logistic_map(std::span<double> u, double growth);

// out[i] = u[i] + (lo[i] u[i-1] + mid[i] u[i] + hi[i] u[i+1]).
// Boundary rows read only in-range neighbours: lo[0] and hi[n-1] are
// ignored, which encodes a Neumann reflection when the caller folds the
// ghost coefficient into the interior neighbour.
void stencil3(std::span<double> out, std::span<const double> u,
              std::span<const double> lo, std::span<const double> mid,
              std::span<const double> hi);

// out[k] = cur[k] + (lo prev[k] + mid cur[k] + hi next[k]) over whole rows.
void combine3(std::span<double> out, std::span<const double> prev,
              std::span<const double> cur, std::span<const double> next,
              double lo, double mid, double hi);

// Solves `systems` independent tridiagonal systems sharing one factored
// matrix. Storage is interleaved: element k of system s lives at
// data[k * systems + s]. Solved in place.
void thomas_batch(const TridiagonalFactor& factor, std::span<double> data,
                  std::size_t systems);

}  // namespace fkpp::simd
