#include <atomic>
#include <cstdlib>
#include <string>

#include "fkpp/error.hpp"
#include "fkpp/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace fkpp::simd {
namespace {

const detail::KernelTable* table_for(Backend b) {
#if defined(FKPP_HAVE_AVX2)
  if (b == Backend::avx2) return &detail::avx2_kernels;
#endif
  (void)b;
  return &detail::scalar_kernels;
}

Backend detect() {
  if (const char* env = std::getenv("FKPP_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2" && available(Backend::avx2)) return Backend::avx2;
  }
  return available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

struct State {
  std::atomic<Backend> backend{detect()};
};

State& state() {
  static State s;
  return s;
}

const detail::KernelTable& kernels() { return *table_for(active()); }

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool available(Backend b) {
  if (b == Backend::scalar) return true;
#if defined(FKPP_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active() { return state().backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!available(b)) {
    throw ConfigurationError("SIMD backend '" + std::string(to_string(b)) +
                             "' is not available on this CPU");
  }
  state().backend.store(b, std::memory_order_relaxed);
}

void logistic_map(std::span<double> u, double growth) {
  kernels().logistic_map(u.data(), u.size(), growth);
}

void stencil3(std::span<double> out, std::span<const double> u,
              std::span<const double> lo, std::span<const double> mid,
              std::span<const double> hi) {
  const std::size_t n = u.size();
  if (out.size() != n || lo.size() != n || mid.size() != n || hi.size() != n) {
    throw DomainError("stencil3: length mismatch");
  }
  if (n == 0) return;
  kernels().stencil3(out.data(), u.data(), lo.data(), mid.data(), hi.data(), n);
}

void combine3(std::span<double> out, std::span<const double> prev,
              std::span<const double> cur, std::span<const double> next,
              double lo, double mid, double hi) {
  const std::size_t n = cur.size();
  if (out.size() != n || prev.size() != n || next.size() != n) {
    throw DomainError("combine3: length mismatch");
  }
  kernels().combine3(out.data(), prev.data(), cur.data(), next.data(), lo, mid,
                     hi, n);
}

void thomas_batch(const TridiagonalFactor& factor, std::span<double> data,
                  std::size_t systems) {
  if (systems == 0 || data.size() != factor.size() * systems) {
    throw DomainError("thomas_batch: data does not match factor size");
  }
  kernels().thomas_batch(factor, data.data(), systems);
}

}  // namespace fkpp::simd
