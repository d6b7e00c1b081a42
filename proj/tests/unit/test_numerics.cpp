#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fkpp/error.hpp"
#include "fkpp/numerics/grid.hpp"
#include "fkpp/numerics/tridiagonal.hpp"
#include "fkpp/simd/kernels.hpp"
#include "fkpp/solver.hpp"

using namespace fkpp;

namespace {

// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
    }
    std::swap(a[k], a[p]);
    std::swap(b[k], b[p]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

struct System {
  std::vector<double> lo, di, up, rhs;
};

System random_dominant(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  System s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
           std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.lo[i] = i > 0 ? U(rng) : 0.0;
    s.up[i] = i + 1 < n ? U(rng) : 0.0;
    s.di[i] = std::abs(s.lo[i]) + std::abs(s.up[i]) + 0.5 + std::abs(U(rng));
    if (U(rng) < 0) s.di[i] = -s.di[i];
    s.rhs[i] = U(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("grid construction and layout") {
  const Grid g = Grid::line(-1.0, 1.0, 0.25);
  CHECK(g.nx() == 9);
  CHECK(g.size() == 9);
  CHECK(g.point(3).x == doctest::Approx(-0.25));

  const Grid r = Grid::radial(1.0, 0.1, 3);
  CHECK(r.dimension() == 3);
  CHECK(r.x_axis().origin == 0.0);
  CHECK(r.nx() == 11);

  const Grid p = Grid::plane(-1.0, 1.0, -0.5, 0.5, 0.25);
  CHECK(p.nx() == 9);
  CHECK(p.ny() == 5);
  const Point q = p.point(p.index(2, 3));
  CHECK(q.x == doctest::Approx(-0.5));
  CHECK(q.y == doctest::Approx(0.25));

  CHECK_THROWS_AS(Grid::line(0.0, 1.0, 0.0), ConfigurationError);
  CHECK_THROWS_AS(Grid::line(0.0, 1.0, 0.6), ConfigurationError);
  CHECK_THROWS_AS(Grid::radial(1.0, 0.1, 1), ConfigurationError);
  CHECK_THROWS_AS(Field(g, std::vector<double>(3)), ConfigurationError);
}

TEST_CASE("interpolate") {
  const Grid g = Grid::line(0.0, 1.0, 0.01);
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = g.point(i).x;
  CHECK(interpolate(f, {0.37, 0.0}) == doctest::Approx(0.37).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); i += 13) {
    f[i] = U(rng);
    CHECK(interpolate(f, g.point(i)) == f[i]);
  }

  Field sq(g);
  for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g.point(i).x * g.point(i).x;
  CHECK(std::abs(interpolate(sq, {0.505, 0.0}) - 0.255025) <= 2.5e-5);

  SUBCASE("affine exactness in every mode") {
    const Grid grids[] = {Grid::line(-2.0, 3.0, 0.1), Grid::radial(2.0, 0.05, 2),
                          Grid::plane(-1.0, 1.0, -1.0, 2.0, 0.1)};
    for (const Grid& gg : grids) {
      Field a(gg);
      for (std::size_t i = 0; i < gg.size(); ++i) {
        const Point p = gg.point(i);
        a[i] = 0.3 + 1.7 * p.x - (gg.mode() == GeometryMode::plane ? 0.9 * p.y : 0.0);
      }
      for (int k = 0; k < 200; ++k) {
        const double x = gg.x_axis().origin + U(rng) * (gg.x_axis().back() - gg.x_axis().origin);
        const double y = gg.mode() == GeometryMode::plane
                             ? gg.y_axis().origin + U(rng) * (gg.y_axis().back() - gg.y_axis().origin)
                             : 0.0;
        const double expect =
            0.3 + 1.7 * x - (gg.mode() == GeometryMode::plane ? 0.9 * y : 0.0);
        CHECK(interpolate(a, {x, y}) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(interpolate(f, {1.5, 0.0}), DomainError);
}

TEST_CASE("solve_tridiagonal") {
  const std::vector<double> one{1, 1, 1}, zero{0, 0, 0}, r{3, -2, 5};
  CHECK(solve_tridiagonal(zero, one, zero, r) == r);

  const auto x = solve_tridiagonal(std::vector<double>{0, -1, -1}, std::vector<double>{3, 3, 3},
                                   std::vector<double>{-1, -1, 0}, std::vector<double>{2, 1, 2});
  for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(11);
  for (std::size_t n : {5u, 17u, 60u}) {
    const System s = random_dominant(n, rng);
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      a[i][i] = s.di[i];
      if (i > 0) a[i][i - 1] = s.lo[i];
      if (i + 1 < n) a[i][i + 1] = s.up[i];
    }
    const auto got = solve_tridiagonal(s.lo, s.di, s.up, s.rhs);
    const auto ref = dense_solve(a, s.rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-10);
  }

  SUBCASE("solve then apply is the identity") {
    const System s = random_dominant(10000, rng);
    const auto y = solve_tridiagonal(s.lo, s.di, s.up, s.rhs);
    const auto back = apply_tridiagonal(s.lo, s.di, s.up, y);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
      err = std::max(err, std::abs(back[i] - s.rhs[i]));
      scale = std::max(scale, std::abs(s.rhs[i]));
    }
    CHECK(err <= 1e-10 * scale);
  }

  CHECK_THROWS_AS(solve_tridiagonal(std::vector<double>{0, 1}, std::vector<double>{1, 1},
                                    std::vector<double>{1, 0}, std::vector<double>{1, 1}),
                  NumericalError);
  CHECK_THROWS_AS(solve_tridiagonal(one, one, zero, std::vector<double>{1}), DomainError);
}

TEST_CASE("simd kernels are bit-identical to the scalar reference") {
  if (!simd::available(simd::Backend::avx2)) {
    MESSAGE("AVX2 not available; comparing scalar against itself");
  }
  const simd::Backend fast =
      simd::available(simd::Backend::avx2) ? simd::Backend::avx2 : simd::Backend::scalar;
  const simd::Backend saved = simd::active();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    std::vector<double> u(n), lo(n), mid(n), hi(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = U(rng);
      lo[i] = U(rng);
      hi[i] = U(rng);
      mid[i] = -(lo[i] + hi[i]);
      a[i] = U(rng);
      b[i] = U(rng);
    }
    auto run_all = [&](simd::Backend be) {
      simd::set_backend(be);
      std::vector<double> r1 = u;
      simd::logistic_map(r1, std::exp(0.37));
      std::vector<double> r2(n);
      simd::stencil3(r2, u, lo, mid, hi);
      std::vector<double> r3(n);
      simd::combine3(r3, a, u, b, 0.2, -0.4, 0.2);
      return std::vector<std::vector<double>>{r1, r2, r3};
    };
    CHECK(run_all(simd::Backend::scalar) == run_all(fast));
  }

  SUBCASE("batched Thomas") {
    const std::size_t n = 37, systems = 13;
    const System s = random_dominant(n, rng);
    const TridiagonalFactor f = factor_tridiagonal(s.lo, s.di, s.up);
    std::vector<double> data(n * systems);
    for (double& v : data) v = U(rng);
    auto solve = [&](simd::Backend be) {
      simd::set_backend(be);
      std::vector<double> d = data;
      simd::thomas_batch(f, d, systems);
      return d;
    };
    const auto ref = solve(simd::Backend::scalar);
    CHECK(ref == solve(fast));
    // Each interleaved column solves its own system.
    for (std::size_t c = 0; c < systems; c += 5) {
      std::vector<double> rhs(n);
      for (std::size_t k = 0; k < n; ++k) rhs[k] = data[k * systems + c];
      const auto x = solve_tridiagonal(s.lo, s.di, s.up, rhs);
      for (std::size_t k = 0; k < n; ++k) CHECK(ref[k * systems + c] == doctest::Approx(x[k]).epsilon(1e-12));
    }
  }

  SUBCASE("whole solver runs") {
    for (const Grid& g : {Grid::line(-1.0, 1.0, 0.005), Grid::plane(-0.6, 0.6, -0.6, 0.6, 0.005)}) {
      SimConfig cfg;
      cfg.epsilon = 0.04;
      cfg.grid = g;
      cfg.initial = InitialData::compact(ConvexBody::interval(-0.2, 0.2), 0.9, 0.1);
      if (g.mode() == GeometryMode::plane) {
        cfg.initial = InitialData::compact(ConvexBody::ball({0, 0}, 0.1), 0.9, 0.05);
      }
      cfg.t_end = 0.02;
      Field fast_out(g), ref_out(g);
      simd::set_backend(simd::Backend::scalar);
      Field u0 = build_initial(cfg.initial, g, cfg.epsilon);
      Stepper s1(g, cfg.epsilon);
      ref_out = u0;
      for (int k = 0; k < 10; ++k) s1.step(ref_out, 1e-3);
      simd::set_backend(fast);
      Stepper s2(g, cfg.epsilon);
      fast_out = u0;
      for (int k = 0; k < 10; ++k) s2.step(fast_out, 1e-3);
      CHECK(ref_out.values == fast_out.values);
    }
  }
  simd::set_backend(saved);
  CHECK(simd::to_string(simd::Backend::scalar) == "scalar");
}
