#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "fkpp/error.hpp"
#include "fkpp/kinetics.hpp"
#include "fkpp/ode.hpp"

using namespace fkpp;

namespace {

Kinetics make(double eps) {
  KineticsParams p;
  p.epsilon = eps;
  return Kinetics(p);
}

// Plain fixed-step RK4 on z' = z(1 - z); independent of the production path.
double rk4_logistic(double z, double s, int n) {
  const double h = s / n;
  auto f = [](double v) { return v * (1.0 - v); };
  for (int i = 0; i < n; ++i) {
    const double k1 = f(z), k2 = f(z + 0.5 * h * k1), k3 = f(z + 0.5 * h * k2), k4 = f(z + h * k3);
    z += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return z;
}

}  // namespace

TEST_CASE("logistic_flow") {
  CHECK(logistic_flow(0.5, 0.0) == 0.5);
  CHECK(logistic_flow(0.5, std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(logistic_flow(1.0, 17.3) == 1.0);
  CHECK(logistic_flow(0.0, 5.0) == 0.0);
  for (double xi : {0.01, 0.2, 0.5, 0.9}) {
    for (double s : {0.1, 1.0, 4.0}) {
      CHECK(std::abs(logistic_flow(xi, s) - rk4_logistic(xi, s, 20000)) <= 1e-10);
      // Adaptive integrator on the same ODE.
      std::array<double, 1> w{xi};
      ode::integrate_to([](const std::array<double, 1>& x, std::array<double, 1>& dx,
                           double) { dx[0] = x[0] * (1.0 - x[0]); },
                        w, 0.0, s, {1e-14, 1e-13});
      CHECK(std::abs(logistic_flow(xi, s) - w[0]) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(logistic_flow(1.5, 1.0), DomainError);
  CHECK_THROWS_AS(logistic_flow(0.5, -1.0), DomainError);
}

TEST_CASE("fbar") {
  for (double u : {-1.0, 0.0, 1.0}) CHECK(fbar(u) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fbar(0.5) == 0.25);
  CHECK(fbar(-0.75) == doctest::Approx(-1.1484375).epsilon(1e-15));
  CHECK(fbar_prime(-1.0) == doctest::Approx(-12.0).epsilon(1e-13));
  for (int i = 0; i <= 100; ++i) {
    const double u = -0.5 + 2.0 * i / 100.0;
    CHECK(fbar(u) == u * (1.0 - u));
  }
  // C2 matching at the knee.
  const double h = 1e-7;
  CHECK(fbar(-0.5 - h) == doctest::Approx(fbar(-0.5 + h)).epsilon(1e-6));
  CHECK(fbar_prime(-0.5 - h) == doctest::Approx(fbar_prime(-0.5 + h)).epsilon(1e-6));
  CHECK(fbar_second(-0.5 - h) == doctest::Approx(fbar_second(-0.5 + h)).epsilon(1e-5));
}

TEST_CASE("fbar_eps") {
  for (double eps : {0.1, 0.04, 0.02, 0.01}) {
    const Kinetics k = make(eps);
    const double L = eps * std::abs(std::log(eps));
    CHECK(std::abs(k.fbar_eps(L)) <= 1e-16);
    CHECK(k.fbar_eps(0.0) == doctest::Approx(-eps).epsilon(1e-14));
    for (int i = 0; i < 10000; ++i) {
      const double u = -2.0 + 4.0 * i / 9999.0;
      CHECK_MESSAGE(k.fbar_eps(u) <= fbar(u), "u = " << u << ", eps = " << eps);
    }
  }
  // The cutoff radii scale with eps|ln eps|: at eps <= 0.04 the outer radius
  // sits below 1/2.
  for (double eps : {0.04, 0.02, 0.01}) CHECK(make(eps).fbar_eps(0.5) == 0.25);
  CHECK_THROWS_AS(make(0.5), ConfigurationError);
  KineticsParams bad;
  bad.cutoff_inner = 3.0;
  bad.cutoff_outer = 2.0;
  CHECK_THROWS_AS(Kinetics{bad}, ConfigurationError);
}

TEST_CASE("fbar_eps derivatives match finite differences") {
  const Kinetics k = make(0.02);
  const double h = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double u = -1.9 + 3.8 * i / 199.0;
    const double d1 = (k.fbar_eps(u + h) - k.fbar_eps(u - h)) / (2 * h);
    const double d2 = (k.fbar_eps_prime(u + h) - k.fbar_eps_prime(u - h)) / (2 * h);
    CHECK(k.fbar_eps_prime(u) == doctest::Approx(d1).epsilon(1e-5).scale(1.0));
    CHECK(k.fbar_eps_second(u) == doctest::Approx(d2).epsilon(1e-4).scale(10.0));
  }
}

TEST_CASE("semiflow") {
  for (double eps : {0.04, 0.02, 0.01}) {
    const Kinetics k = make(eps);
    const double L = k.threshold();
    CHECK(k.semiflow(0.0, 0.3) == 0.3);
    for (double s : {0.5, 5.0, 50.0}) CHECK(k.semiflow(s, L) >= L);

    // Below the threshold the flow is linear: zero time |ln eps| ln 2.
    const auto z = k.zero_crossing_time(0.5 * L, 100.0);
    REQUIRE(z);
    const double expect = k.abs_log_eps() * std::log(2.0);
    CHECK(std::abs(*z - expect) <= 0.01 * expect);
    CHECK(std::abs(*z - k.positivity_time(0.5 * L)) <= 0.01 * expect);
    for (double frac : {0.1, 0.3, 0.7, 0.9}) {
      const auto zz = k.zero_crossing_time(frac * L, 200.0);
      REQUIRE(zz);
      CHECK(std::abs(*zz - k.positivity_time(frac * L)) <= 0.01 * k.positivity_time(frac * L));
    }
  }
  CHECK_THROWS_AS(make(0.02).semiflow(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(make(0.02).semiflow(1.0, 5.0), DomainError);
}

TEST_CASE("positivity_time") {
  const Kinetics k = make(0.02);
  const double L = k.threshold();
  CHECK(k.positivity_time(1e-14 * L) == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
  CHECK(k.positivity_time(0.5 * L) == doctest::Approx(k.abs_log_eps() * std::log(2.0)));
  CHECK(k.positivity_time(0.9 * L) == doctest::Approx(k.abs_log_eps() * std::log(10.0)));
  CHECK_THROWS_AS(k.positivity_time(L), DomainError);
  CHECK_THROWS_AS(k.positivity_time(0.0), DomainError);
}

TEST_CASE("semiflow_sensitivity") {
  const Kinetics k = make(0.02);
  const auto s0 = k.semiflow_sensitivity(0.0, 0.4);
  CHECK(s0.w == 0.4);
  CHECK(s0.w_xi == 1.0);
  CHECK(s0.w_xixi == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> S(0.0, 8.0), X(-1.5, 1.9);
  for (int i = 0; i < 20; ++i) {
    const double s = S(rng), xi = X(rng);
    const auto sens = k.semiflow_sensitivity(s, xi);
    CHECK(sens.w_xi > 0.0);
    CHECK(sens.w == doctest::Approx(k.semiflow(s, xi)).epsilon(1e-9));
    const double h = 1e-6;
    const double fd = (k.semiflow(s, xi + h) - k.semiflow(s, xi - h)) / (2 * h);
    // Near saturation at -1 the difference quotient is rounding noise.
    CHECK(std::abs(sens.w_xi - fd) <= 1e-4 * std::abs(fd) + 1e-7);
    // Monotone in xi; strict until the flow saturates in floating point.
    CHECK(k.semiflow(s, xi) <= k.semiflow(s, xi + 0.01) + 1e-12);
    if (k.semiflow(s, xi) > -1.0 + 1e-12) CHECK(k.semiflow(s, xi) < k.semiflow(s, xi + 0.01));
  }
}

TEST_CASE("logistic flow agrees with the semiflow above the cutoff") {
  for (double eps : {0.04, 0.02, 0.01}) {
    const Kinetics k = make(eps);
    const double outer = k.params().cutoff_outer * k.threshold();
    for (double xi : {outer + 1e-3, 0.6, 0.95}) {
      if (xi < outer) continue;
      for (double s : {0.5, 2.0, 6.0}) {
        CHECK(std::abs(k.semiflow(s, xi) - logistic_flow(xi, s)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("generation threshold behaviour") {
  // One alpha must work for every eps in the ladder, and the per-eps
  // values may differ by at most a factor 2.
  std::vector<double> alphas;
  const double xi_max = 0.9;
  for (double eps : {0.04, 0.02, 0.01}) {
    const Kinetics k = make(eps);
    alphas.push_back(generation_alpha(k, xi_max));
  }
  const double lo = *std::min_element(alphas.begin(), alphas.end());
  const double hi = *std::max_element(alphas.begin(), alphas.end());
  CHECK(hi / lo <= 2.0);
  for (double eps : {0.04, 0.02, 0.01}) {
    const Kinetics k = make(eps);
    const double s = hi * k.abs_log_eps();
    for (int i = 0; i <= 10; ++i) {
      const double xi = 3 * k.threshold() + (xi_max - 3 * k.threshold()) * i / 10.0;
      CHECK(k.semiflow(s, xi) >= 1.0 - eps - 1e-9);
    }
    // Upper bound over the full range [eps|ln eps|, sup g + M + 1].
    const double a_big = generation_alpha(k, xi_max + 1.0);
    for (int i = 0; i <= 10; ++i) {
      const double xi = k.threshold() + (xi_max + 1.0 - k.threshold()) * i / 10.0;
      CHECK(k.semiflow(a_big * k.abs_log_eps(), xi) <= 1.0 + eps + 1e-9);
    }
  }
}
