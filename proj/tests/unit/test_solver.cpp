#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fkpp/error.hpp"
#include "fkpp/solver.hpp"
#include "fkpp/waves.hpp"

using namespace fkpp;

namespace {

double trapezoid_sum(const Field& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += (i == 0 || i + 1 == u.size()) ? 0.5 * u[i] : u[i];
  }
  return s;
}

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SimConfig line_config(double eps, double t_end) {
  SimConfig cfg;
  cfg.epsilon = eps;
  const double margin = 0.5 + 2 * t_end + 10 * eps * std::abs(std::log(eps)) + 0.05;
  cfg.grid = Grid::line(-margin, margin, eps / 8);
  cfg.initial = InitialData::compact(ConvexBody::interval(-0.5, 0.5), 0.9, 0.2);
  cfg.t_end = t_end;
  return cfg;
}

}  // namespace

TEST_CASE("initial data") {
  const double eps = 0.02;
  const Grid g = Grid::line(-1.0, 1.0, eps / 8);
  const auto compact = InitialData::compact(ConvexBody::interval(-0.5, 0.5), 0.9, 0.2);
  const Field u = build_initial(compact, g, eps);
  CHECK(interpolate(u, {0.0, 0.0}) == doctest::Approx(0.9));
  CHECK(interpolate(u, {0.6, 0.0}) == 0.0);
  CHECK(u.min() >= 0.0);
  CHECK(u.max() <= 0.9);
  CHECK(compact.slope_floor() == doctest::Approx(13.5));
  // One-sided normal slope at the boundary.
  const double h = 1e-7;
  CHECK((compact.g({0.5 - h, 0}) - compact.g({0.5, 0})) / h == doctest::Approx(13.5).epsilon(1e-5));

  const auto alg = InitialData::algebraic(0.5, 2.0, 1.0);
  CHECK(alg.value({0.0, 0.0}, eps) == 0.5);
  CHECK(alg.value({eps, 0.0}, eps) == doctest::Approx(0.25));
  CHECK(alg.g({0.3, 0.0}) == 0.0);

  const auto tail =
      InitialData::compact(ConvexBody::interval(-0.5, 0.5), 0.9, 0.2, ExponentialTail{1.5, 0.1});
  for (double x : {0.6, 1.0, 2.0}) {
    CHECK(tail.value({x, 0}, eps) <= 0.1 * std::exp(-1.5 * x / eps) * (1 + 1e-12));
  }
  CHECK_THROWS_AS(InitialData::compact(ConvexBody::interval(-0.5, 0.5), 1.2, 0.2),
                  ConfigurationError);
  CHECK_THROWS_AS(InitialData::compact(ConvexBody::interval(-0.5, 0.5), 0.9, 0.2,
                                       ExponentialTail{0.5, 0.1}),
                  ConfigurationError);
  CHECK_THROWS_AS(InitialData::algebraic(0.5, 2.0, 0.4), ConfigurationError);
}

TEST_CASE("reaction substep") {
  const double eps = 0.02;
  const Grid g = Grid::line(0.0, 1.0, 0.25);
  const Field u(g, std::vector<double>{0.0, 1.0, 0.5, 0.2, 0.9});
  const Field r = reaction_substep(u, eps * std::log(3.0), eps);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 1.0);
  CHECK(r[2] == doctest::Approx(0.75).epsilon(1e-15));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.2);
  for (int k = 0; k < 100; ++k) {
    const double a = U(rng), b = a + U(rng);
    const Field f(g, std::vector<double>{a, a, a, a, a}), h(g, std::vector<double>{b, b, b, b, b});
    CHECK(reaction_substep(f, 0.01, eps)[0] <= reaction_substep(h, 0.01, eps)[0]);
  }
  CHECK_THROWS_AS(reaction_substep(Field(g, std::vector<double>{0, 0, -0.1, 0, 0}), 0.01, eps),
                  NumericalError);
}

TEST_CASE("diffusion substep") {
  const double eps = 0.05, dx = eps / 8;
  const Grid g = Grid::line(0.0, 1.0, dx);
  const Field c(g, 0.37);
  CHECK(sup_diff(diffusion_substep(c, 1e-3, eps), c) <= 1e-15);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Field r(g);
  for (double& v : r.values) v = U(rng);
  const Field d = diffusion_substep(r, 2e-3, eps);
  CHECK(trapezoid_sum(d) == doctest::Approx(trapezoid_sum(r)).epsilon(1e-12));

  // Neumann cosine modes are eigenvectors; Crank-Nicolson amplification.
  const std::size_t n = g.nx();
  for (int k : {1, 5, 40}) {
    const double th = std::numbers::pi * k / static_cast<double>(n - 1);
    Field m(g);
    for (std::size_t i = 0; i < n; ++i) m[i] = std::cos(th * static_cast<double>(i));
    const double dt = 1e-3;
    const double beta = eps * dt * (1 - std::cos(th)) / (dx * dx);
    const double amp = (1 - beta) / (1 + beta);
    const Field out = diffusion_substep(m, dt, eps);
    for (std::size_t i = 0; i < n; i += 7) CHECK(out[i] == doctest::Approx(amp * m[i]).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dt rules") {
  SimConfig cfg = line_config(0.02, 0.5);
  const double dx = cfg.grid.dx();
  CHECK(monotone_dt_limit(cfg.grid, 0.02) == doctest::Approx(dx * dx / 0.02));
  CHECK(default_dt(cfg.grid, 0.02) == doctest::Approx(std::min(dx / 2, dx * dx / 0.02)));
  CHECK(validate(cfg) == default_dt(cfg.grid, 0.02));

  const Grid radial = Grid::radial(3.0, 0.0025, 3);
  CHECK(monotone_dt_limit(radial, 0.02) == doctest::Approx(0.0025 * 0.0025 / (3 * 0.02)));

  SimConfig bad = cfg;
  bad.dt = dx;
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.grid = Grid::line(-3.0, 3.0, 0.02 / 4);
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.grid = Grid::line(-1.0, 1.0, dx);
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.checkpoint_times = {0.3, 0.1};
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.checkpoint_times = {0.7};
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.record = {"velocity"};
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
  bad = cfg;
  bad.initial = InitialData::compact(ConvexBody::ellipse({0, 0}, 0.5, 0.3), 0.9, 0.2);
  CHECK_THROWS_AS(validate(bad), ConfigurationError);
}

TEST_CASE("run basics") {
  SimConfig cfg = line_config(0.04, 0.2);
  cfg.checkpoint_times = {0.0, 0.05, 0.2};
  cfg.record = {"front", "thickness", "sup", "inf"};
  const Trajectory tr = run(cfg);
  REQUIRE(tr.checkpoints.size() == 3);
  CHECK(tr.checkpoints[0].field.values == build_initial(cfg.initial, cfg.grid, cfg.epsilon).values);
  CHECK(tr.checkpoints[1].t == 0.05);
  CHECK(tr.checkpoints[2].t == 0.2);
  CHECK(tr.observables.at("sup").size() == 3);
  // Nonnegative and bounded by max(1, sup u0).
  for (const auto& cp : tr.checkpoints) {
    CHECK(cp.field.min() >= 0.0);
    CHECK(cp.field.max() <= 1.0 + 1e-8);
  }
  // Observer sees t = 0 and every step.
  std::size_t calls = 0;
  double last = -1;
  run(cfg, [&](double t, const Field&) {
    CHECK(t > last);
    last = t;
    ++calls;
  });
  CHECK(calls == tr.steps + 1);
  CHECK(last == 0.2);
}

TEST_CASE("Strang splitting is second order") {
  const double eps = 0.1;
  const Grid g = Grid::line(-2.0, 2.0, eps / 8);
  Field u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i).x;
    u0[i] = 0.6 * std::exp(-x * x / 0.2);
  }
  auto solve = [&](double dt) {
    Stepper s(g, eps);
    Field u = u0;
    const int n = static_cast<int>(std::lround(0.2 / dt));
    for (int k = 0; k < n; ++k) s.step(u, dt);
    return u;
  };
  const Field a = solve(0.01), b = solve(0.005), c = solve(0.0025);
  const double order = std::log2(sup_diff(a, b) / sup_diff(b, c));
  MESSAGE("observed order " << order);
  CHECK(order >= 1.8);
}

TEST_CASE("comparison preservation") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SimConfig cfg = line_config(0.04, 0.1);
  for (int pair = 0; pair < 10; ++pair) {
    Field u(cfg.grid), v(cfg.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = U(rng);
      v[i] = std::min(1.0, u[i] + 0.3 * U(rng));
    }
    const Field ue = run(cfg, u).final_field();
    const Field ve = run(cfg, v).final_field();
    bool ordered = true;
    for (std::size_t i = 0; i < u.size(); ++i) ordered = ordered && ue[i] <= ve[i];
    CHECK(ordered);
  }
}

TEST_CASE("sup bound after generation") {
  for (double eps : {0.04, 0.02}) {
    SimConfig cfg = line_config(eps, 0.4);
    const double teps = 1.5 * eps * std::abs(std::log(eps));
    double worst = 0.0;
    run(cfg, [&](double t, const Field& u) {
      if (t >= teps) worst = std::max(worst, u.max());
    });
    CHECK(worst <= 1.0 + eps + 1e-8);
  }
}

TEST_CASE("radial and plane runs agree") {
  const double eps = 0.04, dx = eps / 8;
  const auto init = InitialData::compact(ConvexBody::ball({0, 0}, 0.3), 0.9, 0.1);
  const Grid rg = Grid::radial(1.0, dx, 2);
  const Grid pg = Grid::plane(-1.0, 1.0, -1.0, 1.0, dx);
  const double dt = std::min(default_dt(rg, eps), default_dt(pg, eps));
  const int n = static_cast<int>(std::ceil(0.1 / dt));
  const double h = 0.1 / n;
  Field ur = build_initial(init, rg, eps), up = build_initial(init, pg, eps);
  Stepper sr(rg, eps), sp(pg, eps);
  for (int k = 0; k < n; ++k) {
    sr.step(ur, h);
    sp.step(up, h);
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < rg.nx(); ++i) {
    const double r = rg.x_axis().coord(i);
    if (r > 0.8) break;
    diff = std::max(diff, std::abs(ur[i] - interpolate(up, {r, 0.0})));
    diff = std::max(diff, std::abs(ur[i] - interpolate(up, {r / std::sqrt(2.0), r / std::sqrt(2.0)})));
  }
  MESSAGE("radial vs plane sup difference " << diff);
  CHECK(diff <= 5e-3);
}

TEST_CASE("front position and thickness") {
  const Grid g = Grid::line(0.0, 3.0, 0.01);
  Field ramp(g);
  for (std::size_t i = 0; i < g.size(); ++i) ramp[i] = 0.5 - 0.2 * (g.point(i).x - 1.23);
  CHECK(std::abs(*front_position(ramp, 0.5) - 1.23) <= 0.01);

  // Shift by k cells.
  Field bump(g);
  for (std::size_t i = 0; i < g.size(); ++i) bump[i] = 1.0 / (1.0 + std::exp((g.point(i).x - 1.0) / 0.05));
  Field shifted(g, 0.0);
  const std::size_t k = 17;
  for (std::size_t i = 0; i < g.size(); ++i) shifted[i] = i >= k ? bump[i - k] : bump[0];
  CHECK(*front_position(shifted, 0.5) - *front_position(bump, 0.5) ==
        doctest::Approx(k * 0.01).epsilon(1e-12));
  CHECK(*layer_thickness(shifted, 0.02) == doctest::Approx(*layer_thickness(bump, 0.02)).epsilon(1e-12));

  // Evaluated minimal wave.
  const double eps = 0.02, x0 = 1.1;
  const WaveProfile p = solve_wave(2.0);
  const Grid wg = Grid::line(0.0, 3.0, eps / 16);
  Field w(wg);
  for (std::size_t i = 0; i < wg.size(); ++i) w[i] = evaluate(p, (wg.point(i).x - x0) / eps);
  CHECK(std::abs(*front_position(w, 0.5) - x0) <= wg.dx());
  const double expect = eps * (locate_level(p, eps) - locate_level(p, 1.0 - 2 * eps));
  CHECK(std::abs(*layer_thickness(w, eps) - expect) <= 2 * wg.dx());

  // One-cell step.
  Field step(g, 0.0);
  for (std::size_t i = 0; i < 100; ++i) step[i] = 1.0;
  CHECK(*layer_thickness(step, 0.02) <= 2 * g.dx());
  CHECK(!front_position(Field(g, 0.0), 0.5));

  // Plane rays.
  const Grid pg = Grid::plane(-1.0, 1.0, -1.0, 1.0, 0.01);
  Field disk(pg);
  for (std::size_t i = 0; i < pg.size(); ++i) {
    const Point q = pg.point(i);
    disk[i] = 1.0 / (1.0 + std::exp((std::hypot(q.x, q.y) - 0.6) / 0.03));
  }
  for (const auto& r : front_positions(disk, 0.5, {0.0, 0.7, 2.0, 4.0})) {
    REQUIRE(r);
    CHECK(std::abs(*r - 0.6) <= 0.01);
  }
  CHECK_THROWS_AS(front_positions(ramp, 0.5, {0.0}), DomainError);
}

TEST_CASE("grid refinement of the front") {
  const double eps = 0.04, T = 0.3;
  double fronts[2];
  for (int r = 0; r < 2; ++r) {
    SimConfig cfg = line_config(eps, T);
    cfg.grid = Grid::line(-2.5, 2.5, eps / (8 << r));
    cfg.checkpoint_times = {T};
    cfg.record = {"front"};
    fronts[r] = *run(cfg).observables.at("front").back().second;
  }
  MESSAGE("front " << fronts[0] << " vs " << fronts[1]);
  CHECK(std::abs(fronts[0] - fronts[1]) <= eps / 8);
}

TEST_CASE("checkpoint dump") {
  const Grid g = Grid::line(0.0, 1.0, 0.5);
  std::ostringstream os;
  write_checkpoint(os, 0.25, Field(g, std::vector<double>{1.0, 0.5, 0.125}));
  CHECK(os.str() == "# t=0.25\nx,u\n0,1\n0.5,0.5\n1,0.125\n");
  const Grid p = Grid::plane(0.0, 1.0, 0.0, 1.0, 0.5);
  std::ostringstream ps;
  write_checkpoint(ps, 0.0, Field(p, 0.0));
  CHECK(ps.str().rfind("# t=0\nx,y,u\n0,0,0\n", 0) == 0);
}
