#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <random>

#include "fkpp/error.hpp"
#include "fkpp/geometry.hpp"

using namespace fkpp;

namespace {

// Distance to a polygon with n vertices on the ellipse boundary, signed by
// the implicit function.
double brute_ellipse(double a, double b, Point p, int n) {
  double best = 1e300;
  double px = a, py = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double th = 2 * std::numbers::pi * k / n;
    const double qx = a * std::cos(th), qy = b * std::sin(th);
    // Segment (px,py)-(qx,qy).
    const double dx = qx - px, dy = qy - py;
    double t = ((p.x - px) * dx + (p.y - py) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, std::hypot(p.x - px - t * dx, p.y - py - t * dy));
    px = qx;
    py = qy;
  }
  const bool inside = (p.x * p.x) / (a * a) + (p.y * p.y) / (b * b) < 1.0;
  return inside ? -best : best;
}

}  // namespace

TEST_CASE("signed distance of the catalogue") {
  const auto ball = ConvexBody::ball({0, 0}, 1.0);
  CHECK(ball.signed_distance({2, 0}) == 1.0);
  CHECK(ball.signed_distance({0, 0}) == -1.0);
  const auto iv = ConvexBody::interval(-0.5, 0.5);
  CHECK(iv.signed_distance({0.7, 0}) == doctest::Approx(0.2));
  CHECK(iv.signed_distance({0.0, 0}) == doctest::Approx(-0.5));
  CHECK(iv.inradius() == doctest::Approx(0.5));
  CHECK(ConvexBody::ellipse({0, 0}, 0.5, 0.3).inradius() == doctest::Approx(0.3));
  CHECK_THROWS_AS(ConvexBody::ball({2, 0}, 1.0), ConfigurationError);
  CHECK_THROWS_AS(ConvexBody::interval(0.1, 0.5), ConfigurationError);
  CHECK_THROWS_AS(ConvexBody::interval(0.5, -0.5), ConfigurationError);
}

TEST_CASE("ellipse distance against a fine polygon") {
  const double a = 0.5, b = 0.3;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 40; ++k) {
    const Point p{U(rng), U(rng)};
    const double exact = ellipse_signed_distance(a, b, p);
    CHECK(std::abs(exact - brute_ellipse(a, b, p, 100000)) <= 1e-6);
  }
  // Points on the axes and at the centre.
  CHECK(ellipse_signed_distance(a, b, {0, 0}) == doctest::Approx(-b));
  CHECK(ellipse_signed_distance(a, b, {1.0, 0}) == doctest::Approx(0.5));
  CHECK(ellipse_signed_distance(a, b, {0, -0.5}) == doctest::Approx(0.2));
}

TEST_CASE("signed distance is 1-Lipschitz") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const ConvexBody bodies[] = {ConvexBody::ball({0.1, -0.1}, 0.7),
                               ConvexBody::ellipse({0.05, 0.0}, 0.5, 0.3),
                               ConvexBody::interval(-0.4, 0.6)};
  for (const auto& body : bodies) {
    for (int k = 0; k < 500; ++k) {
      const Point p{U(rng), U(rng)}, q{U(rng), U(rng)};
      const double dist = body.shape() == ConvexBody::Shape::interval
                              ? std::abs(p.x - q.x)
                              : std::hypot(p.x - q.x, p.y - q.y);
      CHECK(std::abs(body.signed_distance(p) - body.signed_distance(q)) <= dist + 1e-12);
    }
  }
}

TEST_CASE("zeta clamp") {
  const double d0 = 0.1;
  CHECK(zeta(0.5 * d0, d0) == 0.5 * d0);
  CHECK(zeta(-3 * d0, d0) == -2 * d0);
  CHECK(zeta(5 * d0, d0) == 2 * d0);
  double prev = -1e9;
  for (int i = 0; i <= 4000; ++i) {
    const double s = -0.4 + 0.8 * i / 4000;
    const double z = zeta(s, d0);
    CHECK(z >= prev);
    CHECK(zeta_prime(s, d0) >= 0.0);
    CHECK(zeta(-s, d0) == doctest::Approx(-z).scale(1.0));
    prev = z;
    const double h = 1e-7;
    CHECK(zeta_prime(s, d0) ==
          doctest::Approx((zeta(s + h, d0) - zeta(s - h, d0)) / (2 * h)).epsilon(1e-5).scale(1.0));
  }
  // C1 at the seams.
  for (double s : {d0, 2 * d0, -d0, -2 * d0}) {
    CHECK(zeta_prime(s - 1e-12, d0) == doctest::Approx(zeta_prime(s + 1e-12, d0)).scale(1.0));
  }
}

TEST_CASE("evolved and cutoff distance") {
  const CutoffDistance cd(ConvexBody::ball({0, 0}, 1.0), 2.0);
  CHECK(cd.d0() == doctest::Approx(0.2));
  CHECK(cd.evolved(0.0, {1.7, 0.3}) == ConvexBody::ball({0, 0}, 1.0).signed_distance({1.7, 0.3}));
  CHECK(cd.evolved(0.25, {2, 0}) == doctest::Approx(0.5));
  CHECK(cd.evolved(0.3, {0, 1}) == doctest::Approx(-0.6));
  CHECK_THROWS_AS(cd.evolved(-0.1, {0, 0}), DomainError);

  // The speed identity d_t d + c = 0 holds at every point.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  const CutoffDistance ce(ConvexBody::ellipse({0, 0}, 0.5, 0.3), 1.9);
  for (int k = 0; k < 100; ++k) {
    const Point p{U(rng), U(rng)};
    const double dt = (ce.evolved(0.3 + 1e-6, p) - ce.evolved(0.3 - 1e-6, p)) / 2e-6;
    CHECK(dt == doctest::Approx(-1.9).epsilon(1e-8));
  }

  // |grad cutoff| = 1 in the band |d| < d0.
  const double h = 1e-6;
  int tested = 0;
  for (int k = 0; k < 4000 && tested < 200; ++k) {
    const Point p{U(rng), U(rng)};
    const double t = 0.1;
    const double d = ce.evolved(t, p);
    if (std::abs(d) >= ce.d0() - 2 * h) continue;
    const double gx = (ce.cutoff(t, {p.x + h, p.y}) - ce.cutoff(t, {p.x - h, p.y})) / (2 * h);
    const double gy = (ce.cutoff(t, {p.x, p.y + h}) - ce.cutoff(t, {p.x, p.y - h})) / (2 * h);
    CHECK(std::hypot(gx, gy) == doctest::Approx(1.0).epsilon(1e-5));
    ++tested;
  }
  CHECK(tested >= 50);
}

TEST_CASE("classify_region") {
  const double eps = 0.02, C = 3.0, L = eps * std::abs(std::log(eps));
  const CutoffDistance cd(ConvexBody::interval(-0.5, 0.5), 2.0);
  CHECK(classify_region(cd, 0.0, {0.5, 0}, eps, C) == Region::tube);
  CHECK(classify_region(cd, 0.0, {0.5 - 2 * C * L, 0}, eps, C) == Region::inside);
  CHECK(classify_region(cd, 0.0, {0.5 + 2 * C * L, 0}, eps, C) == Region::outside);
  CHECK(std::string(to_string(Region::tube)) == "tube");
  CHECK_THROWS_AS(classify_region(cd, 0.0, {0, 0}, 0.5, C), DomainError);
  CHECK_THROWS_AS(classify_region(cd, 0.0, {0, 0}, eps, 0.0), DomainError);
}
