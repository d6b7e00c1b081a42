#include "fkpp/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

// Root of F(s) = (r0 z0 / (s + r0))^2 + (z1 / (s + 1))^2 - 1 on [lo, hi],
// where F is strictly decreasing. Bisection to the last representable bit.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double lo = z1 - 1.0;
  double hi = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int it = 0; it < 2000; ++it) {
    s = 0.5 * (lo + hi);
    if (s == lo || s == hi) return s;
    const double a = n0 / (s + r0), b = z1 / (s + 1.0);
    const double f = a * a + b * b - 1.0;
    if (f > 0.0) {
      lo = s;
    } else if (f < 0.0) {
      hi = s;
    } else {
      return s;
    }
  }
  throw NumericalError("ellipse distance: foot-point iteration did not converge");
}

// Unsigned distance from (y0, y1) >= 0 to the ellipse with e0 >= e1 > 0.
double ellipse_distance_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0, z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double s = ellipse_root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (s + r0), x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer = e0 * y0, denom = e0 * e0 - e1 * e1;
  if (numer < denom) {
    const double q = numer / denom;
    const double x0 = e0 * q, x1 = e1 * std::sqrt(1.0 - q * q);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

}  // namespace

ConvexBody::ConvexBody(Shape s, Point c, double sx, double sy)
    : shape_(s), center_(c), sx_(sx), sy_(sy) {
  if (!(std::isfinite(sx) && std::isfinite(sy) && sx > 0.0 && sy > 0.0)) {
    throw ConfigurationError("convex body: extents must be positive");
  }
  if (!(signed_distance({0.0, 0.0}) < 0.0)) {
    throw ConfigurationError("convex body: the origin must lie in the interior");
  }
}

ConvexBody ConvexBody::interval(double a, double b) {
  if (!(a < b)) throw ConfigurationError("interval: need a < b");
  const double h = 0.5 * (b - a);
  return ConvexBody(Shape::interval, {a + h, 0.0}, h, h);
}

ConvexBody ConvexBody::ball(Point center, double radius) {
  return ConvexBody(Shape::ball, center, radius, radius);
}

ConvexBody ConvexBody::ellipse(Point center, double semi_x, double semi_y) {
  return ConvexBody(Shape::ellipse, center, semi_x, semi_y);
}

double ConvexBody::signed_distance(Point p) const {
  const double dx = p.x - center_.x, dy = p.y - center_.y;
  switch (shape_) {
    case Shape::interval:
      return std::abs(dx) - sx_;
    case Shape::ball:
      return std::hypot(dx, dy) - sx_;
    case Shape::ellipse:
      return ellipse_signed_distance(sx_, sy_, {dx, dy});
  }
  return 0.0;
}

double ConvexBody::inradius() const { return std::min(sx_, sy_); }

double ConvexBody::diameter() const { return 2.0 * std::max(sx_, sy_); }

double ellipse_signed_distance(double semi_x, double semi_y, Point p) {
  double y0 = std::abs(p.x), y1 = std::abs(p.y);
  double e0 = semi_x, e1 = semi_y;
  if (e0 < e1) {
    std::swap(e0, e1);
    std::swap(y0, y1);
  }
  const double d = ellipse_distance_quadrant(e0, e1, y0, y1);
  const double q = (y0 / e0) * (y0 / e0) + (y1 / e1) * (y1 / e1);
  return q < 1.0 ? -d : d;
}

double zeta(double s, double d0) {
  const double a = std::abs(s);
  if (a <= d0) return s;
  if (a >= 2.0 * d0) return std::copysign(2.0 * d0, s);
  const double t = (a - d0) / d0;
  const double h = t * (1.0 + t * t * (4.0 + t * (-7.0 + 3.0 * t)));
  return std::copysign(d0 * (1.0 + h), s);
}

double zeta_prime(double s, double d0) {
  const double a = std::abs(s);
  if (a <= d0) return 1.0;
  if (a >= 2.0 * d0) return 0.0;
  const double t = (a - d0) / d0;
  return (1.0 - t) * (1.0 - t) * (1.0 + t * (2.0 + 15.0 * t));
}

CutoffDistance::CutoffDistance(ConvexBody body, double speed, double d0)
    : body_(body), c_(speed), d0_(d0 > 0.0 ? d0 : 0.2 * body.inradius()) {
  if (!(speed > 0.0 && std::isfinite(speed))) {
    throw ConfigurationError("cutoff distance: speed must be positive");
  }
}

double CutoffDistance::evolved(double t, Point p) const {
  if (t < 0.0) throw DomainError("evolved distance: t must be nonnegative");
  return body_.signed_distance(p) - c_ * t;
}

double CutoffDistance::cutoff(double t, Point p) const { return zeta(evolved(t, p), d0_); }

const char* to_string(Region r) {
  switch (r) {
    case Region::tube:
      return "tube";
    case Region::inside:
      return "inside";
    case Region::outside:
      return "outside";
  }
  return "?";
}

Region classify_region(const CutoffDistance& cd, double t, Point p, double epsilon,
                       double C_const) {
  if (!(epsilon > 0.0 && epsilon < std::exp(-1.0))) {
    throw DomainError("classify_region: epsilon must lie in (0, 1/e)");
  }
  if (!(C_const > 0.0)) throw DomainError("classify_region: C_const must be positive");
  const double half = C_const * epsilon * std::abs(std::log(epsilon));
  const double d = cd.evolved(t, p);
  if (d <= -half) return Region::inside;
  if (d >= half) return Region::outside;
  return Region::tube;
}

}  // namespace fkpp
