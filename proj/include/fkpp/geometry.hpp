#pragma once

#include "fkpp/numerics/grid.hpp"

namespace fkpp {

// Convex initial region. Points use the same convention as Grid: line mode
// reads x only, radial mode stores r in x, plane mode reads (x, y).
class ConvexBody {
 public:
  enum class Shape { interval, ball, ellipse };

  static ConvexBody interval(double a, double b);
  static ConvexBody ball(Point center, double radius);
  static ConvexBody ellipse(Point center, double semi_x, double semi_y);

  Shape shape() const { return shape_; }
  Point center() const { return center_; }
  // interval: half-length; ball: radius; ellipse: semi-axes.
  double semi_x() const { return sx_; }
  double semi_y() const { return sy_; }

  // Negative inside, zero on the boundary, positive outside.
  double signed_distance(Point p) const;
  double inradius() const;
  double diameter() const;

 private:
  ConvexBody(Shape s, Point c, double sx, double sy);
  Shape shape_;
  Point center_;
  double sx_;
  double sy_;
};

// Signed distance to an axis-aligned ellipse centred at the origin.
double ellipse_signed_distance(double semi_x, double semi_y, Point p);

// C^2 nondecreasing clamp: identity on |s| <= d0, constant +-2 d0 beyond 2 d0.
double zeta(double s, double d0);
double zeta_prime(double s, double d0);

class CutoffDistance {
 public:
  // d0 <= 0 selects the default 0.2 * inradius.
  CutoffDistance(ConvexBody body, double speed, double d0 = 0.0);

  const ConvexBody& body() const { return body_; }
  double speed() const { return c_; }
  double d0() const { return d0_; }

  // Uncut distance to the front dilated by speed * t.
  double evolved(double t, Point p) const;
  // zeta(evolved(t, p)).
  double cutoff(double t, Point p) const;

 private:
  ConvexBody body_;
  double c_;
  double d0_;
};

enum class Region { tube, inside, outside };
const char* to_string(Region r);

// Three-band classification around the front with half-width
// C_const * eps |ln eps|.
Region classify_region(const CutoffDistance& cd, double t, Point p, double epsilon,
                       double C_const);

}  // namespace fkpp
