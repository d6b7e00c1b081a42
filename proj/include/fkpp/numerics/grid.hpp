#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace fkpp {

enum class GeometryMode { line, radial, plane };

std::string_view to_string(GeometryMode mode);

// Spatial point. Line mode uses x only; radial mode stores the radius in x.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Uniformly spaced nodes origin, origin + dx, ..., origin + (count-1) dx.
struct Axis {
  double origin = 0.0;
  double dx = 1.0;
  std::size_t count = 0;

  double coord(std::size_t i) const { return origin + static_cast<double>(i) * dx; }
  double back() const { return coord(count - 1); }
  friend bool operator==(const Axis&, const Axis&) = default;
};

class Grid {
 public:
  // Point count per axis is floor(extent/dx) + 1; the upper end is snapped
  // down onto the last node.
  static Grid line(double x_min, double x_max, double dx);
  static Grid radial(double r_max, double dx, int dimension);
  static Grid plane(double x_min, double x_max, double y_min, double y_max,
                    double dx);

  GeometryMode mode() const { return mode_; }
  // Spatial dimension N of the modelled problem (1 for line, 2 for plane).
  int dimension() const { return dimension_; }
  double dx() const { return x_.dx; }
  const Axis& x_axis() const { return x_; }
  // Only meaningful in plane mode; a single-node axis otherwise.
  const Axis& y_axis() const { return y_; }

  std::size_t nx() const { return x_.count; }
  std::size_t ny() const { return y_.count; }
  std::size_t size() const { return x_.count * y_.count; }

  // Row-major: index = j * nx + i.
  std::size_t index(std::size_t i, std::size_t j = 0) const { return j * x_.count + i; }
  Point point(std::size_t flat_index) const;

  bool contains(const Point& p) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Grid(GeometryMode mode, int dimension, Axis x, Axis y)
      : mode_(mode), dimension_(dimension), x_(x), y_(y) {}

  GeometryMode mode_;
  int dimension_;
  Axis x_;
  Axis y_;
};

// Scalar values sampled on a grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(Grid g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  Field(Grid g, std::vector<double> v);

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }

  bool all_finite() const;
  double max() const;
  double min() const;
};

// Piecewise-linear (bilinear in plane mode) interpolation; exact at nodes.
// Throws DomainError outside the grid extents.
double interpolate(const Field& field, const Point& p);

}  // namespace fkpp
