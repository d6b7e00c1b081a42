#include "fkpp/numerics/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

Axis make_axis(double lo, double hi, double dx, const char* name) {
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw ConfigurationError(std::string("grid: dx must be positive on axis ") + name);
  }
  if (!(hi > lo)) {
    throw ConfigurationError(std::string("grid: empty extent on axis ") + name);
  }
  const double cells = std::floor((hi - lo) / dx + 1e-9);
  if (cells < 2.0) {
    std::ostringstream os;
    os << "grid: axis " << name << " needs at least 3 points (extent " << hi - lo
       << ", dx " << dx << ")";
    throw ConfigurationError(os.str());
  }
  return Axis{lo, dx, static_cast<std::size_t>(cells) + 1};
}

bool within(double v, double lo, double hi) {
  const double tol = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return v >= lo - tol && v <= hi + tol;
}

}  // namespace

std::string_view to_string(GeometryMode mode) {
  switch (mode) {
    case GeometryMode::line: return "line";
    case GeometryMode::radial: return "radial";
    case GeometryMode::plane: return "plane";
  }
  return "?";
}

Grid Grid::line(double x_min, double x_max, double dx) {
  return Grid(GeometryMode::line, 1, make_axis(x_min, x_max, dx, "x"),
              Axis{0.0, dx, 1});
}

Grid Grid::radial(double r_max, double dx, int dimension) {
  if (dimension < 2) {
    throw ConfigurationError("grid: radial mode needs dimension N >= 2");
  }
  return Grid(GeometryMode::radial, dimension, make_axis(0.0, r_max, dx, "r"),
              Axis{0.0, dx, 1});
}

Grid Grid::plane(double x_min, double x_max, double y_min, double y_max,
                 double dx) {
  return Grid(GeometryMode::plane, 2, make_axis(x_min, x_max, dx, "x"),
              make_axis(y_min, y_max, dx, "y"));
}

Point Grid::point(std::size_t flat_index) const {
  const std::size_t i = flat_index % x_.count;
  const std::size_t j = flat_index / x_.count;
  if (mode_ == GeometryMode::plane) return {x_.coord(i), y_.coord(j)};
  return {x_.coord(i), 0.0};
}

bool Grid::contains(const Point& p) const {
  if (!within(p.x, x_.origin, x_.back())) return false;
  if (mode_ == GeometryMode::plane) return within(p.y, y_.origin, y_.back());
  return true;
}

Field::Field(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ConfigurationError("field: value count does not match grid");
  }
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

namespace {

// Cell index and local coordinate in [0,1] along one axis.
std::pair<std::size_t, double> locate(const Axis& a, double v) {
  double s = (v - a.origin) / a.dx;
  const double last = static_cast<double>(a.count - 1);
  s = std::clamp(s, 0.0, last);
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i >= a.count - 1) i = a.count - 2;
  return {i, s - static_cast<double>(i)};
}

}  // namespace

double interpolate(const Field& field, const Point& p) {
  const Grid& g = field.grid;
  if (!g.contains(p)) {
    std::ostringstream os;
    os << "interpolate: point (" << p.x << ", " << p.y << ") outside grid";
    throw DomainError(os.str());
  }
  const auto [i, tx] = locate(g.x_axis(), p.x);
  if (g.mode() != GeometryMode::plane) {
    const double a = field[i];
    const double b = field[i + 1];
    return tx == 0.0 ? a : a + tx * (b - a);
  }
  const auto [j, ty] = locate(g.y_axis(), p.y);
  const double f00 = field[g.index(i, j)];
  const double f10 = field[g.index(i + 1, j)];
  const double f01 = field[g.index(i, j + 1)];
  const double f11 = field[g.index(i + 1, j + 1)];
  const double lo = tx == 0.0 ? f00 : f00 + tx * (f10 - f00);
  const double hi = tx == 0.0 ? f01 : f01 + tx * (f11 - f01);
  return ty == 0.0 ? lo : lo + ty * (hi - lo);
}

}  // namespace fkpp
