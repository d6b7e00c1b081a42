#include "fkpp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>

#include "fkpp/simd/kernels.hpp"

namespace fkpp {
namespace {

double norm(Point p) { return std::hypot(p.x, p.y); }

// Unscaled three-point coefficients of the discrete Laplacian along one
// axis, Neumann reflection folded into the boundary rows.
struct Coeffs {
  std::vector<double> lo, mid, hi;
};

Coeffs cartesian_coeffs(std::size_t n, double dx) {
  const double k = 1.0 / (dx * dx);
  Coeffs c{std::vector<double>(n, k), std::vector<double>(n, -2.0 * k),
           std::vector<double>(n, k)};
  c.lo[0] = 0.0;
  c.hi[0] = 2.0 * k;
  c.lo[n - 1] = 2.0 * k;
  c.hi[n - 1] = 0.0;
  return c;
}

// (1/r^{N-1}) (r^{N-1} u_r)_r in conservative form; N u_rr at the origin.
Coeffs radial_coeffs(std::size_t n, double dr, int dim) {
  Coeffs c{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  const double k = 1.0 / (dr * dr);
  const double p = static_cast<double>(dim - 1);
  c.mid[0] = -2.0 * dim * k;
  c.hi[0] = 2.0 * dim * k;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = static_cast<double>(i);
    const double a = std::pow((r - 0.5) / r, p) * k;
    const double b = std::pow((r + 0.5) / r, p) * k;
    if (i + 1 < n) {
      c.lo[i] = a;
      c.hi[i] = b;
    } else {
      c.lo[i] = a + b;
    }
    c.mid[i] = -(a + b);
  }
  return c;
}

Coeffs scaled(const Coeffs& c, double s) {
  Coeffs out = c;
  for (auto* v : {&out.lo, &out.mid, &out.hi}) {
    for (double& x : *v) x *= s;
  }
  return out;
}

TridiagonalFactor implicit_factor(const Coeffs& c) {
  const std::size_t n = c.mid.size();
  std::vector<double> lo(n), di(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = -c.lo[i];
    di[i] = 1.0 - c.mid[i];
    up[i] = -c.hi[i];
  }
  return factor_tridiagonal(lo, di, up);
}

double max_abs_mid(const Coeffs& c) {
  double m = 0.0;
  for (double v : c.mid) m = std::max(m, std::abs(v));
  return m;
}

// dst (cols x rows) = transpose of src (rows x cols), both row-major.
void transpose(const double* src, double* dst, std::size_t rows, std::size_t cols) {
  constexpr std::size_t B = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += B) {
    const std::size_t r1 = std::min(rows, r0 + B);
    for (std::size_t c0 = 0; c0 < cols; c0 += B) {
      const std::size_t c1 = std::min(cols, c0 + B);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) dst[c * rows + r] = src[r * cols + c];
      }
    }
  }
}

// out = (I + k D2) applied across `rows` rows of length `len`, reflecting at
// the first and last row.
void explicit_rows(const double* in, double* out, std::size_t rows, std::size_t len,
                   double k) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* cur = in + r * len;
    const double* prev = in + (r == 0 ? 1 : r - 1) * len;
    const double* next = in + (r + 1 == rows ? rows - 2 : r + 1) * len;
    simd::combine3({out + r * len, len}, {prev, len}, {cur, len}, {next, len}, k,
                   -2.0 * k, k);
  }
}

std::optional<double> scan_outermost(const std::vector<double>& v, double origin,
                                     double h, double level) {
  for (std::size_t i = v.size() - 1; i-- > 0;) {
    const bool a = v[i] >= level, b = v[i + 1] >= level;
    if (a != b) {
      const double frac = (v[i] - level) / (v[i] - v[i + 1]);
      return origin + (static_cast<double>(i) + frac) * h;
    }
  }
  return std::nullopt;
}

std::vector<double> ray_samples(const Field& u, double angle, double h) {
  const double cx = std::cos(angle), cy = std::sin(angle);
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const Point p{static_cast<double>(k) * h * cx, static_cast<double>(k) * h * cy};
    if (!u.grid.contains(p)) break;
    out.push_back(interpolate(u, p));
  }
  return out;
}

const std::set<std::string>& known_observables() {
  static const std::set<std::string> names{"front", "thickness", "sup", "inf"};
  return names;
}

std::optional<double> observe(const std::string& name, const Field& u, double eps) {
  if (name == "front") return front_position(u, 0.5);
  if (name == "thickness") return layer_thickness(u, eps);
  if (name == "sup") return u.max();
  return u.min();
}

}  // namespace

// ---------------------------------------------------------------- initial data

InitialData InitialData::compact(ConvexBody body, double amplitude, double width,
                                 std::optional<ExponentialTail> tail) {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) {
    throw ConfigurationError("initial: amplitude must lie in (0, 1]");
  }
  if (!(width > 0.0)) throw ConfigurationError("initial: width must be positive");
  if (tail && !(tail->lambda >= 1.0 && tail->M > 0.0)) {
    throw ConfigurationError("initial: tail needs lambda >= 1 and M > 0");
  }
  return InitialData(CompactData{body, amplitude, width, tail});
}

InitialData InitialData::algebraic(double m, double n, double cap) {
  if (!(m > 0.0 && n > 0.0)) throw ConfigurationError("initial: need m > 0 and n > 0");
  if (!(cap >= m)) throw ConfigurationError("initial: cap M must be at least m");
  return InitialData(AlgebraicData{m, n, cap});
}

const CompactData& InitialData::compact_data() const {
  if (!is_compact()) throw ConfigurationError("initial: data is not compact");
  return std::get<CompactData>(v_);
}

const AlgebraicData& InitialData::algebraic_data() const {
  if (is_compact()) throw ConfigurationError("initial: data is not algebraic");
  return std::get<AlgebraicData>(v_);
}

double InitialData::g(Point p) const {
  if (!is_compact()) return 0.0;
  const auto& c = std::get<CompactData>(v_);
  const double s = std::clamp(-c.body.signed_distance(p) / c.width, 0.0, 1.0);
  const double q = 1.0 - s;
  return c.amplitude * (1.0 - q * q * q);
}

double InitialData::value(Point p, double epsilon) const {
  if (is_compact()) {
    const auto& c = std::get<CompactData>(v_);
    double v = g(p);
    if (c.tail) v += c.tail->M * std::exp(-c.tail->lambda * norm(p) / epsilon);
    return v;
  }
  const auto& a = std::get<AlgebraicData>(v_);
  return a.m / (1.0 + std::pow(norm(p) / epsilon, a.n));
}

double InitialData::sup_g() const {
  return is_compact() ? std::get<CompactData>(v_).amplitude : 0.0;
}

double InitialData::tail_bound() const {
  if (is_compact()) {
    const auto& c = std::get<CompactData>(v_);
    return c.tail ? c.tail->M : 0.0;
  }
  return std::get<AlgebraicData>(v_).cap;
}

double InitialData::sup() const {
  if (is_compact()) return sup_g() + tail_bound();
  return std::get<AlgebraicData>(v_).m;
}

double InitialData::slope_floor() const {
  const auto& c = compact_data();
  return 3.0 * c.amplitude / c.width;
}

Field build_initial(const InitialData& initial, const Grid& grid, double epsilon) {
  Field f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = initial.value(grid.point(i), epsilon);
  return f;
}

// ---------------------------------------------------------------- configuration

double monotone_dt_limit(const Grid& grid, double epsilon) {
  const std::size_t n = grid.nx();
  const Coeffs c = grid.mode() == GeometryMode::radial
                       ? radial_coeffs(n, grid.dx(), grid.dimension())
                       : cartesian_coeffs(n, grid.dx());
  return 2.0 / (epsilon * max_abs_mid(c));
}

double default_dt(const Grid& grid, double epsilon) {
  return std::min(0.5 * grid.dx(), monotone_dt_limit(grid, epsilon));
}

double validate(const SimConfig& cfg) {
  const double eps = cfg.epsilon;
  auto fail = [](const std::string& msg) { throw ConfigurationError("config: " + msg); };
  if (!(eps > 0.0 && eps < std::exp(-1.0))) fail("epsilon must lie in (0, 1/e)");
  if (!(cfg.t_end > 0.0)) fail("t_end must be positive");
  const Grid& g = cfg.grid;
  if (g.dx() > eps / 8.0 * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "dx = " << g.dx() << " exceeds epsilon/8 = " << eps / 8.0;
    fail(os.str());
  }
  double dt = cfg.dt;
  if (dt == 0.0) {
    dt = default_dt(g, eps);
  } else {
    if (!(dt > 0.0)) fail("dt must be positive");
    if (dt > 0.5 * g.dx() * (1.0 + 1e-9)) fail("dt exceeds dx/2");
    const double lim = monotone_dt_limit(g, eps);
    if (dt > lim * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "dt = " << dt << " exceeds the monotonicity limit " << lim;
      fail(os.str());
    }
  }
  if (!std::is_sorted(cfg.checkpoint_times.begin(), cfg.checkpoint_times.end())) {
    fail("checkpoint_times must be sorted");
  }
  for (double t : cfg.checkpoint_times) {
    if (!(t >= 0.0 && t <= cfg.t_end)) fail("checkpoint time outside [0, t_end]");
  }
  for (const auto& name : cfg.record) {
    if (!known_observables().count(name)) fail("unknown observable '" + name + "'");
  }

  double half_diam = 0.0;
  Point center{};
  if (cfg.initial.is_compact()) {
    const ConvexBody& b = cfg.initial.compact_data().body;
    half_diam = 0.5 * b.diameter();
    center = b.center();
    using S = ConvexBody::Shape;
    switch (g.mode()) {
      case GeometryMode::line:
        if (b.shape() == S::ellipse) fail("line mode takes an interval or a ball");
        break;
      case GeometryMode::radial:
        if (b.shape() != S::ball || center.x != 0.0 || center.y != 0.0) {
          fail("radial mode takes a ball centred at the origin");
        }
        break;
      case GeometryMode::plane:
        if (b.shape() == S::interval) fail("plane mode takes a ball or an ellipse");
        break;
    }
  }
  const double margin = half_diam + 2.0 * cfg.t_end + 10.0 * eps * std::abs(std::log(eps));
  const double tol = 1e-9 * margin;
  auto need = [&](double room, const char* side) {
    if (room + tol < margin) {
      std::ostringstream os;
      os << "domain too small on the " << side << " side: " << room
         << " available, outflow margin " << margin;
      fail(os.str());
    }
  };
  const Axis& x = g.x_axis();
  need(x.back() - center.x, "upper x");
  if (g.mode() != GeometryMode::radial) need(center.x - x.origin, "lower x");
  if (g.mode() == GeometryMode::plane) {
    const Axis& y = g.y_axis();
    need(y.back() - center.y, "upper y");
    need(center.y - y.origin, "lower y");
  }
  return dt;
}

// ---------------------------------------------------------------- stepping

struct Stepper::Impl {
  Coeffs base_x;
  Coeffs base_y;
  struct Cached {
    Coeffs explicit_x;  // scaled by h eps / 2 (line, radial)
    double k = 0.0;     // h eps / (2 dx^2) (plane)
    TridiagonalFactor fx;
    TridiagonalFactor fy;
  };
  std::map<double, Cached> cache;
  std::vector<double> work;
  std::vector<double> work2;
};

Stepper::Stepper(const Grid& grid, double epsilon)
    : grid_(grid), eps_(epsilon), impl_(std::make_unique<Impl>()) {
  if (!(epsilon > 0.0)) throw ConfigurationError("stepper: epsilon must be positive");
  switch (grid.mode()) {
    case GeometryMode::line:
      impl_->base_x = cartesian_coeffs(grid.nx(), grid.dx());
      break;
    case GeometryMode::radial:
      impl_->base_x = radial_coeffs(grid.nx(), grid.dx(), grid.dimension());
      break;
    case GeometryMode::plane:
      impl_->base_x = cartesian_coeffs(grid.nx(), grid.dx());
      impl_->base_y = cartesian_coeffs(grid.ny(), grid.dx());
      break;
  }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

void Stepper::reaction(Field& u, double h) const {
  if (h == 0.0) return;
  for (double v : u.values) {
    if (v < 0.0) throw NumericalError("reaction: negative value in field");
  }
  simd::logistic_map(u.values, std::exp(h / eps_));
}

void Stepper::diffusion(Field& u, double h) {
  if (h == 0.0) return;
  if (!(h > 0.0)) throw DomainError("diffusion: step must be positive");
  if (!(u.grid == grid_)) throw DomainError("diffusion: field grid mismatch");
  const double theta = 0.5 * h * eps_;
  auto it = impl_->cache.find(h);
  if (it == impl_->cache.end()) {
    if (impl_->cache.size() > 8) impl_->cache.clear();
    Impl::Cached c;
    c.explicit_x = scaled(impl_->base_x, theta);
    c.fx = implicit_factor(c.explicit_x);
    if (grid_.mode() == GeometryMode::plane) {
      c.k = theta / (grid_.dx() * grid_.dx());
      c.fy = implicit_factor(scaled(impl_->base_y, theta));
    }
    it = impl_->cache.emplace(h, std::move(c)).first;
  }
  const Impl::Cached& c = it->second;
  auto& w = impl_->work;
  w.resize(u.size());

  if (grid_.mode() != GeometryMode::plane) {
    simd::stencil3(w, u.values, c.explicit_x.lo, c.explicit_x.mid, c.explicit_x.hi);
    simd::thomas_batch(c.fx, w, 1);
    u.values.swap(w);
    return;
  }

  // Peaceman-Rachford: (I - kDx) u* = (I + kDy) u, (I - kDy) u' = (I + kDx) u*.
  const std::size_t nx = grid_.nx(), ny = grid_.ny();
  auto& w2 = impl_->work2;
  w2.resize(u.size());
  explicit_rows(u.values.data(), w.data(), ny, nx, c.k);
  transpose(w.data(), w2.data(), ny, nx);
  simd::thomas_batch(c.fx, w2, ny);
  explicit_rows(w2.data(), w.data(), nx, ny, c.k);
  transpose(w.data(), u.values.data(), nx, ny);
  simd::thomas_batch(c.fy, u.values, nx);
}

void Stepper::step(Field& u, double h) {
  reaction(u, 0.5 * h);
  diffusion(u, h);
  reaction(u, 0.5 * h);
}

Field reaction_substep(const Field& u, double dt, double epsilon) {
  Field out = u;
  Stepper(u.grid, epsilon).reaction(out, dt);
  return out;
}

Field diffusion_substep(const Field& u, double dt, double epsilon) {
  Field out = u;
  Stepper(u.grid, epsilon).diffusion(out, dt);
  return out;
}

Field step(const Field& u, double dt, double epsilon) {
  Field out = u;
  Stepper(u.grid, epsilon).step(out, dt);
  return out;
}

// ---------------------------------------------------------------- driver

Trajectory run(const SimConfig& cfg, const Observer& observer) {
  return run(cfg, build_initial(cfg.initial, cfg.grid, cfg.epsilon), observer);
}

Trajectory run(const SimConfig& cfg, Field u, const Observer& observer) {
  const double h_max = validate(cfg);
  if (!(u.grid == cfg.grid)) throw ConfigurationError("run: initial field grid mismatch");
  if (!u.all_finite()) throw NumericalError("run: initial field is not finite");

  Trajectory tr{cfg, h_max, 0, {}, {}};
  std::vector<double> events = cfg.checkpoint_times;
  events.push_back(cfg.t_end);
  events.erase(std::unique(events.begin(), events.end()), events.end());
  std::set<double> wanted(cfg.checkpoint_times.begin(), cfg.checkpoint_times.end());

  auto record = [&](double t) {
    tr.checkpoints.push_back({t, u});
    for (const auto& name : cfg.record) {
      tr.observables[name].emplace_back(t, observe(name, u, cfg.epsilon));
    }
  };

  Stepper st(cfg.grid, cfg.epsilon);
  double t = 0.0;
  Field last_good = u;
  double last_good_t = 0.0;
  if (observer) observer(t, u);
  if (wanted.count(0.0)) record(0.0);

  for (double te : events) {
    if (te <= t) continue;
    const double t0 = t;
    const double span = te - t0;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / h_max - 1e-9)));
    const double h = span / static_cast<double>(n);
    for (std::size_t k = 1; k <= n; ++k) {
      st.step(u, h);
      t = k == n ? te : t0 + static_cast<double>(k) * h;
      ++tr.steps;
      if (!u.all_finite()) {
        std::ostringstream os;
        os << "run: non-finite values at t = " << t << "; last finite state at t = "
           << last_good_t;
        throw BlowUpError(os.str(), last_good_t, last_good);
      }
      if (observer) observer(t, u);
    }
    if (wanted.count(te)) {
      record(te);
      last_good = u;
      last_good_t = te;
    }
  }
  if (tr.checkpoints.empty() || tr.checkpoints.back().t != cfg.t_end) {
    tr.checkpoints.push_back({cfg.t_end, u});
  }
  return tr;
}

// ---------------------------------------------------------------- observables

std::optional<double> front_position(const Field& u, double level) {
  if (u.grid.mode() == GeometryMode::plane) return front_positions(u, level, {0.0})[0];
  const Axis& x = u.grid.x_axis();
  return scan_outermost(u.values, x.origin, x.dx, level);
}

std::vector<std::optional<double>> front_positions(const Field& u, double level,
                                                   const std::vector<double>& angles) {
  if (u.grid.mode() != GeometryMode::plane) {
    throw DomainError("front_positions: rays need a plane grid");
  }
  if (!u.grid.contains({0.0, 0.0})) throw DomainError("front_positions: origin off grid");
  const double h = 0.5 * u.grid.dx();
  std::vector<std::optional<double>> out;
  for (double a : angles) out.push_back(scan_outermost(ray_samples(u, a, h), 0.0, h, level));
  return out;
}

std::optional<double> layer_thickness(const Field& u, double epsilon) {
  const auto lo = front_position(u, epsilon);
  const auto hi = front_position(u, 1.0 - 2.0 * epsilon);
  if (!lo || !hi) return std::nullopt;
  return *lo - *hi;
}

void write_checkpoint(std::ostream& os, double t, const Field& u) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# t=%.17g\n", t);
  os << buf;
  switch (u.grid.mode()) {
    case GeometryMode::line: os << "x,u\n"; break;
    case GeometryMode::radial: os << "r,u\n"; break;
    case GeometryMode::plane: os << "x,y,u\n"; break;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point p = u.grid.point(i);
    if (u.grid.mode() == GeometryMode::plane) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x, p.y, u[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, u[i]);
    }
    os << buf;
  }
}

}  // namespace fkpp
