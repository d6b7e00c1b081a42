#include "fkpp/waves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "fkpp/error.hpp"
#include "fkpp/ode.hpp"

namespace fkpp {
namespace {

using State = std::array<double, 2>;

constexpr double kLaunchOffset = 1e-8;
constexpr double kTailFloor = 1e-10;
constexpr double kOvershoot = 2.0;
constexpr ode::Tolerance kWaveTol{1e-22, 1e-12};

struct WaveRhs {
  double c;
  void operator()(const State& x, State& dx, double) const {
    dx[0] = x[1];
    dx[1] = -c * x[1] - x[0] * (1.0 - x[0]);
  }
};

// Same equation for V = 1 - U. Used while U is near 1 so that 1 - U keeps
// full relative precision.
struct DeficitRhs {
  double c;
  void operator()(const State& x, State& dx, double) const {
    dx[0] = x[1];
    dx[1] = -c * x[1] + x[0] * (1.0 - x[0]);
  }
};

// Integrates from the launch point in (V, V') until V reaches 1/2, then in
// (U, U'). Positions are measured from the launch.
class Shooter {
 public:
  Shooter(double c, double mu, double dz) : u_{c}, v_{c}, dz_(dz), s_{kLaunchOffset, mu * kLaunchOffset} {}

  void advance(double z_next) {
    if (deficit_) {
      ode::integrate_to(v_, s_, z_, z_next, kWaveTol, dz_);
      if (s_[0] >= 0.5) {
        s_ = {1.0 - s_[0], -s_[1]};
        deficit_ = false;
      }
    } else {
      ode::integrate_to(u_, s_, z_, z_next, kWaveTol, dz_);
    }
    z_ = z_next;
  }
  double U() const { return deficit_ ? 1.0 - s_[0] : s_[0]; }
  double dU() const { return deficit_ ? -s_[1] : s_[1]; }

 private:
  WaveRhs u_;
  DeficitRhs v_;
  double dz_;
  State s_;
  double z_ = 0.0;
  bool deficit_ = true;
};

double unstable_rate(double c) { return 0.5 * (-c + std::sqrt(c * c + 4.0)); }

// Least-squares line y = a + b x; returns {a, b}.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double b = sxy / sxx;
  return {my - b * mx, b};
}

WaveProfile shoot(double c, double dz, double z_span, bool sign_changing) {
  if (!(dz > 0.0 && dz <= 1e-3)) throw DomainError("wave: dz must lie in (0, 1e-3]");
  if (!(z_span >= 30.0)) throw DomainError("wave: z_span must be at least 30");

  const double mu = unstable_rate(c);
  const State launch{kLaunchOffset, mu * kLaunchOffset};
  const double target = sign_changing ? 0.0 : 0.5;
  const double horizon = 50.0 * z_span + 500.0;

  // Pass 1: locate U = 1/2, then (sign-changing) the first zero, measured
  // from the launch point.
  const auto half = ode::find_event(
      DeficitRhs{c}, launch, 0.0, horizon, [](const State& v) { return v[0] - 0.5; },
      kWaveTol, dz);
  std::optional<ode::EventHit<State>> hit;
  if (half && sign_changing) {
    const State u_half{1.0 - half->state[0], -half->state[1]};
    hit = ode::find_event(
        WaveRhs{c}, u_half, half->t, horizon, [](const State& u) { return u[0]; },
        kWaveTol, dz);
  } else {
    hit = half;
  }
  if (!hit) {
    std::ostringstream os;
    os << "wave: U never reached " << target << " for c = " << c;
    throw ShootingError(os.str());
  }
  double z_star = hit->t;

  // Pass 2: re-integrate from the launch, landing on every table node. The
  // landing steps drift slightly in phase against pass 1, so the anchor is
  // Newton-corrected against the table itself and the pass repeated.
  const auto span_nodes = static_cast<long>(std::floor(z_span / dz + 1e-9));
  const long k_cap = sign_changing ? static_cast<long>(std::llround(kOvershoot / dz))
                                   : span_nodes;

  WaveProfile p;
  p.c = c;
  p.dz = dz;
  p.normalization =
      sign_changing ? WaveNormalization::zero_at_zero : WaveNormalization::half_at_zero;

  for (int pass = 0; pass < 4; ++pass) {
    // Sign-changing tables keep the whole front: the anchor sits at the zero,
    // which for c near 2 lies far behind the U = 1/2 point.
    const long k_launch = -static_cast<long>(std::floor(z_star / dz));
    const long k_min = sign_changing ? k_launch : std::max(k_launch, -span_nodes);
    p.z_min = static_cast<double>(k_min) * dz;
    p.U.clear();
    p.dU.clear();

    Shooter sh(c, mu, dz);
    for (long k = k_min; k <= k_cap; ++k) {
      sh.advance(z_star + static_cast<double>(k) * dz);
      const double u = sh.U(), du = sh.dU();
      if (!std::isfinite(u) || !std::isfinite(du)) {
        throw NumericalError("wave: non-finite state during shooting");
      }
      p.U.push_back(u);
      p.dU.push_back(du);
      if (!sign_changing && u < kTailFloor) break;
    }
    const std::size_t i0 = static_cast<std::size_t>(-k_min);
    if (i0 >= p.size()) throw ShootingError("wave: table ended before the anchor");
    const double miss = p.U[i0] - target;
    if (std::abs(miss) <= 1e-13) break;
    z_star -= miss / p.dU[i0];
  }

  if (!sign_changing) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const bool decreasing = p.dU[i] < 0.0 && (i == 0 || p.U[i] < p.U[i - 1]);
      if (!decreasing || !(p.U[i] > 0.0 && p.U[i] < 1.0)) {
        std::ostringstream os;
        os << "wave: monotonicity lost at z = " << p.z(i) << " for c = " << c;
        throw NumericalError(os.str());
      }
    }
  }

  // Left tail.
  p.tail_left.mu = mu;
  double cmax = 0.0;
  for (std::size_t i = 0; i < p.size() && p.z(i) <= 0.0; ++i) {
    cmax = std::max(cmax, (1.0 - p.U[i]) * std::exp(mu * std::abs(p.z(i))));
  }
  p.tail_left.C = cmax;
  p.left_seam = (1.0 - p.U.front()) * std::exp(-mu * p.z_min);

  if (sign_changing) return p;

  // Right tail.
  const double u_end = p.U.back();
  const double z_end = p.z_max();
  std::vector<double> xs, ys;
  if (c == 2.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.z(i) >= z_end - 5.0) {
        xs.push_back(p.z(i));
        ys.push_back(p.U[i] * std::exp(p.z(i)));
      }
    }
    const auto [b, a] = fit_line(xs, ys);
    p.tail_right.affine = true;
    p.tail_right.lambda = 1.0;
    p.tail_right.C = a;
    p.tail_right.offset = u_end * std::exp(z_end) / a - z_end;
    (void)b;
    p.kpp_ratio = kpp_ratio_bounds(p);
  } else {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.U[i] <= 10.0 * u_end) {
        xs.push_back(p.z(i));
        ys.push_back(std::log(p.U[i]));
      }
    }
    if (xs.size() < 8) throw NumericalError("wave: too few tail samples to fit");
    const auto fit = fit_line(xs, ys);
    p.tail_right.lambda = -fit.second;
    p.tail_right.C = u_end * std::exp(p.tail_right.lambda * z_end);
  }
  return p;
}

double hermite(double u0, double u1, double d0, double d1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * h * d0 +
         (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * h * d1;
}

double hermite_slope(double u0, double u1, double d0, double d1, double h, double t) {
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * u0 + (-6 * t2 + 6 * t) * u1) / h +
         (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

}  // namespace

std::size_t WaveProfile::zero_index() const {
  return static_cast<std::size_t>(std::llround(-z_min / dz));
}

double decay_rate(double c) {
  if (!(c >= 2.0)) throw DomainError("decay_rate: c must be >= 2");
  return 0.5 * (c - std::sqrt(c * c - 4.0));
}

WaveProfile solve_wave(double c, double dz, double z_span) {
  if (!(c >= 2.0)) throw DomainError("solve_wave: c must be >= 2");
  return shoot(c, dz, z_span, false);
}

WaveProfile solve_sign_changing_wave(double c, double dz, double z_span) {
  if (!(c > 0.0 && c < 2.0)) {
    throw DomainError("solve_sign_changing_wave: c must lie in (0, 2)");
  }
  return shoot(c, dz, z_span, true);
}

double evaluate(const WaveProfile& p, double z) {
  if (z < p.z_min) return 1.0 - p.left_seam * std::exp(p.tail_left.mu * z);
  if (z > p.z_max()) {
    const RightTail& t = p.tail_right;
    if (p.normalization == WaveNormalization::zero_at_zero) return p.U.back();
    if (t.affine) return t.C * (z + t.offset) * std::exp(-t.lambda * z);
    return t.C * std::exp(-t.lambda * z);
  }
  const double s = (z - p.z_min) / p.dz;
  auto i = static_cast<std::size_t>(s);
  if (i >= p.size() - 1) return p.U.back();
  const double t = s - static_cast<double>(i);
  if (t == 0.0) return p.U[i];
  return hermite(p.U[i], p.U[i + 1], p.dU[i], p.dU[i + 1], p.dz, t);
}

double evaluate_derivative(const WaveProfile& p, double z) {
  if (z < p.z_min) {
    return -p.tail_left.mu * p.left_seam * std::exp(p.tail_left.mu * z);
  }
  if (z > p.z_max()) {
    const RightTail& t = p.tail_right;
    if (p.normalization == WaveNormalization::zero_at_zero) return 0.0;
    if (t.affine) {
      return t.C * std::exp(-t.lambda * z) * (1.0 - t.lambda * (z + t.offset));
    }
    return -t.lambda * t.C * std::exp(-t.lambda * z);
  }
  const double s = (z - p.z_min) / p.dz;
  auto i = static_cast<std::size_t>(s);
  if (i >= p.size() - 1) return p.dU.back();
  const double t = s - static_cast<double>(i);
  if (t == 0.0) return p.dU[i];
  return hermite_slope(p.U[i], p.U[i + 1], p.dU[i], p.dU[i + 1], p.dz, t);
}

KppRatio kpp_ratio_bounds(const WaveProfile& p, double z_hi) {
  if (p.c != 2.0) throw DomainError("kpp_ratio_bounds: profile speed must be 2");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double z = p.z(i);
    if (z < 1.0 - 1e-12 || z > z_hi + 1e-12) continue;
    const double r = p.U[i] / (z * std::exp(-z));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(hi > 0.0)) throw DomainError("kpp_ratio_bounds: table does not reach z = 1");
  return {lo, hi};
}

double weighted_tail_min(const WaveProfile& p, double lambda) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = p.zero_index(); i < p.size(); ++i) {
    m = std::min(m, p.U[i] * std::exp(lambda * p.z(i)));
  }
  return m;
}

double weighted_tail_max(const WaveProfile& p, double lambda) {
  double m = 0.0;
  for (std::size_t i = p.zero_index(); i < p.size(); ++i) {
    m = std::max(m, p.U[i] * std::exp(lambda * p.z(i)));
  }
  const RightTail& t = p.tail_right;
  if (!t.affine && t.lambda >= lambda) m = std::max(m, t.C);
  return m;
}

double ode_residual(const WaveProfile& p) {
  double worst = 0.0;
  const double h = p.dz;
  for (std::size_t i = 2; i + 2 < p.size(); ++i) {
    const double d2 =
        (-p.dU[i + 2] + 8.0 * p.dU[i + 1] - 8.0 * p.dU[i - 1] + p.dU[i - 2]) / (12.0 * h);
    const double r = d2 + p.c * p.dU[i] + p.U[i] * (1.0 - p.U[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double locate_level(const WaveProfile& p, double level) {
  // The monotone part ends at the first zero (sign-changing) or table end.
  double lo = p.z_min;
  double hi = p.normalization == WaveNormalization::zero_at_zero ? 0.0 : p.z_max();
  if (!(evaluate(p, lo) >= level && evaluate(p, hi) <= level)) {
    throw DomainError("locate_level: level not bracketed by the table");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(p, mid) >= level) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

void write_csv(const WaveProfile& p, std::ostream& os) {
  os << "z,U,U_prime\n";
  char buf[96];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.z(i), p.U[i], p.dU[i]);
    os << buf;
  }
}

}  // namespace fkpp
