#include "fkpp/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

double abs_log(double eps) { return std::abs(std::log(eps)); }

void check_eps(const Kinetics& kin, double eps) {
  if (kin.epsilon() != eps) {
    throw ConfigurationError("barriers: kinetics built for a different epsilon");
  }
}

}  // namespace

void BarrierParams::validate() const {
  auto need = [](bool ok, const char* msg) {
    if (!ok) throw ConfigurationError(std::string("barrier params: ") + msg);
  };
  need(K > 0.0, "K must be positive");
  need(K_hat > 1.0, "K_hat must exceed 1");
  need(k > 0.0 && alpha > 0.0 && a > 0.0, "k, alpha, a must be positive");
  need(m1 >= 0.0 && m2 > 0.0, "need m1 >= 0 and m2 > 0");
  need(c1 > 0.0 && rho > 0.0, "c1 and rho must be positive");
  need(C_const > 0.0, "C_const must be positive");
  need(eps_hat > 0.0 && eps_hat < 1.0, "eps_hat must lie in (0,1)");
}

double generation_time(double epsilon, const BarrierParams& bp) {
  return bp.alpha * epsilon * abs_log(epsilon);
}

double generation_sub(double t, Point x, const BarrierParams& bp, const Kinetics& kin,
                      const InitialData& initial, double epsilon) {
  check_eps(kin, epsilon);
  if (t < 0.0) throw DomainError("generation_sub: t must be nonnegative");
  const double xi = initial.g(x) - bp.K * t;
  if (xi <= 0.0) return 0.0;  // w(s, xi) <= 0 for xi <= 0
  return std::max(0.0, kin.semiflow(t / epsilon, xi));
}

double generation_super(double t, const BarrierParams&, const Kinetics& kin,
                        const InitialData& initial, double epsilon) {
  check_eps(kin, epsilon);
  if (t < 0.0) throw DomainError("generation_super: t must be nonnegative");
  return kin.semiflow(t / epsilon, initial.sup_g() + initial.tail_bound());
}

double k0_lower_bound(const WaveProfile& minimal, const InitialData& initial) {
  if (minimal.c != 2.0 || minimal.normalization != WaveNormalization::half_at_zero ||
      minimal.size() == 0) {
    throw DependencyError("k0_lower_bound: needs the c = 2 profile with U(0) = 1/2");
  }
  const double g = initial.sup_g();
  const double M = initial.is_compact() ? initial.tail_bound() : 0.0;
  double k0 = std::max(1.0, (g + M) / evaluate(minimal, 0.0));
  if (M > 0.0) {
    const double m_minus = weighted_tail_min(minimal, 1.0);
    if (!(m_minus > 0.0)) throw DependencyError("k0_lower_bound: tail constant m- missing");
    k0 = std::max(k0, M / m_minus);
  }
  return k0;
}

double global_super(double t, Point x, const BarrierParams& bp, const WaveProfile& minimal,
                    const ConvexBody& body, double epsilon) {
  const double z = (body.signed_distance(x) - 2.0 * t) / epsilon;
  return bp.K_hat * evaluate(minimal, z);
}

double motion_sub_argument(double t, Point x, const BarrierParams& bp,
                           const CutoffDistance& cd, double epsilon) {
  const double shift = epsilon * abs_log(epsilon) * bp.m1 * std::exp(bp.m2 * t);
  return (cd.cutoff(t, x) + shift) / epsilon;
}

double motion_sub(double t, Point x, const BarrierParams& bp, const WaveProfile& sign_changing,
                  const CutoffDistance& cd, double epsilon) {
  if (sign_changing.normalization != WaveNormalization::zero_at_zero ||
      sign_changing.c != cd.speed()) {
    throw ConfigurationError("motion_sub: profile must be the sign-changing wave for the "
                             "geometry's speed");
  }
  const double z = motion_sub_argument(t, x, bp, cd, epsilon);
  if (z >= 0.0) return 0.0;
  return (1.0 - epsilon) * evaluate(sign_changing, z);
}

double m2_floor(double N, double m1, double mu) {
  if (!(m1 > 0.0 && mu > 0.0)) throw DomainError("m2_floor: need m1 > 0 and mu > 0");
  return 2.0 * N * (2.0 / (m1 * mu) + 1.0);
}

double tube_constant_floor(double T, double m1, double m2, double mu) {
  if (!(mu > 0.0)) throw DomainError("tube_constant_floor: mu must be positive");
  return std::max({1.0, 2.0 * (2.0 * T + m1 * std::exp(m2 * T)), 2.0 / mu});
}

double fit_m1(const Field& u, const BarrierParams& bp, const WaveProfile& sign_changing,
              const CutoffDistance& cd, double epsilon, double m1_max) {
  auto ordered = [&](double m1) {
    BarrierParams p = bp;
    p.m1 = m1;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (motion_sub(0.0, u.grid.point(i), p, sign_changing, cd, epsilon) > u[i]) return false;
    }
    return true;
  };
  if (ordered(0.0)) return 0.0;
  if (!ordered(m1_max)) {
    std::ostringstream os;
    os << "fit_m1: ordering fails even at m1 = " << m1_max;
    throw DataError(os.str());
  }
  double lo = 0.0, hi = m1_max;
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (ordered(mid) ? hi : lo) = mid;
  }
  return hi;
}

RadialSubW::RadialSubW(const BarrierParams& bp, const WaveProfile& profile, double epsilon,
                       int dimension, const AlgebraicData& data, PlateauProfile kind)
    : profile_(&profile), c1_(bp.c1), rho_(bp.rho), eps_(epsilon), kind_(kind) {
  const double c = profile.c;
  if (profile.normalization != WaveNormalization::half_at_zero || !(c > 2.0)) {
    throw ConfigurationError("radial barrier: needs a monotone profile with c > 2");
  }
  if (!(c > c1_)) throw ConfigurationError("radial barrier: need c > c1");
  const double lam = decay_rate(c);
  const double rho_geom = (dimension - 1) / (c - c1_);
  if (rho_ < rho_geom) {
    std::ostringstream os;
    os << "radial barrier: rho = " << rho_ << " violates rho >= (N-1)/(c-c1) = " << rho_geom;
    throw ConfigurationError(os.str());
  }
  if (kind == PlateauProfile::symmetric) {
    const double rho_alg = data.n / lam;
    if (rho_ < rho_alg) {
      std::ostringstream os;
      os << "radial barrier: rho = " << rho_ << " violates rho >= n/lambda_c = " << rho_alg;
      throw ConfigurationError(os.str());
    }
    const double Mc = weighted_tail_max(profile, lam);
    const double lhs = data.m / (1.0 + std::pow(rho_, data.n));
    const double rhs = Mc * std::exp(-lam * rho_);
    if (lhs < rhs) {
      std::ostringstream os;
      os << "radial barrier: rho = " << rho_ << " violates m/(1+rho^n) >= M_c e^{-lambda_c rho} ("
         << lhs << " < " << rhs << ")";
      throw ConfigurationError(os.str());
    }
    plateau_ = evaluate(profile, rho_);
  } else {
    shift_ = locate_level(profile, 1.0 - bp.eps_hat);
    plateau_ = evaluate(profile, shift_);
  }
}

double RadialSubW::operator()(double t, Point x) const {
  const double s = (std::hypot(x.x, x.y) - c1_ * t) / eps_;
  if (kind_ == PlateauProfile::symmetric) {
    return std::abs(s) <= rho_ ? plateau_ : evaluate(*profile_, std::abs(s));
  }
  return s <= rho_ ? plateau_ : evaluate(*profile_, s - rho_ + shift_);
}

double RadialSubW::kink_argument(double t, Point x) const {
  const double s = (std::hypot(x.x, x.y) - c1_ * t) / eps_;
  return kind_ == PlateauProfile::symmetric ? std::abs(s) - rho_ : s - rho_;
}

double xi_eps(double epsilon, const BarrierParams& bp, const AlgebraicData& data) {
  const double level = bp.k * epsilon * abs_log(epsilon);
  if (level > data.m) {
    throw DomainError("xi_eps: generation threshold k eps|ln eps| exceeds m");
  }
  const double brace = data.m / level - 1.0;
  return epsilon * std::pow(std::max(brace, 0.0), 1.0 / data.n);
}

Field discrete_residual(const SpaceTimeFunction& v, double t, const Grid& grid, double epsilon,
                        double dt) {
  if (!(dt > 0.0)) throw DomainError("discrete_residual: dt must be positive");
  Field out(grid);
  const double h = grid.dx();
  const double h2 = h * h;
  const int N = grid.dimension();
  // Central in time unless that would reach before t = 0.
  const bool central = t - dt >= 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    const double v0 = v(t, p);
    const double vt = central ? (v(t + dt, p) - v(t - dt, p)) / (2.0 * dt)
                              : (v(t + dt, p) - v0) / dt;
    double lap = 0.0;
    const double e = v(t, {p.x + h, p.y}), w = v(t, {p.x - h, p.y});
    switch (grid.mode()) {
      case GeometryMode::line:
        lap = (e - 2.0 * v0 + w) / h2;
        break;
      case GeometryMode::radial:
        if (p.x == 0.0) {
          lap = N * (e - 2.0 * v0 + w) / h2;
        } else {
          lap = (e - 2.0 * v0 + w) / h2 + (N - 1) / p.x * (e - w) / (2.0 * h);
        }
        break;
      case GeometryMode::plane: {
        const double n = v(t, {p.x, p.y + h}), s = v(t, {p.x, p.y - h});
        lap = (e + w + n + s - 4.0 * v0) / h2;
        break;
      }
    }
    out[i] = vt - epsilon * lap - v0 * (1.0 - v0) / epsilon;
  }
  return out;
}

std::vector<bool> kink_mask(const SpaceTimeFunction& kink, double t, const Grid& grid,
                            double dt) {
  std::vector<bool> mask(grid.size(), false);
  const double h = grid.dx();
  const double t_lo = std::max(0.0, t - dt);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    double lo = kink(t, p), hi = lo;
    auto take = [&](double tt, Point q) {
      const double k = kink(tt, q);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    };
    take(t_lo, p);
    take(t + dt, p);
    take(t, {p.x + h, p.y});
    take(t, {p.x - h, p.y});
    if (grid.mode() == GeometryMode::plane) {
      take(t, {p.x, p.y + h});
      take(t, {p.x, p.y - h});
    }
    mask[i] = lo <= 0.0 && hi >= 0.0;
  }
  return mask;
}

}  // namespace fkpp
