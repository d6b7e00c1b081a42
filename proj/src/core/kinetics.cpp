#include "fkpp/kinetics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "fkpp/error.hpp"

namespace fkpp {
namespace {

double q_ext(double u) {
  if (u >= -0.5) return 1.0;
  const double a = 1.0 - 2.0 * (u + 1.0);
  return 1.0 - a * a * a;
}
double q_ext_d1(double u) {
  if (u >= -0.5) return 0.0;
  const double a = 1.0 - 2.0 * (u + 1.0);
  return 6.0 * a * a;
}
double q_ext_d2(double u) {
  if (u >= -0.5) return 0.0;
  return -24.0 * (1.0 - 2.0 * (u + 1.0));
}

// Quintic smoothstep: 0 -> 1 on [0,1] with vanishing first and second
// derivatives at both ends.
struct Step {
  double s, d1, d2;
};
Step smoothstep(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  return {t * t * t * (10.0 + t * (-15.0 + 6.0 * t)),
          30.0 * t * t * (1.0 - t) * (1.0 - t),
          60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)};
}

using Scalar = std::array<double, 1>;

}  // namespace

double logistic_flow(double xi, double s) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw DomainError("logistic_flow: xi must lie in [0,1]");
  }
  if (s < 0.0) throw DomainError("logistic_flow: s must be nonnegative");
  if (xi == 0.0 || xi == 1.0) return xi;
  // xi e^s / (1 + xi (e^s - 1)), divided through by e^s to avoid overflow.
  const double em = std::exp(-s);
  return xi / (xi + (1.0 - xi) * em);
}

double fbar(double u) { return u * (1.0 - u) * q_ext(u); }

double fbar_prime(double u) {
  return (1.0 - 2.0 * u) * q_ext(u) + u * (1.0 - u) * q_ext_d1(u);
}

double fbar_second(double u) {
  return -2.0 * q_ext(u) + 2.0 * (1.0 - 2.0 * u) * q_ext_d1(u) +
         u * (1.0 - u) * q_ext_d2(u);
}

Kinetics::Kinetics(KineticsParams p) : p_(p) {
  const double e = p_.epsilon;
  if (!(e > 0.0 && e < std::exp(-1.0))) {
    throw ConfigurationError("kinetics: epsilon must lie in (0, 1/e)");
  }
  if (!(p_.cutoff_inner > 1.0 && p_.cutoff_inner < p_.cutoff_outer)) {
    throw ConfigurationError("kinetics: need 1 < cutoff_inner < cutoff_outer");
  }
  if (p_.extension_knee != -0.5) {
    throw ConfigurationError("kinetics: the bistable extension is fixed at knee -1/2");
  }
  if (!(p_.xi_bound > 1.0)) {
    throw ConfigurationError("kinetics: xi_bound must exceed 1");
  }
  abs_log_ = std::abs(std::log(e));
  threshold_ = e * abs_log_;
  // For u < 0 the linear branch stays below fbar only on [-eps, 0], so the
  // negative side of the cutoff scales with eps.
  neg_inner_ = 0.5 * e;
  neg_outer_ = e;
  pos_inner_ = p_.cutoff_inner * threshold_;
  pos_outer_ = p_.cutoff_outer * threshold_;
  validate();
}

Kinetics::Cutoff Kinetics::cutoff(double u) const {
  if (u >= 0.0) {
    const double w = pos_outer_ - pos_inner_;
    const Step st = smoothstep((u - pos_inner_) / w);
    return {1.0 - st.s, -st.d1 / w, -st.d2 / (w * w)};
  }
  const double w = neg_outer_ - neg_inner_;
  const Step st = smoothstep((-u - neg_inner_) / w);
  return {1.0 - st.s, st.d1 / w, -st.d2 / (w * w)};
}

double Kinetics::psi(double u) const { return cutoff(u).value; }

double Kinetics::fbar_eps(double u) const {
  const double ps = psi(u);
  if (ps == 0.0) return fbar(u);
  const double lin = (u - threshold_) / abs_log_;
  if (ps == 1.0) return lin;
  return ps * lin + (1.0 - ps) * fbar(u);
}

double Kinetics::fbar_eps_prime(double u) const {
  const Cutoff c = cutoff(u);
  const double lin = (u - threshold_) / abs_log_;
  const double f1 = fbar_prime(u);
  return f1 + c.d1 * (lin - fbar(u)) + c.value * (1.0 / abs_log_ - f1);
}

double Kinetics::fbar_eps_second(double u) const {
  const Cutoff c = cutoff(u);
  const double lin = (u - threshold_) / abs_log_;
  const double f1 = fbar_prime(u);
  const double f2 = fbar_second(u);
  return f2 + c.d2 * (lin - fbar(u)) + 2.0 * c.d1 * (1.0 / abs_log_ - f1) -
         c.value * f2;
}

void Kinetics::validate() const {
  constexpr int samples = 10'000;
  for (int i = 0; i < samples; ++i) {
    const double u = -2.0 + 4.0 * i / (samples - 1);
    if (fbar_eps(u) > fbar(u)) {
      std::ostringstream os;
      os << "kinetics: f_eps > fbar at u = " << u << " (epsilon too large)";
      throw ConfigurationError(os.str());
    }
  }
}

void Kinetics::check_xi(double xi) const {
  if (!(std::abs(xi) <= p_.xi_bound)) {
    std::ostringstream os;
    os << "semiflow: xi = " << xi << " outside [-" << p_.xi_bound << ", "
       << p_.xi_bound << "]";
    throw DomainError(os.str());
  }
}

double Kinetics::semiflow(double s, double xi) const {
  check_xi(xi);
  if (s < 0.0) throw DomainError("semiflow: s must be nonnegative");
  Scalar w{xi};
  auto rhs = [this](const Scalar& x, Scalar& dx, double) { dx[0] = fbar_eps(x[0]); };
  ode::integrate_to(rhs, w, 0.0, s, tol_);
  return w[0];
}

Sensitivity Kinetics::semiflow_sensitivity(double s, double xi) const {
  check_xi(xi);
  if (s < 0.0) throw DomainError("semiflow: s must be nonnegative");
  std::array<double, 3> y{xi, 1.0, 0.0};
  auto rhs = [this](const std::array<double, 3>& x, std::array<double, 3>& dx, double) {
    const double f1 = fbar_eps_prime(x[0]);
    dx[0] = fbar_eps(x[0]);
    dx[1] = f1 * x[1];
    dx[2] = fbar_eps_second(x[0]) * x[1] * x[1] + f1 * x[2];
  };
  ode::integrate_to(rhs, y, 0.0, s, tol_);
  return {y[0], y[1], y[2]};
}

double Kinetics::positivity_time(double xi) const {
  if (!(xi > 0.0 && xi < threshold_)) {
    throw DomainError("positivity_time: xi must lie in (0, eps|ln eps|)");
  }
  return abs_log_ * std::abs(std::log1p(-xi / threshold_));
}

std::optional<double> Kinetics::hitting_time(double xi, double level,
                                             double s_max) const {
  check_xi(xi);
  auto rhs = [this](const Scalar& x, Scalar& dx, double) { dx[0] = fbar_eps(x[0]); };
  const auto hit = ode::find_event(
      rhs, Scalar{xi}, 0.0, s_max,
      [level](const Scalar& x) { return x[0] - level; }, tol_);
  if (!hit) return std::nullopt;
  return hit->t;
}

std::optional<double> Kinetics::zero_crossing_time(double xi, double s_max) const {
  return hitting_time(xi, 0.0, s_max);
}

double generation_alpha(const Kinetics& k, double xi_max) {
  const double eps = k.epsilon();
  const double horizon = 50.0 * k.abs_log_eps();
  const auto t_lo = k.hitting_time(3.0 * k.threshold(), 1.0 - eps, horizon);
  if (!t_lo) throw NumericalError("generation_alpha: 1 - eps never reached");
  double s = *t_lo;
  if (xi_max > 1.0 + eps) {
    const auto t_hi = k.hitting_time(xi_max, 1.0 + eps, horizon);
    if (!t_hi) throw NumericalError("generation_alpha: 1 + eps never reached");
    s = std::max(s, *t_hi);
  }
  return s / k.abs_log_eps();
}

}  // namespace fkpp
