#pragma once

#include <optional>

#include "fkpp/ode.hpp"

namespace fkpp {

// Exact solution of z' = z(1-z), z(0) = xi, for xi in [0,1].
double logistic_flow(double xi, double s);

// Bistable extension of u(1-u): f(u) = u(1-u) q(u) with q = 1 on
// [-1/2, inf) and q(u) = 1 - (1 - 2(u+1))^3 below, giving zeros -1, 0, 1,
// f'(-1) = -12 and C2 matching at -1/2.
double fbar(double u);
double fbar_prime(double u);
double fbar_second(double u);

struct KineticsParams {
  double epsilon = 0.02;
  // Radii of the cutoff psi on u >= 0, in units of eps|ln eps|: psi = 1 on
  // [0, inner], psi = 0 beyond outer. On u < 0, psi = 1 on [-eps/2, 0] and
  // vanishes below -eps.
  double cutoff_inner = 2.0;
  double cutoff_outer = 3.0;
  double extension_knee = -0.5;
  // The semiflow is defined for |xi| <= sup g + M + 1.
  double xi_bound = 2.0;
};

struct Sensitivity {
  double w;
  double w_xi;
  double w_xixi;
};

// The epsilon-modified reaction
//   f_eps(u) = psi(u) (u - eps|ln eps|)/|ln eps| + (1 - psi(u)) fbar(u)
// and the semiflow it generates. Construction validates f_eps <= fbar on
// [-2, 2] and throws ConfigurationError when it fails.
class Kinetics {
 public:
  explicit Kinetics(KineticsParams p);

  const KineticsParams& params() const { return p_; }
  double epsilon() const { return p_.epsilon; }
  double abs_log_eps() const { return abs_log_; }
  // eps |ln eps|, the unstable zero of f_eps.
  double threshold() const { return threshold_; }

  double psi(double u) const;
  double fbar_eps(double u) const;
  double fbar_eps_prime(double u) const;
  double fbar_eps_second(double u) const;

  // w(s, xi) with dw/ds = f_eps(w), w(0) = xi.
  double semiflow(double s, double xi) const;
  // (w, w_xi, w_xixi) from the first and second variational equations.
  Sensitivity semiflow_sensitivity(double s, double xi) const;
  // |ln eps| |ln(1 - xi/(eps|ln eps|))| for xi in (0, eps|ln eps|).
  double positivity_time(double xi) const;
  // First s in (0, s_max] where w(s, xi) = 0, measured by event location.
  std::optional<double> zero_crossing_time(double xi, double s_max) const;
  // First s at which w(s, xi) reaches `level` (either direction).
  std::optional<double> hitting_time(double xi, double level, double s_max) const;

  ode::Tolerance tolerance() const { return tol_; }

 private:
  struct Cutoff {
    double value, d1, d2;
  };
  Cutoff cutoff(double u) const;
  void check_xi(double xi) const;
  void validate() const;

  KineticsParams p_;
  double abs_log_;
  double threshold_;
  double neg_inner_;
  double neg_outer_;
  double pos_inner_;
  double pos_outer_;
  ode::Tolerance tol_{1e-13, 1e-12};
};

// Smallest alpha such that, at s = alpha |ln eps|, w(s, xi) >= 1 - eps for
// xi in [3 eps|ln eps|, xi_max] and w(s, xi) <= 1 + eps for
// xi in [eps|ln eps|, xi_max].
double generation_alpha(const Kinetics& k, double xi_max);

}  // namespace fkpp
