#pragma once

#include <functional>
#include <vector>

#include "fkpp/geometry.hpp"
#include "fkpp/kinetics.hpp"
#include "fkpp/numerics/grid.hpp"
#include "fkpp/solver.hpp"
#include "fkpp/waves.hpp"

namespace fkpp {

struct BarrierParams {
  double K = 1.0;        // drift of the generation sub-solution
  double K_hat = 2.0;    // amplitude of the global super-solution
  double k = 3.0;        // generation threshold k eps|ln eps|
  double alpha = 1.5;    // generation time t_eps = alpha eps|ln eps|
  double a = 1.5;        // generation window [0, a eps|ln eps|]
  double m1 = 1.0;       // motion sub-solution shift
  double m2 = 1.0;       // motion sub-solution growth rate
  double c1 = 2.0;       // radial barrier speed
  double rho = 15.0;     // radial barrier plateau half-width
  double C_const = 3.0;  // tube constant
  double eps_hat = 0.01; // anchor 1 - eps_hat of the shifted-plateau profile

  void validate() const;
};

double generation_time(double epsilon, const BarrierParams& bp);

// max{0, w(t/eps, g(x) - K t)}.
double generation_sub(double t, Point x, const BarrierParams& bp, const Kinetics& kin,
                      const InitialData& initial, double epsilon);
// w(t/eps, |g| + M), spatially constant.
double generation_super(double t, const BarrierParams& bp, const Kinetics& kin,
                        const InitialData& initial, double epsilon);

// max(1, M/m-, (|g| + M)/U*(0)) for the minimal-speed profile.
double k0_lower_bound(const WaveProfile& minimal, const InitialData& initial);

// K_hat U*((d(0,x) - 2t)/eps).
double global_super(double t, Point x, const BarrierParams& bp, const WaveProfile& minimal,
                    const ConvexBody& body, double epsilon);

// Argument z of V in the motion sub-solution:
// (zeta(d(t,x)) + eps|ln eps| m1 e^{m2 t}) / eps, distance moving at cd.speed().
double motion_sub_argument(double t, Point x, const BarrierParams& bp,
                           const CutoffDistance& cd, double epsilon);
// (1 - eps) V(z), V = U below zero and 0 above, U the sign-changing profile
// for speed cd.speed().
double motion_sub(double t, Point x, const BarrierParams& bp, const WaveProfile& sign_changing,
                  const CutoffDistance& cd, double epsilon);

// Floor for m2 given a geometry constant N and left-tail
// rate mu: 2N(2/(m1 mu) + 1).
double m2_floor(double N, double m1, double mu);
// max(1, 2(2T + m1 e^{m2 T}), 2/mu).
double tube_constant_floor(double T, double m1, double m2, double mu);

// Smallest m1 (to 1e-6 relative) with motion_sub(0, x) <= u(x) at every node,
// searched on [0, m1_max]. Throws DataError if even m1_max fails.
double fit_m1(const Field& u_at_generation, const BarrierParams& bp,
              const WaveProfile& sign_changing, const CutoffDistance& cd, double epsilon,
              double m1_max = 50.0);

enum class PlateauProfile {
  symmetric,  // v0(s) = U(rho) on |s| <= rho, U(|s|) beyond
  shifted,    // q(s) = U^(0) on s <= rho, U^(s - rho) beyond, U^(0) = 1 - eps_hat
};

// W(t,x) = v0((|x| - c1 t)/eps) for a monotone profile with c > c1.
class RadialSubW {
 public:
  // Validates rho >= max((N-1)/(c-c1), n/lambda_c) and
  // m/(1+rho^n) >= M_c e^{-lambda_c rho} (symmetric profile); the shifted
  // profile checks the first condition only.
  RadialSubW(const BarrierParams& bp, const WaveProfile& profile, double epsilon, int dimension,
             const AlgebraicData& data, PlateauProfile kind = PlateauProfile::symmetric);

  double operator()(double t, Point x) const;
  // |s| - rho (symmetric) or s - rho (shifted); zero on the kink circles.
  double kink_argument(double t, Point x) const;
  double plateau() const { return plateau_; }

 private:
  const WaveProfile* profile_;
  double c1_;
  double rho_;
  double eps_;
  PlateauProfile kind_;
  double shift_ = 0.0;
  double plateau_ = 0.0;
};

// eps (m/(k eps|ln eps|) - 1)^{1/n}; DomainError if k eps|ln eps| > m.
double xi_eps(double epsilon, const BarrierParams& bp, const AlgebraicData& data);

using SpaceTimeFunction = std::function<double(double t, Point x)>;

// dv/dt - eps Lap v - v(1-v)/eps by central differences (step dt in time,
// grid spacing in space). Radial mode uses N v_rr at the origin.
Field discrete_residual(const SpaceTimeFunction& v, double t, const Grid& grid, double epsilon,
                        double dt);
// True at nodes whose residual stencil (space and time) straddles a zero of
// `kink`, i.e. where the barrier is only Lipschitz.
std::vector<bool> kink_mask(const SpaceTimeFunction& kink, double t, const Grid& grid,
                            double dt);

}  // namespace fkpp
