#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

namespace fkpp {

enum class WaveNormalization { half_at_zero, zero_at_zero };

// 0 < 1 - U(z) <= C e^{-mu |z|} for z <= 0. C is the largest ratio seen on
// the table; mu is the unstable eigenvalue of U = 1.
struct LeftTail {
  double C = 0.0;
  double mu = 0.0;
};

// Continuation past the table end:
//   affine (c = 2):  U(z) = C (z + offset) e^{-lambda z}
//   otherwise:       U(z) = C e^{-lambda z}
// C and offset are adjusted so the continuation meets the last table value.
struct RightTail {
  double C = 0.0;
  double lambda = 0.0;
  double offset = 0.0;
  bool affine = false;
};

struct KppRatio {
  double gamma_minus;
  double gamma_plus;
};

// Travelling wave U'' + c U' + U(1-U) = 0 sampled on a uniform table.
struct WaveProfile {
  double c = 0.0;
  double z_min = 0.0;
  double dz = 0.0;
  std::vector<double> U;
  std::vector<double> dU;
  WaveNormalization normalization = WaveNormalization::half_at_zero;
  LeftTail tail_left;
  RightTail tail_right;
  // Populated only for c = 2.
  std::optional<KppRatio> kpp_ratio;

  std::size_t size() const { return U.size(); }
  double z(std::size_t i) const { return z_min + static_cast<double>(i) * dz; }
  double z_max() const { return z(U.size() - 1); }
  // Table index of z = 0.
  std::size_t zero_index() const;

  // Left-seam constant: for z < z_min, U = 1 - left_seam e^{mu z}.
  double left_seam = 0.0;
};

// Smallest root of lambda^2 - c lambda + 1 = 0. Requires c >= 2.
double decay_rate(double c);

// Monotone wave for c >= 2, translated so U(0) = 1/2.
WaveProfile solve_wave(double c, double dz = 1e-3, double z_span = 40.0);

// Sign-changing wave for 0 < c < 2, translated so the first zero of U sits
// at z = 0. The table ends a short overshoot window past the zero.
WaveProfile solve_sign_changing_wave(double c, double dz = 1e-3, double z_span = 40.0);

// Cubic Hermite interpolation inside the table, analytic tails outside.
// For sign-changing profiles, values right of the table are held constant.
double evaluate(const WaveProfile& p, double z);
double evaluate_derivative(const WaveProfile& p, double z);

// Min and max of U(z) / (z e^{-z}) over table nodes in [1, z_hi].
KppRatio kpp_ratio_bounds(const WaveProfile& p, double z_hi = 15.0);

// min over table nodes z >= 0 of U(z) e^{lambda z}.
double weighted_tail_min(const WaveProfile& p, double lambda);
// sup over z >= 0 of U(z) e^{lambda z}, including the tail continuation.
double weighted_tail_max(const WaveProfile& p, double lambda);

// max |U'' + c U' + U(1-U)| over the table, with U'' taken as the
// fourth-order central difference of the tabulated U'.
double ode_residual(const WaveProfile& p);

// z at which U = level, by bisection on the interpolant (monotone part).
double locate_level(const WaveProfile& p, double level);

// CSV with columns z,U,U_prime at 17 significant digits.
void write_csv(const WaveProfile& p, std::ostream& os);

}  // namespace fkpp
