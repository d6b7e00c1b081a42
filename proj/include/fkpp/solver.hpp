#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fkpp/error.hpp"
#include "fkpp/geometry.hpp"
#include "fkpp/numerics/grid.hpp"
#include "fkpp/numerics/tridiagonal.hpp"

namespace fkpp {

// h_eps(x) = M e^{-lambda |x| / eps}.
struct ExponentialTail {
  double lambda = 1.0;
  double M = 0.0;
};

// g(x) = A (1 - (1 - s)^3), s = clamp(-d(x)/w, 0, 1), plus an optional tail.
struct CompactData {
  ConvexBody body;
  double amplitude;
  double width;
  std::optional<ExponentialTail> tail;
};

// m / (1 + |x|^n / eps^n), bounded above by cap.
struct AlgebraicData {
  double m;
  double n;
  double cap;
};

class InitialData {
 public:
  static InitialData compact(ConvexBody body, double amplitude, double width,
                             std::optional<ExponentialTail> tail = std::nullopt);
  static InitialData algebraic(double m, double n, double cap);

  bool is_compact() const { return std::holds_alternative<CompactData>(v_); }
  const CompactData& compact_data() const;
  const AlgebraicData& algebraic_data() const;

  // Compactly supported part g; zero for algebraic data.
  double g(Point p) const;
  double value(Point p, double epsilon) const;
  // sup g (A for compact data, 0 otherwise) and the tail bound M.
  double sup_g() const;
  double tail_bound() const;
  double sup() const;
  // Normal slope of g at the boundary, 3A/w.
  double slope_floor() const;

 private:
  explicit InitialData(std::variant<CompactData, AlgebraicData> v) : v_(std::move(v)) {}
  std::variant<CompactData, AlgebraicData> v_;
};

struct SimConfig {
  double epsilon = 0.02;
  Grid grid = Grid::line(-1.0, 1.0, 0.0025);
  InitialData initial = InitialData::algebraic(0.5, 2.0, 1.0);
  double t_end = 1.0;
  // 0 selects the largest admissible step.
  double dt = 0.0;
  std::vector<double> checkpoint_times;
  // Observables recorded at each checkpoint: front, thickness, sup, inf.
  std::vector<std::string> record;
};

// Largest dt for which the Crank-Nicolson substep is order preserving.
double monotone_dt_limit(const Grid& grid, double epsilon);
// min(dx/2, monotone_dt_limit).
double default_dt(const Grid& grid, double epsilon);
// Throws ConfigurationError naming the violated rule. Returns the step in use.
double validate(const SimConfig& cfg);

Field build_initial(const InitialData& initial, const Grid& grid, double epsilon);

// Crank-Nicolson / Peaceman-Rachford diffusion and exact logistic reaction
// with factorizations cached per step size.
class Stepper {
 public:
  Stepper(const Grid& grid, double epsilon);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  void reaction(Field& u, double h) const;
  void diffusion(Field& u, double h);
  // Strang: reaction(h/2), diffusion(h), reaction(h/2).
  void step(Field& u, double h);

  double epsilon() const { return eps_; }
  const Grid& grid() const { return grid_; }

 private:
  struct Impl;
  Grid grid_;
  double eps_;
  std::unique_ptr<Impl> impl_;
};

Field reaction_substep(const Field& u, double dt, double epsilon);
Field diffusion_substep(const Field& u, double dt, double epsilon);
Field step(const Field& u, double dt, double epsilon);

// Raised when the field stops being finite; carries the last finite state.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double t, Field last_good)
      : NumericalError(what), t_(t), last_(std::move(last_good)) {}
  double time() const { return t_; }
  const Field& last_good() const { return last_; }

 private:
  double t_;
  Field last_;
};

struct Checkpoint {
  double t;
  Field field;
};

struct Trajectory {
  SimConfig config;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<Checkpoint> checkpoints;
  // name -> (t, value); missing observables are empty optionals.
  std::map<std::string, std::vector<std::pair<double, std::optional<double>>>> observables;
  Field final_field() const { return checkpoints.back().field; }
};

// Called at t = 0 and after every step.
using Observer = std::function<void(double t, const Field& u)>;

Trajectory run(const SimConfig& cfg, const Observer& observer = {});
Trajectory run(const SimConfig& cfg, Field initial, const Observer& observer = {});

// Outermost crossing of `level` along the scan axis (line, radial): the
// scan starts at the upper end and walks inward to the first node pair
// bracketing the level, then interpolates linearly.
std::optional<double> front_position(const Field& u, double level);
// Plane mode: outermost crossing along rays from the origin at the given
// angles (radians).
std::vector<std::optional<double>> front_positions(const Field& u, double level,
                                                   const std::vector<double>& angles);
// x(u = eps) - x(u = 1 - 2 eps) along the scan axis.
std::optional<double> layer_thickness(const Field& u, double epsilon);

// "# t=<t>", a header, then one row per node at 17 significant digits.
void write_checkpoint(std::ostream& os, double t, const Field& u);

}  // namespace fkpp
