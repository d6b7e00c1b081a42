#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fkpp/barriers.hpp"
#include "fkpp/geometry.hpp"
#include "fkpp/kinetics.hpp"
#include "fkpp/solver.hpp"

namespace fkpp::harness {

// Experiment configuration. Read from INI text with sections kinetics, wave,
// geometry, initial, solver, study; every key has a default and unknown keys
// are rejected. The full key list is in docs/config.md.
struct LabConfig {
  struct Kinetics {
    double cutoff_inner = 2.0;
    double cutoff_outer = 3.0;
  } kinetics;

  struct Wave {
    std::vector<double> speeds{2.0, 2.2, 2.5, 3.0};
    double dz = 1e-3;
    double z_span = 40.0;
  } wave;

  struct Geometry {
    std::string mode = "line";  // line | radial | plane
    int dimension = 2;          // radial mode only
    std::string shape = "interval";
    double lower = -0.5;
    double upper = 0.5;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.5;
    double semi_x = 0.5;
    double semi_y = 0.3;
    double d0 = 0.0;  // 0: 0.2 * inradius
    double extent = 4.0;
    double cells_per_eps = 8.0;
  } geometry;

  struct Initial {
    std::string kind = "compact";  // compact | algebraic
    double amplitude = 0.9;
    double width = 0.2;
    double tail_lambda = 1.0;
    double tail_M = 0.0;  // 0: no tail
    double m = 0.5;
    double n = 2.0;
    double cap = 1.0;
  } initial;

  struct Solver {
    double t_end = 1.0;
    double dt = 0.0;  // 0: largest admissible
    int checkpoints = 5;
  } solver;

  struct Study {
    std::vector<double> epsilons{0.04, 0.02, 0.01};
    double speed_window = 0.2;
    int speed_samples = 17;
    double generation_k = 3.0;
    double probe_t = 0.5;
    double probe_x = 2.0;
    double control_radius = 0.5;
    double control_amplitude = 0.9;
    double control_width = 0.2;
    double barrier_epsilon = 0.02;
    double K = 4.0;
    double K_hat = 0.0;  // 0: K0
    double alpha = 0.0;  // 0: kinetic generation constant
    double m1 = -1.0;    // < 0: fitted
    double m2 = 1.0;
    double C_const = 3.0;
    double sabotage_K_hat = 0.5;
    int generation_samples = 6;
    int motion_samples = 10;
    double radial_c = 3.0;
    double c1 = 1.0;
    double rho = 20.0;
    double radial_extent = 1.5;
    double radial_t_end = 0.25;
    double ordering_slack = 1e-3;
    double residual_tol = 5e-3;
  } study;
};

LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::filesystem::path& path);

// One "section.key=value" line per schema key in schema order, numbers at 17
// significant digits. Identical effective configurations give identical text.
std::string canonical_text(const LabConfig& cfg);
// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const LabConfig& cfg);
std::uint64_t fnv1a(const std::string& bytes);

// Builders shared by the studies.
KineticsParams kinetics_params(const LabConfig& cfg, double epsilon);
ConvexBody make_body(const LabConfig& cfg);
InitialData make_initial(const LabConfig& cfg);
Grid make_grid(const LabConfig& cfg, double epsilon);
SimConfig make_sim(const LabConfig& cfg, double epsilon);

}  // namespace fkpp::harness
