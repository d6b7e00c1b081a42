#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkpp/harness/config.hpp"
#include "fkpp/harness/report.hpp"

namespace fkpp::harness {

Report run_wave_study(const LabConfig& cfg);
Report run_simulate(const LabConfig& cfg);
Report run_speed_study(const LabConfig& cfg);
Report run_thickness_study(const LabConfig& cfg);
Report run_generation_study(const LabConfig& cfg);
Report run_no_interface_study(const LabConfig& cfg);
Report run_barrier_check(const LabConfig& cfg);

// Dispatch by subcommand name; throws UsageError for unknown names.
Report run_study(const std::string& name, const LabConfig& cfg);
const std::vector<std::string>& study_names();

// Least-squares slope of the recorded "front" series. Throws DataError
// naming the first checkpoint without a front.
double fitted_speed(const Trajectory& tr);

// Smallest C for which every node with d <= -C eps|ln eps| has u in
// [1-2eps, 1+eps] and every node with d >= C eps|ln eps| has u in [0, eps],
// d the distance moved at speed cd.speed().
double measured_tube_constant(const Field& u, const CutoffDistance& cd, double t, double epsilon);

// y = a x through the origin; residual is the rms misfit divided by mean y.
Fit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& model, const std::string& param);

// First time at which min over `nodes` of u reaches `level`, interpolated
// linearly between steps; empty if never reached before cfg.t_end.
std::optional<double> first_passage(const SimConfig& cfg, const std::vector<std::size_t>& nodes,
                                    double level);

}  // namespace fkpp::harness
