#include "fkpp/harness/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "fkpp/barriers.hpp"
#include "fkpp/error.hpp"
#include "fkpp/waves.hpp"

namespace fkpp::harness {
namespace {

using Clock = std::chrono::steady_clock;
using Row = std::vector<std::optional<double>>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double abs_log(double eps) { return std::abs(std::log(eps)); }
double eps_L(double eps) { return eps * abs_log(eps); }

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::string eps_key(double eps) { return "eps=" + fmt(eps); }

Report new_report(const std::string& study, const LabConfig& cfg) {
  Report r;
  r.study = study;
  r.config_hash = config_hash(cfg);
  return r;
}

void add_check(Report& r, std::string name, bool pass, std::string detail) {
  r.checks.push_back({std::move(name), pass, std::move(detail)});
}

// Epsilon ladder sorted by decreasing value.
std::vector<double> ladder(const LabConfig& cfg) {
  std::vector<double> e = cfg.study.epsilons;
  if (e.size() < 2) throw UsageError("study needs at least 2 epsilon values");
  std::sort(e.begin(), e.end(), std::greater<>());
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
    throw UsageError("study: epsilon values must be distinct");
  }
  for (double v : e) {
    if (!(v > 0.0 && v < 1.0 / std::exp(1.0))) {
      throw ConfigurationError("study: epsilon " + fmt(v) + " outside (0, 1/e)");
    }
  }
  return e;
}

void require_compact(const LabConfig& cfg, const std::string& study) {
  if (cfg.initial.kind != "compact") {
    throw ConfigurationError(study + " study needs compact initial data");
  }
}

// Independent per-epsilon jobs run concurrently; results come back in ladder
// order so the report does not depend on scheduling.
template <class T>
std::vector<T> per_epsilon(const std::vector<double>& eps, const std::function<T(double)>& job) {
  std::vector<std::future<T>> fut;
  fut.reserve(eps.size());
  for (double e : eps) fut.push_back(std::async(std::launch::async, job, e));
  std::vector<T> out;
  out.reserve(eps.size());
  for (auto& f : fut) out.push_back(f.get());
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  if (n < 2) throw ConfigurationError("need at least 2 samples");
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  v.back() = b;
  return v;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

// Profile of u along the scan axis (y = 0 row in plane mode).
Series axis_series(const Field& u, const std::string& label) {
  Series s{label, {}, {}};
  const Grid& g = u.grid;
  std::size_t j = 0;
  if (g.mode() == GeometryMode::plane) {
    const Axis& y = g.y_axis();
    j = static_cast<std::size_t>(std::clamp(std::lround(-y.origin / y.dx), 0L,
                                            static_cast<long>(y.count) - 1));
  }
  const std::size_t stride = std::max<std::size_t>(1, g.nx() / 800);
  for (std::size_t i = 0; i < g.nx(); i += stride) {
    s.x.push_back(g.x_axis().coord(i));
    s.y.push_back(u[g.index(i, j)]);
  }
  return s;
}

}  // namespace

// ------------------------------------------------------------------ helpers

double fitted_speed(const Trajectory& tr) {
  const auto it = tr.observables.find("front");
  if (it == tr.observables.end() || it->second.size() < 2) {
    throw DataError("speed: front observable not recorded at 2 or more checkpoints");
  }
  std::vector<double> t, x;
  for (const auto& [tt, v] : it->second) {
    if (!v) throw DataError("speed: no front at checkpoint t = " + fmt(tt));
    t.push_back(tt);
    x.push_back(*v);
  }
  const double n = static_cast<double>(t.size());
  const double tm = std::accumulate(t.begin(), t.end(), 0.0) / n;
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - tm) * (x[i] - xm);
    sxx += (t[i] - tm) * (t[i] - tm);
  }
  return sxy / sxx;
}

double measured_tube_constant(const Field& u, const CutoffDistance& cd, double t, double epsilon) {
  const double L = eps_L(epsilon);
  double c = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = cd.evolved(t, u.grid.point(i));
    const double v = u[i];
    const bool inside_ok = v >= 1.0 - 2.0 * epsilon && v <= 1.0 + epsilon;
    const bool outside_ok = v >= 0.0 && v <= epsilon;
    if ((d < 0.0 && !inside_ok) || (d > 0.0 && !outside_ok)) c = std::max(c, std::abs(d) / L);
  }
  return c;
}

Fit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& model, const std::string& param) {
  double sxy = 0.0, sxx = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    ym += y[i];
  }
  ym /= static_cast<double>(y.size());
  const double a = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += (y[i] - a * x[i]) * (y[i] - a * x[i]);
  const double rms = std::sqrt(ss / static_cast<double>(x.size()));
  return {model, {{param, a}}, ym != 0.0 ? rms / std::abs(ym) : rms};
}

std::optional<double> first_passage(const SimConfig& cfg, const std::vector<std::size_t>& nodes,
                                    double level) {
  std::optional<double> hit;
  double t_prev = 0.0, m_prev = 0.0;
  auto observer = [&](double t, const Field& u) {
    if (hit) return;
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i : nodes) m = std::min(m, u[i]);
    if (m >= level) {
      if (t == 0.0 || m == m_prev) {
        hit = t;
      } else {
        hit = t_prev + (level - m_prev) / (m - m_prev) * (t - t_prev);
      }
    }
    t_prev = t;
    m_prev = m;
  };
  SimConfig c = cfg;
  c.checkpoint_times.clear();
  c.record.clear();
  run(c, observer);
  return hit;
}

// --------------------------------------------------------------------- wave

Report run_wave_study(const LabConfig& cfg) {
  Report r = new_report("wave", cfg);
  r.columns = {"c",           "nodes",      "z_min",       "z_max",       "ode_residual",
               "lambda_fit",  "lambda_exact", "rate_rel_error", "gamma_minus", "gamma_plus",
               "gamma_ratio"};
  if (cfg.wave.speeds.empty()) throw UsageError("wave study: no speeds configured");
  Plot plot{"wave_profiles.svg", {}, {"Travelling waves", "z", "U", false, false}};
  const auto t_all = Clock::now();
  for (double c : cfg.wave.speeds) {
    const auto t0 = Clock::now();
    const WaveProfile p = c >= 2.0 ? solve_wave(c, cfg.wave.dz, cfg.wave.z_span)
                                   : solve_sign_changing_wave(c, cfg.wave.dz, cfg.wave.z_span);
    const double res = ode_residual(p);
    Row row{c, static_cast<double>(p.size()), p.z_min, p.z_max(), res};
    const std::string tag = "c=" + fmt(c);
    add_check(r, "ode_residual " + tag, res <= 1e-8, "max residual " + fmt(res));
    if (c > 2.0) {
      const double fit = p.tail_right.lambda;
      const double exact = decay_rate(c);
      const double rel = std::abs(fit - exact) / exact;
      row.insert(row.end(), {fit, exact, rel, std::nullopt, std::nullopt, std::nullopt});
      add_check(r, "tail_rate " + tag, rel <= 0.01,
                "fitted " + fmt(fit) + " vs " + fmt(exact) + " (rel " + fmt(rel) + ")");
    } else if (c == 2.0) {
      const KppRatio k = p.kpp_ratio ? *p.kpp_ratio : kpp_ratio_bounds(p);
      const double ratio = k.gamma_plus / k.gamma_minus;
      row.insert(row.end(), {std::nullopt, 1.0, std::nullopt, k.gamma_minus, k.gamma_plus, ratio});
      add_check(r, "kpp_tail_law " + tag,
                k.gamma_minus > 0.0 && k.gamma_minus <= k.gamma_plus && ratio <= 10.0,
                "gamma- " + fmt(k.gamma_minus) + ", gamma+ " + fmt(k.gamma_plus));
    } else {
      row.insert(row.end(), 6, std::nullopt);
    }
    r.rows.push_back(std::move(row));

    std::ostringstream os;
    write_csv(p, os);
    r.artifacts.push_back({"wave_c" + fmt(c) + ".csv", os.str()});
    Series s{tag, {}, {}};
    const std::size_t stride = std::max<std::size_t>(1, p.size() / 800);
    for (std::size_t i = 0; i < p.size(); i += stride) {
      s.x.push_back(p.z(i));
      s.y.push_back(p.U[i]);
    }
    plot.series.push_back(std::move(s));
    r.runtimes[tag] = seconds_since(t0);
  }
  r.runtimes["total"] = seconds_since(t_all);
  r.plots.push_back(std::move(plot));
  return r;
}

// ----------------------------------------------------------------- simulate

Report run_simulate(const LabConfig& cfg) {
  Report r = new_report("simulate", cfg);
  const double eps = cfg.study.epsilons.at(0);
  SimConfig sim = make_sim(cfg, eps);
  sim.record = {"front", "thickness", "sup", "inf"};
  const auto t0 = Clock::now();
  const Trajectory tr = run(sim);
  r.runtimes["solve"] = seconds_since(t0);

  r.columns = {"epsilon", "t", "front", "thickness", "sup", "inf"};
  const double bound = std::max(1.0, sim.initial.sup()) + 1e-8;
  Plot plot{"simulate_profiles.svg", {}, {"Profiles, eps = " + fmt(eps), "x", "u", false, false}};
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.checkpoints.size(); ++k) {
    const auto& cp = tr.checkpoints[k];
    Row row{eps, cp.t};
    for (const char* name : {"front", "thickness", "sup", "inf"}) {
      const auto it = tr.observables.find(name);
      std::optional<double> v;
      if (it != tr.observables.end()) {
        for (const auto& [t, val] : it->second) {
          if (t == cp.t) v = val;
        }
      }
      row.push_back(v);
    }
    r.rows.push_back(std::move(row));
    worst = std::max(worst, cp.field.max());
    char name[48];
    std::snprintf(name, sizeof name, "checkpoint_%03zu.csv", k);
    std::ostringstream os;
    write_checkpoint(os, cp.t, cp.field);
    r.artifacts.push_back({name, os.str()});
    plot.series.push_back(axis_series(cp.field, "t=" + fmt(cp.t)));
  }
  add_check(r, "sup_bound", worst <= bound,
            "max u " + fmt(worst) + " vs bound " + fmt(bound));
  r.plots.push_back(std::move(plot));
  return r;
}

// -------------------------------------------------------------------- speed

Report run_speed_study(const LabConfig& cfg) {
  Report r = new_report("speed", cfg);
  const auto eps = ladder(cfg);
  require_compact(cfg, "speed");
  const double T = cfg.solver.t_end;

  struct Out {
    double speed, seconds, dx;
  };
  const auto t_all = Clock::now();
  const auto outs = per_epsilon<Out>(eps, [&](double e) {
    const auto t0 = Clock::now();
    SimConfig sim = make_sim(cfg, e);
    sim.checkpoint_times = linspace(cfg.study.speed_window * T, T, cfg.study.speed_samples);
    sim.record = {"front"};
    const Trajectory tr = run(sim);
    return Out{fitted_speed(tr), seconds_since(t0), sim.grid.dx()};
  });
  r.runtimes["total"] = seconds_since(t_all);

  r.columns = {"epsilon", "eps_abs_log_eps", "dx", "speed", "speed_error", "error_bound"};
  std::vector<double> errs, xs;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double L = eps_L(eps[i]);
    const double err = std::abs(outs[i].speed - 2.0);
    r.rows.push_back({eps[i], L, outs[i].dx, outs[i].speed, err, 10.0 * L});
    add_check(r, "speed_bound " + eps_key(eps[i]), err <= 10.0 * L,
              "|speed - 2| = " + fmt(err) + " vs 10 eps|ln eps| = " + fmt(10.0 * L));
    r.runtimes[eps_key(eps[i])] = outs[i].seconds;
    errs.push_back(err);
    xs.push_back(L);
  }
  add_check(r, "speed_error_decreasing", strictly_decreasing(errs), "errors " + join(errs));
  r.fits.push_back(fit_through_origin(xs, errs, "speed_error = C eps|ln eps|", "C"));
  std::vector<double> bound;
  for (double x : xs) bound.push_back(10.0 * x);
  r.plots.push_back({"speed_error.svg",
                     {{"|speed - 2|", eps, errs}, {"10 eps|ln eps|", eps, bound}},
                     {"Front speed error", "epsilon", "error", true, true}});
  return r;
}

// ---------------------------------------------------------------- thickness

Report run_thickness_study(const LabConfig& cfg) {
  Report r = new_report("thickness", cfg);
  const auto eps = ladder(cfg);
  require_compact(cfg, "thickness");
  const double T = cfg.solver.t_end;
  const ConvexBody body = make_body(cfg);

  struct Sample {
    double t;
    std::optional<double> W;
    double C;
  };
  struct Out {
    std::vector<Sample> samples;
    double seconds;
  };
  const auto t_all = Clock::now();
  const auto outs = per_epsilon<Out>(eps, [&](double e) {
    const auto t0 = Clock::now();
    SimConfig sim = make_sim(cfg, e);
    sim.checkpoint_times = {0.5 * T, T};
    sim.record = {"thickness"};
    const Trajectory tr = run(sim);
    const CutoffDistance cd(body, 2.0, cfg.geometry.d0);
    Out o{{}, 0.0};
    const auto& th = tr.observables.at("thickness");
    for (std::size_t k = 0; k < th.size(); ++k) {
      o.samples.push_back({th[k].first, th[k].second,
                           measured_tube_constant(tr.checkpoints[k].field, cd, th[k].first, e)});
    }
    o.seconds = seconds_since(t0);
    return o;
  });
  r.runtimes["total"] = seconds_since(t_all);

  r.columns = {"epsilon", "t", "thickness", "thickness_over_eps_abs_log_eps", "C_meas"};
  std::vector<double> xs, w_final, ratio_final, c_final;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double L = eps_L(eps[i]);
    r.runtimes[eps_key(eps[i])] = outs[i].seconds;
    for (const auto& s : outs[i].samples) {
      if (!s.W) {
        throw DataError("thickness: no layer at checkpoint t = " + fmt(s.t) + ", " +
                        eps_key(eps[i]));
      }
      r.rows.push_back({eps[i], s.t, *s.W, *s.W / L, s.C});
      add_check(r, "thickness_positive " + eps_key(eps[i]) + " t=" + fmt(s.t), *s.W > 0.0,
                "W = " + fmt(*s.W));
    }
    const auto& last = outs[i].samples.back();
    xs.push_back(L);
    w_final.push_back(*last.W);
    ratio_final.push_back(*last.W / L);
    c_final.push_back(last.C);
  }
  const bool pos_ratio = std::all_of(ratio_final.begin(), ratio_final.end(),
                                     [](double v) { return v > 0.0; });
  const bool pos_c =
      std::all_of(c_final.begin(), c_final.end(), [](double v) { return v > 0.0; });
  add_check(r, "thickness_scaling", pos_ratio && spread(ratio_final) <= 2.0,
            "W(T)/(eps|ln eps|) = " + join(ratio_final));
  add_check(r, "tube_constant_bounded", pos_c && spread(c_final) <= 2.0,
            "C_meas(T) = " + join(c_final));
  r.fits.push_back(fit_through_origin(xs, w_final, "W(T) = A eps|ln eps|", "A"));
  r.plots.push_back({"thickness.svg",
                     {{"W(T)", eps, w_final}, {"eps|ln eps|", eps, xs}},
                     {"Layer thickness", "epsilon", "W", true, true}});
  return r;
}

// --------------------------------------------------------------- generation

Report run_generation_study(const LabConfig& cfg) {
  Report r = new_report("generation", cfg);
  const auto eps = ladder(cfg);
  require_compact(cfg, "generation");
  const InitialData init = make_initial(cfg);
  const double k = cfg.study.generation_k;

  struct Out {
    double tau, alpha_kin, seconds;
  };
  const auto t_all = Clock::now();
  const auto outs = per_epsilon<Out>(eps, [&](double e) {
    const auto t0 = Clock::now();
    const SimConfig sim = make_sim(cfg, e);
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < sim.grid.size(); ++i) {
      if (init.g(sim.grid.point(i)) >= k * eps_L(e)) nodes.push_back(i);
    }
    if (nodes.empty()) {
      throw DataError("generation: {g >= k eps|ln eps|} is empty at " + eps_key(e));
    }
    const auto tau = first_passage(sim, nodes, 1.0 - e);
    if (!tau) {
      throw DataError("generation: threshold 1 - eps not reached before t_end at " + eps_key(e));
    }
    const Kinetics kin(kinetics_params(cfg, e));
    const double a = generation_alpha(kin, init.sup_g() + init.tail_bound());
    return Out{*tau, a, seconds_since(t0)};
  });
  r.runtimes["total"] = seconds_since(t_all);

  r.columns = {"epsilon", "eps_abs_log_eps", "tau", "tau_over_eps_abs_log_eps", "kinetic_alpha"};
  std::vector<double> xs, taus, alphas;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double L = eps_L(eps[i]);
    r.rows.push_back({eps[i], L, outs[i].tau, outs[i].tau / L, outs[i].alpha_kin});
    r.runtimes[eps_key(eps[i])] = outs[i].seconds;
    xs.push_back(L);
    taus.push_back(outs[i].tau);
    alphas.push_back(outs[i].tau / L);
  }
  const Fit fit = fit_through_origin(xs, taus, "tau = alpha eps|ln eps|", "alpha");
  r.fits.push_back(fit);
  const bool pos = std::all_of(alphas.begin(), alphas.end(), [](double v) { return v > 0.0; });
  add_check(r, "alpha_stable", pos && spread(alphas) <= 2.0,
            "tau/(eps|ln eps|) = " + join(alphas));
  add_check(r, "fit_residual", fit.residual <= 0.2, "relative rms " + fmt(fit.residual));
  add_check(r, "tau_decreasing", strictly_decreasing(taus), "tau = " + join(taus));
  r.plots.push_back({"generation.svg",
                     {{"tau", eps, taus}, {"eps|ln eps|", eps, xs}},
                     {"Generation time", "epsilon", "time", true, true}});
  return r;
}

// ------------------------------------------------------------- no interface

Report run_no_interface_study(const LabConfig& cfg) {
  Report r = new_report("no-interface", cfg);
  const auto eps = ladder(cfg);
  if (cfg.initial.kind != "algebraic") {
    throw ConfigurationError("no-interface study needs algebraic initial data");
  }
  const auto& st = cfg.study;
  if (!(st.probe_t > 0.0)) throw ConfigurationError("no-interface: probe_t must be positive");

  // Matched control: compact data on a ball at the origin.
  LabConfig control = cfg;
  control.initial.kind = "compact";
  control.initial.amplitude = st.control_amplitude;
  control.initial.width = st.control_width;
  control.initial.tail_M = 0.0;
  control.geometry.shape = "ball";
  control.geometry.center_x = 0.0;
  control.geometry.center_y = 0.0;
  control.geometry.radius = st.control_radius;

  const Point probe{st.probe_x, 0.0};
  const Point inner{0.0, 0.0};

  struct Out {
    double alg, ctrl, alg_in, ctrl_in, seconds;
  };
  const auto t_all = Clock::now();
  const auto outs = per_epsilon<Out>(eps, [&](double e) {
    const auto t0 = Clock::now();
    auto probe_run = [&](const LabConfig& c) {
      SimConfig sim = make_sim(c, e);
      sim.t_end = st.probe_t;
      sim.checkpoint_times = {st.probe_t};
      if (!sim.grid.contains(probe)) {
        throw ConfigurationError("no-interface: probe x = " + fmt(st.probe_x) +
                                 " lies outside the grid");
      }
      const Field u = run(sim).final_field();
      return std::pair{interpolate(u, probe), interpolate(u, inner)};
    };
    const auto a = probe_run(cfg);
    const auto c = probe_run(control);
    return Out{a.first, c.first, a.second, c.second, seconds_since(t0)};
  });
  r.runtimes["total"] = seconds_since(t_all);

  r.columns = {"epsilon", "t0", "x0", "u_algebraic", "u_control", "u_algebraic_origin",
               "u_control_origin"};
  std::vector<double> alg, ctrl;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto& o = outs[i];
    r.rows.push_back({eps[i], st.probe_t, st.probe_x, o.alg, o.ctrl, o.alg_in, o.ctrl_in});
    r.runtimes[eps_key(eps[i])] = o.seconds;
    alg.push_back(o.alg);
    ctrl.push_back(o.ctrl);
    add_check(r, "control_below " + eps_key(eps[i]), o.ctrl <= 0.05,
              "control probe " + fmt(o.ctrl));
    const double lo = 1.0 - 2.0 * eps[i];
    add_check(r, "inside_generated " + eps_key(eps[i]), o.alg_in >= lo && o.ctrl_in >= lo,
              "origin values " + fmt(o.alg_in) + ", " + fmt(o.ctrl_in) + " vs " + fmt(lo));
  }
  add_check(r, "algebraic_increasing", strictly_increasing(alg), "probe series " + join(alg));
  add_check(r, "algebraic_final", alg.back() >= 0.9, "final probe " + fmt(alg.back()));
  r.plots.push_back({"no_interface.svg",
                     {{"algebraic", eps, alg}, {"compact control", eps, ctrl}},
                     {"Probe u(t0, x0)", "epsilon", "u", true, false}});
  return r;
}

// ----------------------------------------------------------------- barriers

namespace {

struct Worst {
  double value = std::numeric_limits<double>::infinity();
  double t = 0.0;
  Point x;
  double u = 0.0, barrier = 0.0;

  void offer(double v, double tt, Point p, double uu, double b) {
    if (v < value) *this = {v, tt, p, uu, b};
  }
  std::string describe() const {
    return "worst " + fmt(value) + " at t = " + fmt(t) + ", x = (" + fmt(x.x) + ", " + fmt(x.y) +
           "), u = " + fmt(u) + ", barrier = " + fmt(barrier);
  }
};

struct Peak {
  double value = 0.0;
  double t = 0.0;
  Point x;
  void offer(double v, double tt, Point p) {
    if (v > value) *this = {v, tt, p};
  }
  std::string describe() const {
    return "max " + fmt(value) + " at t = " + fmt(t) + ", x = (" + fmt(x.x) + ", " + fmt(x.y) +
           ")";
  }
};

// Largest |d_t d + c| / |d| over tube nodes; zero for exact distances.
double measured_geometry_constant(const CutoffDistance& cd, const Grid& grid, double t,
                                  double h) {
  double n = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point p = grid.point(i);
    const double d = cd.evolved(t, p);
    if (std::abs(d) > cd.d0() || std::abs(d) < grid.dx()) continue;
    const double dt = (cd.evolved(t + h, p) - cd.evolved(std::max(0.0, t - h), p)) /
                      (t + h - std::max(0.0, t - h));
    n = std::max(n, std::abs(dt + cd.speed()) / std::abs(d));
  }
  return n;
}

}  // namespace

Report run_barrier_check(const LabConfig& cfg) {
  Report r = new_report("barriers", cfg);
  require_compact(cfg, "barrier");
  const auto& st = cfg.study;
  const double eps = st.barrier_epsilon;
  const double L = eps_L(eps);
  const auto t_all = Clock::now();

  const Kinetics kin(kinetics_params(cfg, eps));
  const InitialData init = make_initial(cfg);
  const ConvexBody& body = init.compact_data().body;

  BarrierParams bp;
  bp.K = st.K;
  bp.k = st.generation_k;
  bp.alpha = st.alpha > 0.0 ? st.alpha : generation_alpha(kin, init.sup_g() + init.tail_bound());
  bp.a = bp.alpha;
  bp.m1 = 0.0;
  bp.m2 = st.m2;
  bp.C_const = st.C_const;
  bp.c1 = st.c1;
  bp.rho = st.rho;

  const WaveProfile U2 = solve_wave(2.0, cfg.wave.dz, cfg.wave.z_span);
  const double K0 = k0_lower_bound(U2, init);
  bp.K_hat = st.K_hat > 0.0 ? st.K_hat : K0;
  const double c_eps = 2.0 - L;
  const WaveProfile V = solve_sign_changing_wave(c_eps, cfg.wave.dz, cfg.wave.z_span);
  const CutoffDistance cd(body, c_eps, cfg.geometry.d0);
  const double teps = generation_time(eps, bp);
  const double T = cfg.solver.t_end;
  if (!(teps < T)) {
    throw ConfigurationError("barrier check: t_end " + fmt(T) + " must exceed t_eps " +
                             fmt(teps));
  }
  r.runtimes["setup"] = seconds_since(t_all);

  SimConfig sim = make_sim(cfg, eps);
  sim.checkpoint_times.clear();
  const int G = std::max(1, st.generation_samples);
  const int Mn = std::max(1, st.motion_samples);
  for (int k = 0; k < G; ++k) sim.checkpoint_times.push_back(teps * k / G);
  sim.checkpoint_times.push_back(teps);
  for (int k = 1; k <= Mn; ++k) sim.checkpoint_times.push_back(teps + (T - teps) * k / Mn);
  sim.checkpoint_times.back() = T;
  auto t0 = Clock::now();
  const Trajectory tr = run(sim);
  r.runtimes["solve"] = seconds_since(t0);

  const Field* u_teps = nullptr;
  for (const auto& cp : tr.checkpoints) {
    if (cp.t == teps) u_teps = &cp.field;
  }
  if (!u_teps) throw DataError("barrier check: no checkpoint at t_eps");
  bp.m1 = st.m1 >= 0.0 ? st.m1 : fit_m1(*u_teps, bp, V, cd, eps);
  bp.validate();

  const double slack_tol = std::max(st.ordering_slack, 5.0 * sim.grid.dx());
  const double h_res = sim.grid.dx() / 4.0;
  t0 = Clock::now();

  BarrierParams sabotage = bp;
  sabotage.K_hat = st.sabotage_K_hat;
  Worst w_sub, w_sup, w_sab;
  Peak p_rsup, p_rsub, p_rsub_tube;

  r.columns = {"t", "min_slack_sub", "min_slack_super", "max_residual_super_violation",
               "max_residual_sub_violation"};
  for (const auto& cp : tr.checkpoints) {
    const double t = cp.t;
    const Field& u = cp.field;
    const bool generation = t <= teps;
    double s_sub = std::numeric_limits<double>::infinity();
    double s_sup = s_sub;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const Point p = u.grid.point(i);
      if (generation) {
        const double b = generation_sub(t, p, bp, kin, init, eps);
        s_sub = std::min(s_sub, u[i] - b);
        w_sub.offer(u[i] - b, t, p, u[i], b);
      }
      if (t >= teps) {
        const double sb = motion_sub(t - teps, p, bp, V, cd, eps);
        s_sub = std::min(s_sub, u[i] - sb);
        w_sub.offer(u[i] - sb, t, p, u[i], sb);
        const double sp = global_super(t, p, bp, U2, body, eps);
        s_sup = std::min(s_sup, sp - u[i]);
        w_sup.offer(sp - u[i], t, p, u[i], sp);
        const double bad = global_super(t, p, sabotage, U2, body, eps);
        w_sab.offer(bad - u[i], t, p, u[i], bad);
      } else {
        const double sp = generation_super(t, bp, kin, init, eps);
        s_sup = std::min(s_sup, sp - u[i]);
        w_sup.offer(sp - u[i], t, p, u[i], sp);
      }
    }
    Row row{t, s_sub, s_sup};
    if (t >= teps) {
      const double ts = t - teps;
      const auto sup_fn = [&](double tt, Point p) { return global_super(tt, p, bp, U2, body, eps); };
      const auto sub_fn = [&](double tt, Point p) { return motion_sub(tt, p, bp, V, cd, eps); };
      const auto kink = [&](double tt, Point p) { return motion_sub_argument(tt, p, bp, cd, eps); };
      const Field Rsup = discrete_residual(sup_fn, t, u.grid, eps, h_res);
      const Field Rsub = discrete_residual(sub_fn, ts, u.grid, eps, h_res);
      const auto mask = kink_mask(kink, ts, u.grid, h_res);
      double vsup = 0.0, vsub = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const Point p = u.grid.point(i);
        vsup = std::max(vsup, -Rsup[i]);
        p_rsup.offer(-Rsup[i], t, p);
        if (mask[i]) continue;
        vsub = std::max(vsub, Rsub[i]);
        p_rsub.offer(Rsub[i], t, p);
        if (std::abs(cd.evolved(ts, p)) < cd.d0()) p_rsub_tube.offer(Rsub[i], t, p);
      }
      row.insert(row.end(), {vsup, vsub});
    } else {
      row.insert(row.end(), {std::nullopt, std::nullopt});
    }
    r.rows.push_back(std::move(row));
  }
  r.runtimes["sandwich"] = seconds_since(t0);

  add_check(r, "ordering_sub", w_sub.value >= -slack_tol,
            w_sub.describe() + "; tolerance " + fmt(slack_tol));
  add_check(r, "ordering_super", w_sup.value >= -slack_tol,
            w_sup.describe() + "; tolerance " + fmt(slack_tol));
  add_check(r, "residual_super", p_rsup.value <= st.residual_tol,
            p_rsup.describe() + "; tolerance " + fmt(st.residual_tol));
  add_check(r, "residual_sub", p_rsub.value <= st.residual_tol,
            p_rsub.describe() + "; inside |d| < d0: " + p_rsub_tube.describe() +
                "; tolerance " + fmt(st.residual_tol));
  add_check(r, "sabotage_detected", w_sab.value < -slack_tol,
            "K_hat = " + fmt(sabotage.K_hat) + " < K0 = " + fmt(K0) + ": " + w_sab.describe());

  // Radial sub-solution W for algebraic data.
  t0 = Clock::now();
  {
    const WaveProfile Uc = solve_wave(st.radial_c, cfg.wave.dz, cfg.wave.z_span);
    const AlgebraicData data{cfg.initial.m, cfg.initial.n, cfg.initial.cap};
    const int N = cfg.geometry.dimension;
    const RadialSubW W(bp, Uc, eps, N, data);
    const Grid g = Grid::radial(st.radial_extent, eps / cfg.geometry.cells_per_eps, N);
    const auto w_fn = [&](double t, Point p) { return W(t, p); };
    const auto kink = [&](double t, Point p) { return W.kink_argument(t, p); };
    Peak pk;
    for (double t : linspace(0.0, st.radial_t_end, 6)) {
      const Field R = discrete_residual(w_fn, t, g, eps, h_res);
      const auto mask = kink_mask(kink, t, g, h_res);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask[i]) pk.offer(R[i], t, g.point(i));
      }
    }
    add_check(r, "radial_sub_residual", pk.value <= st.residual_tol,
              "c = " + fmt(st.radial_c) + ", rho = " + fmt(bp.rho) + ": " + pk.describe());
  }
  r.runtimes["radial"] = seconds_since(t0);

  // Constants used, and both m2 recipes.
  const double mu = V.tail_left.mu;
  const double n_meas = measured_geometry_constant(cd, sim.grid, 0.5 * (T - teps), h_res);
  Fit consts{"barrier_constants",
             {{"epsilon", eps},
              {"alpha", bp.alpha},
              {"t_eps", teps},
              {"K", bp.K},
              {"K0", K0},
              {"K_hat", bp.K_hat},
              {"c_eps", c_eps},
              {"d0", cd.d0()},
              {"m1", bp.m1},
              {"m2", bp.m2},
              {"mu", mu},
              {"N_measured", n_meas},
              {"C_const", bp.C_const},
              {"slack_tolerance", slack_tol}},
             0.0};
  if (bp.m1 > 0.0) {
    consts.params.push_back({"m2_floor", m2_floor(n_meas, bp.m1, mu)});
    consts.params.push_back({"C_floor", tube_constant_floor(T, bp.m1, bp.m2, mu)});
  }
  r.fits.push_back(std::move(consts));

  std::vector<double> ts, ssub, ssup;
  for (const auto& row : r.rows) {
    ts.push_back(*row[0]);
    ssub.push_back(*row[1]);
    ssup.push_back(*row[2]);
  }
  r.plots.push_back({"barrier_slack.svg",
                     {{"min slack sub", ts, ssub}, {"min slack super", ts, ssup}},
                     {"Barrier ordering slack, eps = " + fmt(eps), "t", "slack", false, false}});
  r.runtimes["total"] = seconds_since(t_all);
  return r;
}

// ----------------------------------------------------------------- dispatch

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"wave",       "simulate",     "speed",   "thickness",
                                              "generation", "no-interface", "barriers"};
  return names;
}

Report run_study(const std::string& name, const LabConfig& cfg) {
  if (name == "wave") return run_wave_study(cfg);
  if (name == "simulate") return run_simulate(cfg);
  if (name == "speed") return run_speed_study(cfg);
  if (name == "thickness") return run_thickness_study(cfg);
  if (name == "generation") return run_generation_study(cfg);
  if (name == "no-interface") return run_no_interface_study(cfg);
  if (name == "barriers") return run_barrier_check(cfg);
  throw UsageError("unknown study: " + name);
}

}  // namespace fkpp::harness
