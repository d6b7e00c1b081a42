#include "fkpp/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "fkpp/error.hpp"

namespace fkpp::harness {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigurationError("config: " + key + " expects a number, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != static_cast<int>(v)) throw ConfigurationError("config: " + key + " expects an integer");
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigurationError("config: " + key + " expects a list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Entry {
  const char* section;
  const char* key;
  std::function<void(LabConfig&, const std::string& name, const std::string& value)> set;
  std::function<std::string(const LabConfig&)> get;
};

template <class T>
Entry num(const char* s, const char* k, T LabConfig::*grp, double T::*field) {
  return {s, k,
          [grp, field](LabConfig& c, const std::string& n, const std::string& v) {
            c.*grp.*field = to_double(n, v);
          },
          [grp, field](const LabConfig& c) { return fmt(c.*grp.*field); }};
}

template <class T>
Entry integer(const char* s, const char* k, T LabConfig::*grp, int T::*field) {
  return {s, k,
          [grp, field](LabConfig& c, const std::string& n, const std::string& v) {
            c.*grp.*field = to_int(n, v);
          },
          [grp, field](const LabConfig& c) { return std::to_string(c.*grp.*field); }};
}

template <class T>
Entry list(const char* s, const char* k, T LabConfig::*grp, std::vector<double> T::*field) {
  return {s, k,
          [grp, field](LabConfig& c, const std::string& n, const std::string& v) {
            c.*grp.*field = to_list(n, v);
          },
          [grp, field](const LabConfig& c) { return fmt(c.*grp.*field); }};
}

template <class T>
Entry word(const char* s, const char* k, T LabConfig::*grp, std::string T::*field) {
  return {s, k,
          [grp, field](LabConfig& c, const std::string&, const std::string& v) {
            c.*grp.*field = trim(v);
          },
          [grp, field](const LabConfig& c) { return c.*grp.*field; }};
}

const std::vector<Entry>& schema() {
  using L = LabConfig;
  static const std::vector<Entry> entries{
      num("kinetics", "cutoff_inner", &L::kinetics, &L::Kinetics::cutoff_inner),
      num("kinetics", "cutoff_outer", &L::kinetics, &L::Kinetics::cutoff_outer),
      list("wave", "speeds", &L::wave, &L::Wave::speeds),
      num("wave", "dz", &L::wave, &L::Wave::dz),
      num("wave", "z_span", &L::wave, &L::Wave::z_span),
      word("geometry", "mode", &L::geometry, &L::Geometry::mode),
      integer("geometry", "dimension", &L::geometry, &L::Geometry::dimension),
      word("geometry", "shape", &L::geometry, &L::Geometry::shape),
      num("geometry", "lower", &L::geometry, &L::Geometry::lower),
      num("geometry", "upper", &L::geometry, &L::Geometry::upper),
      num("geometry", "center_x", &L::geometry, &L::Geometry::center_x),
      num("geometry", "center_y", &L::geometry, &L::Geometry::center_y),
      num("geometry", "radius", &L::geometry, &L::Geometry::radius),
      num("geometry", "semi_x", &L::geometry, &L::Geometry::semi_x),
      num("geometry", "semi_y", &L::geometry, &L::Geometry::semi_y),
      num("geometry", "d0", &L::geometry, &L::Geometry::d0),
      num("geometry", "extent", &L::geometry, &L::Geometry::extent),
      num("geometry", "cells_per_eps", &L::geometry, &L::Geometry::cells_per_eps),
      word("initial", "kind", &L::initial, &L::Initial::kind),
      num("initial", "amplitude", &L::initial, &L::Initial::amplitude),
      num("initial", "width", &L::initial, &L::Initial::width),
      num("initial", "tail_lambda", &L::initial, &L::Initial::tail_lambda),
      num("initial", "tail_M", &L::initial, &L::Initial::tail_M),
      num("initial", "m", &L::initial, &L::Initial::m),
      num("initial", "n", &L::initial, &L::Initial::n),
      num("initial", "cap", &L::initial, &L::Initial::cap),
      num("solver", "t_end", &L::solver, &L::Solver::t_end),
      num("solver", "dt", &L::solver, &L::Solver::dt),
      integer("solver", "checkpoints", &L::solver, &L::Solver::checkpoints),
      list("study", "epsilons", &L::study, &L::Study::epsilons),
      num("study", "speed_window", &L::study, &L::Study::speed_window),
      integer("study", "speed_samples", &L::study, &L::Study::speed_samples),
      num("study", "generation_k", &L::study, &L::Study::generation_k),
      num("study", "probe_t", &L::study, &L::Study::probe_t),
      num("study", "probe_x", &L::study, &L::Study::probe_x),
      num("study", "control_radius", &L::study, &L::Study::control_radius),
      num("study", "control_amplitude", &L::study, &L::Study::control_amplitude),
      num("study", "control_width", &L::study, &L::Study::control_width),
      num("study", "barrier_epsilon", &L::study, &L::Study::barrier_epsilon),
      num("study", "K", &L::study, &L::Study::K),
      num("study", "K_hat", &L::study, &L::Study::K_hat),
      num("study", "alpha", &L::study, &L::Study::alpha),
      num("study", "m1", &L::study, &L::Study::m1),
      num("study", "m2", &L::study, &L::Study::m2),
      num("study", "C_const", &L::study, &L::Study::C_const),
      num("study", "sabotage_K_hat", &L::study, &L::Study::sabotage_K_hat),
      integer("study", "generation_samples", &L::study, &L::Study::generation_samples),
      integer("study", "motion_samples", &L::study, &L::Study::motion_samples),
      num("study", "radial_c", &L::study, &L::Study::radial_c),
      num("study", "c1", &L::study, &L::Study::c1),
      num("study", "rho", &L::study, &L::Study::rho),
      num("study", "radial_extent", &L::study, &L::Study::radial_extent),
      num("study", "radial_t_end", &L::study, &L::Study::radial_t_end),
      num("study", "ordering_slack", &L::study, &L::Study::ordering_slack),
      num("study", "residual_tol", &L::study, &L::Study::residual_tol),
  };
  return entries;
}

void check_choice(const std::string& key, const std::string& v,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  std::string msg = "config: " + key + " = '" + v + "' is not one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigurationError(msg);
}

}  // namespace

LabConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  LabConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigurationError("config: key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const Entry* hit = nullptr;
      for (const auto& e : schema()) {
        if (section == e.section && key == e.key) hit = &e;
      }
      if (!hit) throw ConfigurationError("config: unknown key " + name);
      hit->set(cfg, name, value.data());
    }
  }
  check_choice("geometry.mode", cfg.geometry.mode, {"line", "radial", "plane"});
  check_choice("geometry.shape", cfg.geometry.shape, {"interval", "ball", "ellipse"});
  check_choice("initial.kind", cfg.initial.kind, {"compact", "algebraic"});
  if (cfg.solver.checkpoints < 1) throw ConfigurationError("config: solver.checkpoints must be >= 1");
  if (cfg.geometry.cells_per_eps < 8.0) {
    throw ConfigurationError("config: geometry.cells_per_eps must be at least 8");
  }
  return cfg;
}

LabConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_text(const LabConfig& cfg) {
  std::string out;
  for (const auto& e : schema()) {
    out += std::string(e.section) + "." + e.key + "=" + e.get(cfg) + "\n";
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const LabConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_text(cfg))));
  return buf;
}

KineticsParams kinetics_params(const LabConfig& cfg, double epsilon) {
  KineticsParams p;
  p.epsilon = epsilon;
  p.cutoff_inner = cfg.kinetics.cutoff_inner;
  p.cutoff_outer = cfg.kinetics.cutoff_outer;
  return p;
}

ConvexBody make_body(const LabConfig& cfg) {
  const auto& g = cfg.geometry;
  if (g.shape == "interval") return ConvexBody::interval(g.lower, g.upper);
  if (g.shape == "ball") return ConvexBody::ball({g.center_x, g.center_y}, g.radius);
  return ConvexBody::ellipse({g.center_x, g.center_y}, g.semi_x, g.semi_y);
}

InitialData make_initial(const LabConfig& cfg) {
  const auto& i = cfg.initial;
  if (i.kind == "algebraic") return InitialData::algebraic(i.m, i.n, i.cap);
  std::optional<ExponentialTail> tail;
  if (i.tail_M > 0.0) tail = ExponentialTail{i.tail_lambda, i.tail_M};
  return InitialData::compact(make_body(cfg), i.amplitude, i.width, tail);
}

Grid make_grid(const LabConfig& cfg, double epsilon) {
  const auto& g = cfg.geometry;
  const double dx = epsilon / g.cells_per_eps;
  if (g.mode == "line") return Grid::line(-g.extent, g.extent, dx);
  if (g.mode == "radial") return Grid::radial(g.extent, dx, g.dimension);
  return Grid::plane(-g.extent, g.extent, -g.extent, g.extent, dx);
}

SimConfig make_sim(const LabConfig& cfg, double epsilon) {
  SimConfig s;
  s.epsilon = epsilon;
  s.grid = make_grid(cfg, epsilon);
  s.initial = make_initial(cfg);
  s.t_end = cfg.solver.t_end;
  s.dt = cfg.solver.dt;
  const int n = cfg.solver.checkpoints;
  for (int k = 1; k <= n; ++k) s.checkpoint_times.push_back(cfg.solver.t_end * k / n);
  s.checkpoint_times.back() = cfg.solver.t_end;
  return s;
}

}  // namespace fkpp::harness
