#include "fkpp/harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fkpp::harness {
namespace {

constexpr double W = 640, H = 420, L = 70, R = 160, T = 40, B = 55;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

struct Scale {
  bool log;
  double lo, hi, p0, p1;
  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return p0 + (a - lo) / (hi - lo) * (p1 - p0);
  }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

Scale make_scale(const std::vector<double>& vals, bool log, double p0, double p1) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : vals) {
    const double a = log ? std::log10(v) : v;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {log, lo, hi, p0, p1};
}

std::vector<double> ticks(const Scale& s) {
  std::vector<double> out;
  if (s.log) {
    for (double e = std::floor(s.lo); e <= std::ceil(s.hi); e += 1.0) {
      if (e >= s.lo - 1e-9 && e <= s.hi + 1e-9) out.push_back(std::pow(10.0, e));
    }
    if (out.size() < 2) out = {std::pow(10.0, s.lo), std::pow(10.0, s.hi)};
    return out;
  }
  const double span = s.hi - s.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(s.lo / step) * step; v <= s.hi + 1e-12; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotSpec& spec) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (usable(s.x[i], spec.log_x) && usable(s.y[i], spec.log_y)) {
        xs.push_back(s.x[i]);
        ys.push_back(s.y[i]);
      }
    }
  }
  const Scale sx = make_scale(xs, spec.log_x, L, W - R);
  const Scale sy = make_scale(ys, spec.log_y, H - B, T);

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << esc(spec.title) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - R - L << "\" height=\""
    << H - B - T << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : ticks(sx)) {
    const double px = sx.map(v);
    o << "<line x1=\"" << px << "\" y1=\"" << H - B << "\" x2=\"" << px << "\" y2=\""
      << H - B + 5 << "\" stroke=\"black\"/>";
    o << "<text x=\"" << px << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << num(v)
      << "</text>\n";
  }
  for (double v : ticks(sy)) {
    const double py = sy.map(v);
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << py << "\" x2=\"" << L << "\" y2=\"" << py
      << "\" stroke=\"black\"/>";
    o << "<text x=\"" << L - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << num(v)
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << esc(spec.xlabel) << "</text>\n";
  o << "<text transform=\"translate(16," << (T + H - B) / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << esc(spec.ylabel) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % std::size(kColors)];
    std::ostringstream pts;
    std::size_t count = 0;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], spec.log_x) || !usable(s.y[i], spec.log_y)) continue;
      pts << sx.map(s.x[i]) << "," << sy.map(s.y[i]) << " ";
      ++count;
    }
    if (count > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << pts.str() << "\"/>\n";
    }
    if (count <= 25) {
      for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
        if (!usable(s.x[i], spec.log_x) || !usable(s.y[i], spec.log_y)) continue;
        o << "<circle cx=\"" << sx.map(s.x[i]) << "\" cy=\"" << sy.map(s.y[i])
          << "\" r=\"3\" fill=\"" << color << "\"/>";
      }
      o << "\n";
    }
    const double ly = T + 14 + 18.0 * static_cast<double>(k);
    o << "<line x1=\"" << W - R + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 32
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    o << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << esc(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace fkpp::harness
