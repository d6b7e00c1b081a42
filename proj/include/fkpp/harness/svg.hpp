#pragma once

#include <string>
#include <vector>

namespace fkpp::harness {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool log_y = false;
};

// Standalone SVG line plot with axes, ticks and a legend. Non-finite points
// and nonpositive values on log axes are skipped.
std::string line_plot(const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace fkpp::harness
