#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/harness/config.hpp"
#include "fkpp/harness/svg.hpp"

namespace fkpp::harness {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Fit {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  double residual = 0.0;
};

struct Artifact {
  std::string filename;
  std::string content;
};

struct Plot {
  std::string filename;
  std::vector<Series> series;
  PlotSpec spec;
};

// Study output. rows hold numbers only; a missing observable is an empty
// optional and is written as an empty CSV field.
struct Report {
  std::string study;
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
  std::vector<Fit> fits;
  std::vector<Check> checks;
  std::vector<Artifact> artifacts;
  std::vector<Plot> plots;
  // Wall-clock seconds per phase; written to meta.json only.
  std::map<std::string, double> runtimes;

  bool passed() const;
  // Value of `column` in row `row`; throws DataError if absent.
  double at(std::size_t row, const std::string& column) const;
  std::optional<double> maybe(std::size_t row, const std::string& column) const;
};

// report.csv: study,config_hash,<columns...>, 17 significant digits.
std::string report_csv(const Report& r);
// fits.csv and checks.csv, also keyed by the config hash.
std::string fits_csv(const Report& r);
std::string checks_csv(const Report& r);
// Timestamp, code version, SIMD backend and runtimes.
std::string meta_json(const Report& r);

// Writes report.csv, fits.csv, checks.csv, meta.json, artifacts and (when
// `svg` is set) plots into `dir`, creating it if needed.
void write_report(const Report& r, const std::filesystem::path& dir, bool svg);

struct Verification {
  std::size_t rows = 0;
  std::size_t mismatched = 0;
  std::string expected_hash;
  bool ok() const { return rows > 0 && mismatched == 0; }
};
// Recomputes the hash of `cfg` and compares it with every row of the CSV.
Verification verify_report(const std::filesystem::path& report, const LabConfig& cfg);

}  // namespace fkpp::harness
