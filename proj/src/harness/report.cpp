#include "fkpp/harness/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fkpp/error.hpp"
#include "fkpp/simd/kernels.hpp"

#ifndef FKPP_VERSION
#define FKPP_VERSION "unknown"
#endif

namespace fkpp::harness {
namespace {

std::string g17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

// Quote a CSV field when it contains a separator or quote.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("report: cannot write " + p.string());
  out << content;
}

}  // namespace

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::optional<double> Report::maybe(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw DataError("report: no column " + column);
  if (row >= rows.size()) throw DataError("report: row out of range");
  return rows[row][static_cast<std::size_t>(it - columns.begin())];
}

double Report::at(std::size_t row, const std::string& column) const {
  const auto v = maybe(row, column);
  if (!v) throw DataError("report: missing value in column " + column);
  return *v;
}

std::string report_csv(const Report& r) {
  std::string out = "study,config_hash";
  for (const auto& c : r.columns) out += "," + field(c);
  out += "\n";
  for (const auto& row : r.rows) {
    out += field(r.study) + "," + r.config_hash;
    for (const auto& v : row) out += "," + (v ? g17(*v) : std::string());
    out += "\n";
  }
  return out;
}

std::string fits_csv(const Report& r) {
  std::string out = "study,config_hash,model,parameter,value,residual\n";
  for (const auto& f : r.fits) {
    for (const auto& [name, value] : f.params) {
      out += field(r.study) + "," + r.config_hash + "," + field(f.model) + "," + field(name) +
             "," + g17(value) + "," + g17(f.residual) + "\n";
    }
  }
  return out;
}

std::string checks_csv(const Report& r) {
  std::string out = "study,config_hash,check,pass,detail\n";
  for (const auto& c : r.checks) {
    out += field(r.study) + "," + r.config_hash + "," + field(c.name) + "," +
           (c.pass ? "1" : "0") + "," + field(c.detail) + "\n";
  }
  return out;
}

std::string meta_json(const Report& r) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  nlohmann::json j;
  j["study"] = r.study;
  j["config_hash"] = r.config_hash;
  j["code_version"] = FKPP_VERSION;
  j["timestamp"] = stamp;
  j["simd_backend"] = std::string(simd::to_string(simd::active()));
  j["runtimes_seconds"] = r.runtimes;
  j["passed"] = r.passed();
  return j.dump(2) + "\n";
}

void write_report(const Report& r, const std::filesystem::path& dir, bool svg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("report: cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "report.csv", report_csv(r));
  write_file(dir / "fits.csv", fits_csv(r));
  write_file(dir / "checks.csv", checks_csv(r));
  write_file(dir / "meta.json", meta_json(r));
  for (const auto& a : r.artifacts) write_file(dir / a.filename, a.content);
  if (svg) {
    for (const auto& p : r.plots) write_file(dir / p.filename, line_plot(p.series, p.spec));
  }
}

Verification verify_report(const std::filesystem::path& report, const LabConfig& cfg) {
  std::ifstream in(report);
  if (!in) throw DataError("verify: cannot read " + report.string());
  Verification v;
  v.expected_hash = config_hash(cfg);
  std::string line;
  if (!std::getline(in, line)) throw DataError("verify: empty report");
  const auto header = split_csv_line(line);
  const auto it = std::find(header.begin(), header.end(), "config_hash");
  if (it == header.end()) throw DataError("verify: report has no config_hash column");
  const auto col = static_cast<std::size_t>(it - header.begin());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    ++v.rows;
    if (col >= cells.size() || cells[col] != v.expected_hash) ++v.mismatched;
  }
  return v;
}

}  // namespace fkpp::harness
