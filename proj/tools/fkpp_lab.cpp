// fkpp_lab: run a study from an INI config and write its report.
//
//   fkpp_lab <study> --config <file> --out <dir> [--svg]
//   fkpp_lab verify --config <file> --report <report.csv>
//
// Exit codes: 0 all checks pass, 1 usage/configuration error, 2 check
// failure or missing data, 3 numerical error.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "fkpp/error.hpp"
#include "fkpp/harness/config.hpp"
#include "fkpp/harness/report.hpp"
#include "fkpp/harness/studies.hpp"

namespace {

int exit_code(fkpp::ErrorKind k) {
  switch (k) {
    case fkpp::ErrorKind::usage:
    case fkpp::ErrorKind::configuration:
    case fkpp::ErrorKind::domain:
      return 1;
    case fkpp::ErrorKind::data:
      return 2;
    case fkpp::ErrorKind::numerical:
    case fkpp::ErrorKind::shooting:
    case fkpp::ErrorKind::dependency:
      return 3;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fisher-KPP sharp-interface experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir, report_path;
  bool svg = false;

  std::vector<CLI::App*> studies;
  for (const auto& name : fkpp::harness::study_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " study");
    sub->add_option("--config", config_path, "INI configuration")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--svg", svg, "also write SVG plots");
    studies.push_back(sub);
  }
  auto* verify = app.add_subcommand("verify", "check a report against a config hash");
  verify->add_option("--config", config_path, "INI configuration")->required()->check(
      CLI::ExistingFile);
  verify->add_option("--report", report_path, "report.csv to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const auto cfg = fkpp::harness::load_config(config_path);
    if (verify->parsed()) {
      const auto v = fkpp::harness::verify_report(report_path, cfg);
      std::printf("rows %zu, mismatched %zu, expected hash %s\n", v.rows, v.mismatched,
                  v.expected_hash.c_str());
      return v.ok() ? 0 : 2;
    }
    for (auto* sub : studies) {
      if (!sub->parsed()) continue;
      const auto report = fkpp::harness::run_study(sub->get_name(), cfg);
      fkpp::harness::write_report(report, out_dir, svg);
      for (const auto& c : report.checks) {
        std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      }
      std::printf("%s: %s (config %s)\n", report.study.c_str(),
                  report.passed() ? "all checks passed" : "check failure",
                  report.config_hash.c_str());
      return report.passed() ? 0 : 2;
    }
  } catch (const fkpp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
