#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhs/harness.hpp"

#ifndef FHS_DEFAULT_DEFS
#define FHS_DEFAULT_DEFS "defs/fhs.defs"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of the first heavenly equation's Hamiltonian structures"};
  app.require_subcommand(1);

  fhs::RunConfig cfg;
  cfg.defs_path = FHS_DEFAULT_DEFS;
  bool all = false;
  bool no_timing = false;
  std::vector<std::string> checks;
  std::string json_path;

  CLI::App* verify = app.add_subcommand("verify", "run verification checks");
  auto* all_opt = verify->add_flag("--all", all, "run every registered check (default)");
  verify->add_option("--check", checks, "check names to run")->excludes(all_opt);
  verify->add_option("--json", json_path, "write a JSON report to this path");
  verify->add_option("--seed", cfg.seed, "oracle seed")->capture_default_str();
  verify->add_option("--oracle-trials", cfg.oracle_trials, "valuations per identity")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--defs", cfg.defs_path, "definitions file (FHS_DEFS overrides the default)");
  verify->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_flag("--no-timing", no_timing, "report 0 ms everywhere for byte-stable output");

  CLI::App* list = app.add_subcommand("list", "list registered checks");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& c : fhs::registry()) {
      std::cout << c.name;
      for (const auto& d : c.requires_pass) std::cout << " (requires " << d << ")";
      std::cout << "\n";
    }
    return 0;
  }

  if (verify->count("--defs") == 0) cfg.defs_path = fhs::resolve_defs_path(cfg.defs_path);
  try {
    fhs::RunResult res = fhs::run(checks, cfg);
    std::cout << fhs::format_reports(res.reports, fhs::ReportFormat::text, cfg.seed, !no_timing);
    if (!json_path.empty()) fhs::emit_report(res.reports, fhs::ReportFormat::json, json_path, cfg.seed, !no_timing);
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "fhs: " << e.what() << "\n";
    return 2;
  }
}
