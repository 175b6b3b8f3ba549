#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fhs/mathdsl.hpp"
#include "fhs/report.hpp"

namespace fhs {

struct RunConfig {
  std::string defs_path;
  std::uint64_t seed = 1;
  int oracle_trials = 100;
  int jobs = 1;
};

struct CheckSpec {
  std::string name;
  /// Checks that must run and pass first.
  std::vector<std::string> requires_pass;
  /// Checks that must run first, whatever their outcome.
  std::vector<std::string> runs_after;
  bool gating = true;
  std::function<VerificationReport(const Definitions&, const RunConfig&)> run;
};

/// All registered checks in report order.
const std::vector<CheckSpec>& registry();
const CheckSpec& find_check(std::string_view name);

/// Reads FHS_DEFS, falling back to the given default.
std::string resolve_defs_path(const std::string& fallback);

struct RunResult {
  std::vector<VerificationReport> reports;
  int exit_code = 0;
};

/// Runs the selection (empty = all) plus the checks it depends on. Reports
/// come back in registry order. Throws std::invalid_argument on unknown names.
RunResult run(const std::vector<std::string>& selection, const Definitions& defs, const RunConfig& cfg);
RunResult run(const std::vector<std::string>& selection, const RunConfig& cfg);

/// Re-evaluates the claims of every other report with the oracle.
VerificationReport oracle_crosscheck(const std::vector<VerificationReport>& reports, const RunConfig& cfg);

enum class ReportFormat { text, json };
/// JSON: {version, seed, checks: [{name, status, residual, millis, certificate}]}.
/// With timing off every millis field is 0, which makes the output byte-stable.
std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat f, std::uint64_t seed,
                           bool timing = true);
/// Writes the formatted reports; throws std::runtime_error on I/O failure.
void emit_report(const std::vector<VerificationReport>& reports, ReportFormat f, const std::string& path,
                 std::uint64_t seed, bool timing = true);

}  // namespace fhs
