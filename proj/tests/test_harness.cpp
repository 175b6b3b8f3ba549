#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fhs/harness.hpp"

using namespace fhs;

namespace {

const Definitions& defs() {
  static const Definitions d = load_defs(FHS_DEFS_PATH);
  return d;
}

RunConfig config(int jobs = 1) {
  RunConfig c;
  c.defs_path = FHS_DEFS_PATH;
  c.jobs = jobs;
  c.oracle_trials = 10;
  return c;
}

}  // namespace

TEST_CASE("registry") {
  CHECK(registry().size() == 19);
  CHECK(registry().front().name == "k-from-lagrangian");
  CHECK(registry().back().name == "oracle-crosscheck");
  CHECK(find_check("jacobi-pencil").requires_pass == std::vector<std::string>{"skew-all"});
  CHECK_THROWS_AS(find_check("no-such-check"), std::invalid_argument);
  CHECK_THROWS_AS(run({"no-such-check"}, defs(), config()), std::invalid_argument);
}

TEST_CASE("single check") {
  RunResult r = run({"k-inverse"}, defs(), config());
  REQUIRE(r.reports.size() == 1);
  CHECK(r.reports[0].name == "k-inverse");
  CHECK(r.reports[0].passed());
  CHECK(r.reports[0].seed == 1);
  CHECK(r.exit_code == 0);
}

TEST_CASE("dependencies are pulled in and run first") {
  RunResult r = run({"jacobi-pencil"}, defs(), config());
  REQUIRE(r.reports.size() == 2);
  CHECK(r.reports[0].name == "skew-all");
  CHECK(r.reports[1].name == "jacobi-pencil");
  CHECK(r.reports[1].passed());
}

TEST_CASE("a failing check sets the exit code") {
  RunResult r = run({"commutator-table", "k-inverse"}, defs(), config());
  REQUIRE(r.reports.size() == 2);
  // Registry order, not selection order.
  CHECK(r.reports[0].name == "k-inverse");
  CHECK(r.reports[0].passed());
  CHECK(r.reports[1].status == Status::fail);
  CHECK(r.exit_code == 1);
}

TEST_CASE("oracle crosscheck covers the selection") {
  RunResult r = run({"flow-j0", "oracle-crosscheck"}, defs(), config());
  REQUIRE(r.reports.size() == 2);
  CHECK(r.reports[1].name == "oracle-crosscheck");
  CHECK(r.reports[1].passed());
  CHECK(r.reports[1].certificate.find("at 10 valuations") != std::string::npos);
}

TEST_CASE("json layout") {
  auto empty = nlohmann::json::parse(format_reports({}, ReportFormat::json, 7));
  CHECK(empty["version"] == 1);
  CHECK(empty["seed"] == 7);
  CHECK(empty["checks"].empty());

  RunResult r = run({"k-inverse"}, defs(), config());
  auto j = nlohmann::json::parse(format_reports(r.reports, ReportFormat::json, 1, false));
  REQUIRE(j["checks"].size() == 1);
  const auto& c = j["checks"][0];
  CHECK(c["name"] == "k-inverse");
  CHECK(c["status"] == "pass");
  CHECK(c["residual"] == "");
  CHECK(c["millis"] == 0);
  CHECK(c.contains("certificate"));
}

TEST_CASE("json is byte-stable without timing") {
  RunResult a = run({}, defs(), config(1));
  RunResult b = run({}, defs(), config(4));
  CHECK(a.reports.size() == 19);
  std::string ja = format_reports(a.reports, ReportFormat::json, 1, false);
  CHECK(ja == format_reports(b.reports, ReportFormat::json, 1, false));
  std::string path = "test_harness_report.json";
  emit_report(a.reports, ReportFormat::json, path, 1, false);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == ja);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_report(a.reports, ReportFormat::json, "/nonexistent/dir/r.json", 1), std::runtime_error);
}

TEST_CASE("text report") {
  RunResult r = run({"commutator-table"}, defs(), config());
  std::string t = format_reports(r.reports, ReportFormat::text, 1, false);
  CHECK(t.find("commutator-table") != std::string::npos);
  CHECK(t.find("    [X4,Ya]") != std::string::npos);
}

TEST_CASE("FHS_DEFS overrides the default path") {
  ::setenv("FHS_DEFS", "/tmp/other.defs", 1);
  CHECK(resolve_defs_path("x") == "/tmp/other.defs");
  ::unsetenv("FHS_DEFS");
  CHECK(resolve_defs_path("x") == "x");
}
