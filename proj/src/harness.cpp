#include "fhs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "fhs/hamiltonian.hpp"
#include "fhs/multivector.hpp"
#include "fhs/oracle.hpp"
#include "fhs/symmetry.hpp"

namespace fhs {

namespace {

using Fn = std::function<VerificationReport(const Definitions&, const RunConfig&)>;

Fn plain(VerificationReport (*f)(const Definitions&)) {
  return [f](const Definitions& d, const RunConfig&) { return f(d); };
}

std::vector<CheckSpec> make_registry() {
  std::vector<CheckSpec> r;
  auto add = [&](std::string name, Fn fn, std::vector<std::string> req = {}) {
    r.push_back({std::move(name), std::move(req), {}, true, std::move(fn)});
  };
  add("k-from-lagrangian", plain(check_k_from_lagrangian));
  add("k-inverse", plain(check_k_inverse));
  add("skew-all", plain(check_skew_all));
  add("flow-j0", [](const Definitions& d, const RunConfig&) { return check_flow(d, "j0"); });
  add("flow-jplus", [](const Definitions& d, const RunConfig&) { return check_flow(d, "jplus"); });
  add("flow-jminus", [](const Definitions& d, const RunConfig&) { return check_flow(d, "jminus"); });
  add("symmetries-all", plain(verify_symmetries));
  add("commutator-table", plain(verify_commutator_table));
  add("noether-all", plain(check_noether_all));
  add("noether-x5-negative", plain(check_noether_x5));
  add("conservation", plain(check_conservation));
  add("lax-identities", [](const Definitions& d, const RunConfig&) { return lax_identities(d); });
  add("recursion-compose", plain(check_recursion_compose));
  add("discrete-maps", plain(check_discrete_maps));
  add("reps-sum", plain(check_reps_sum));
  add("omega-closed", plain(check_omega_closed));
  add("jacobi-pencil", plain(check_jacobi_pencil), {"skew-all"});
  add("jacobi-mutants", plain(check_jacobi_mutants));
  CheckSpec oracle{"oracle-crosscheck", {}, {}, true, {}};
  for (const auto& c : r) oracle.runs_after.push_back(c.name);
  r.push_back(std::move(oracle));
  return r;
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<CheckSpec>& registry() {
  static const std::vector<CheckSpec> r = make_registry();
  return r;
}

const CheckSpec& find_check(std::string_view name) {
  for (const auto& c : registry()) {
    if (c.name == name) return c;
  }
  throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

std::string resolve_defs_path(const std::string& fallback) {
  const char* env = std::getenv("FHS_DEFS");
  return env != nullptr && *env != '\0' ? std::string(env) : fallback;
}

VerificationReport oracle_crosscheck(const std::vector<VerificationReport>& reports, const RunConfig& cfg) {
  VerificationReport rep;
  rep.name = "oracle-crosscheck";
  std::size_t claims = 0;
  for (const auto& r : reports) {
    if (r.name == rep.name) continue;
    claims += r.claims.size() + r.wedge_claims.size();
    VerificationReport one = check_claims(r, cfg.oracle_trials, cfg.seed);
    for (const auto& it : one.items) {
      if (!it.ok) rep.check(r.name + ": " + it.label, false);
    }
    if (!one.passed()) rep.residual += one.residual;
  }
  rep.check("zero disagreements", rep.residual.empty());
  rep.certificate = std::to_string(claims) + " claims at " + std::to_string(cfg.oracle_trials) + " valuations";
  return rep;
}

RunResult run(const std::vector<std::string>& selection, const Definitions& defs, const RunConfig& cfg) {
  const auto& reg = registry();
  std::set<std::string> wanted;
  std::vector<std::string> todo = selection;
  if (todo.empty()) {
    for (const auto& c : reg) todo.push_back(c.name);
  }
  while (!todo.empty()) {
    std::string n = todo.back();
    todo.pop_back();
    const CheckSpec& c = find_check(n);
    if (!wanted.insert(n).second) continue;
    for (const auto& d : c.requires_pass) todo.push_back(d);
  }
  // Ordering-only dependencies apply within the selection.
  auto deps_of = [&](const CheckSpec& c) {
    std::vector<std::string> out = c.requires_pass;
    for (const auto& d : c.runs_after) {
      if (wanted.count(d) != 0) out.push_back(d);
    }
    return out;
  };

  std::map<std::string, VerificationReport> done;
  std::set<std::string> started;
  std::mutex mu;
  std::condition_variable cv;

  auto execute = [&](const CheckSpec& c) {
    VerificationReport rep;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> blocked;
    {
      std::lock_guard lock(mu);
      for (const auto& d : c.requires_pass) {
        if (!done.at(d).passed()) blocked.push_back(d);
      }
    }
    if (!blocked.empty()) {
      rep.status = Status::skipped;
      for (const auto& b : blocked) rep.residual += "requires " + b + ", which did not pass\n";
    } else if (c.name == "oracle-crosscheck") {
      std::vector<VerificationReport> prior;
      {
        std::lock_guard lock(mu);
        for (const auto& [n, r] : done) prior.push_back(r);
      }
      rep = oracle_crosscheck(prior, cfg);
    } else {
      try {
        rep = c.run(defs, cfg);
      } catch (const std::exception& e) {
        rep = VerificationReport{};
        rep.check("completed", false, std::string("error: ") + e.what());
      }
    }
    rep.name = c.name;
    rep.seed = cfg.seed;
    rep.millis = elapsed_ms(t0);
    std::lock_guard lock(mu);
    done.emplace(c.name, std::move(rep));
  };

  auto next_ready = [&]() -> const CheckSpec* {
    for (const auto& c : reg) {
      if (wanted.count(c.name) == 0 || started.count(c.name) != 0) continue;
      auto deps = deps_of(c);
      if (std::all_of(deps.begin(), deps.end(), [&](const std::string& d) { return done.count(d) != 0; })) return &c;
    }
    return nullptr;
  };

  auto worker = [&] {
    std::unique_lock lock(mu);
    while (started.size() < wanted.size()) {
      const CheckSpec* c = next_ready();
      if (c == nullptr) {
        cv.wait(lock);
        continue;
      }
      started.insert(c->name);
      lock.unlock();
      execute(*c);
      lock.lock();
      cv.notify_all();
    }
  };

  int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  RunResult res;
  for (const auto& c : reg) {
    auto it = done.find(c.name);
    if (it == done.end()) continue;
    if (c.gating && !it->second.passed()) res.exit_code = 1;
    res.reports.push_back(std::move(it->second));
  }
  return res;
}

RunResult run(const std::vector<std::string>& selection, const RunConfig& cfg) {
  Definitions defs = load_defs(cfg.defs_path);
  return run(selection, defs, cfg);
}

std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat f, std::uint64_t seed,
                           bool timing) {
  if (f == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["seed"] = seed;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
      nlohmann::ordered_json c;
      c["name"] = r.name;
      c["status"] = std::string(status_name(r.status));
      c["residual"] = r.residual;
      c["millis"] = timing ? r.millis : 0;
      c["certificate"] = r.certificate;
      j["checks"].push_back(std::move(c));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os << std::left << std::setw(22) << "check" << std::setw(18) << "status" << std::right << std::setw(9) << "ms"
     << "  certificate\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(22) << r.name << std::setw(18) << status_name(r.status) << std::right << std::setw(9)
       << (timing ? r.millis : 0) << "  " << r.certificate << "\n";
    std::istringstream res(r.residual);
    std::string line;
    while (std::getline(res, line)) os << "    " << line << "\n";
  }
  return os.str();
}

void emit_report(const std::vector<VerificationReport>& reports, ReportFormat f, const std::string& path,
                 std::uint64_t seed, bool timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << format_reports(reports, f, seed, timing);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fhs
