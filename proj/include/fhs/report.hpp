#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fhs/wedge.hpp"

namespace fhs {

enum class Status { pass, fail, nonlocal_residue, skipped };

std::string_view status_name(Status s);

/// An equality established symbolically, kept for re-evaluation.
struct Claim {
  std::string label;
  DiffExpr lhs;
  DiffExpr rhs;
};

struct WedgeClaim {
  std::string label;
  WedgeExpr lhs;
  WedgeExpr rhs;
};

struct ReportItem {
  std::string label;
  bool ok = true;
};

struct VerificationReport {
  std::string name;
  Status status = Status::pass;
  std::string residual;
  std::string certificate;
  std::int64_t millis = 0;
  std::uint64_t seed = 0;
  std::vector<ReportItem> items;
  std::vector<std::string> notes;
  std::vector<Claim> claims;
  std::vector<WedgeClaim> wedge_claims;

  bool passed() const { return status == Status::pass; }

  /// Records one sub-check; a failure sets the status and appends the residual.
  bool check(const std::string& label, bool ok, const std::string& residual = "");
  /// Checks lhs == rhs and keeps the pair as a claim.
  bool expect_equal(const std::string& label, const DiffExpr& lhs, const DiffExpr& rhs);
  bool expect_equal(const std::string& label, const WedgeExpr& lhs, const WedgeExpr& rhs);
  void note(const std::string& text) { notes.push_back(text); }
  void nonlocal(const std::string& label, const std::string& what);
  /// Folds another report's items, claims and status into this one.
  void merge(const VerificationReport& other, const std::string& prefix = "");
};

}  // namespace fhs
