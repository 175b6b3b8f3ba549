#include "fhs/report.hpp"

#include "fhs/mathdsl.hpp"

namespace fhs {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::nonlocal_residue: return "nonlocal-residue";
    case Status::skipped: return "skipped";
  }
  return "?";
}

bool VerificationReport::check(const std::string& label, bool ok, const std::string& res) {
  items.push_back({label, ok});
  if (!ok) {
    if (status == Status::pass) status = Status::fail;
    residual += label + ": " + (res.empty() ? "failed" : res) + "\n";
  }
  return ok;
}

bool VerificationReport::expect_equal(const std::string& label, const DiffExpr& lhs, const DiffExpr& rhs) {
  claims.push_back({label, lhs, rhs});
  if (lhs == rhs) return check(label, true);
  return check(label, false, print(lhs - rhs));
}

bool VerificationReport::expect_equal(const std::string& label, const WedgeExpr& lhs, const WedgeExpr& rhs) {
  wedge_claims.push_back({label, lhs, rhs});
  if (lhs == rhs) return check(label, true);
  return check(label, false, (lhs - rhs).str());
}

void VerificationReport::nonlocal(const std::string& label, const std::string& what) {
  items.push_back({label, false});
  if (status != Status::fail) status = Status::nonlocal_residue;
  residual += label + ": nonlocal residue: " + what + "\n";
}

void VerificationReport::merge(const VerificationReport& o, const std::string& prefix) {
  for (const auto& it : o.items) items.push_back({prefix + it.label, it.ok});
  for (const auto& n : o.notes) notes.push_back(prefix + n);
  for (const auto& c : o.claims) claims.push_back({prefix + c.label, c.lhs, c.rhs});
  for (const auto& c : o.wedge_claims) wedge_claims.push_back({prefix + c.label, c.lhs, c.rhs});
  if (!o.residual.empty()) {
    std::string r = o.residual;
    std::size_t pos = 0;
    while (pos < r.size()) {
      std::size_t nl = r.find('\n', pos);
      if (nl == std::string::npos) nl = r.size();
      residual += prefix + r.substr(pos, nl - pos) + "\n";
      pos = nl + 1;
    }
  }
  if (!o.certificate.empty()) certificate += (certificate.empty() ? "" : "; ") + o.certificate;
  if (o.status == Status::fail) {
    status = Status::fail;
  } else if (o.status == Status::nonlocal_residue && status == Status::pass) {
    status = Status::nonlocal_residue;
  }
}

}  // namespace fhs
