#include "fhs/oracle.hpp"

#include <map>
#include <random>


namespace fhs {

const Rational& Valuation::value(Symbol s) {
  auto it = cache_.find(s.key());
  if (it != cache_.end()) return it->second;
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32), attempt_,
                    static_cast<std::uint32_t>(s.key()), static_cast<std::uint32_t>(s.key() >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> num(-99, 99), den(1, 9);
  int n = num(rng);
  int d = den(rng);
  return cache_.emplace(s.key(), Rational(n, d)).first->second;
}

std::optional<Rational> Valuation::eval(const DiffExpr& e) {
  Rational sum;
  for (const auto& t : e.terms()) {
    Rational p = t.coef;
    for (const auto& f : t.mono.factors()) {
      const Rational& x = value(f.sym);
      if (f.exp < 0 && x.is_zero()) return std::nullopt;
      p *= x.pow(f.exp);
    }
    sum += p;
  }
  return sum;
}

namespace {

// Evaluates every coefficient of one trial, resampling the whole valuation
// when a denominator vanishes. Returns false once the cap is exhausted.
template <class Fn>
bool with_valuation(std::uint64_t seed, std::uint64_t trial, Fn&& fn) {
  for (std::uint32_t attempt = 0; attempt < kResampleCap; ++attempt) {
    Valuation val(seed, trial, attempt);
    if (fn(val)) return true;
  }
  return false;
}

std::string trial_failure(int trial, const std::string& what) {
  return "trial " + std::to_string(trial) + ": " + what;
}

}  // namespace

namespace {

using Values = std::map<WedgeExpr::Mono, Rational>;

// Adds sign * value of every coefficient of w; false on a zero denominator.
bool accumulate(Valuation& v, const WedgeExpr& w, int sign, Values& out) {
  for (const auto& [m, c] : w.terms()) {
    auto r = v.eval(c);
    if (!r) return false;
    Rational& slot = out[m];
    if (sign > 0) {
      slot += *r;
    } else {
      slot -= *r;
    }
  }
  return true;
}

std::string describe(const WedgeExpr::Mono& m, const Rational& r) {
  if (m.empty()) return "value " + r.str();
  std::string ms;
  for (auto f : m) ms += (ms.empty() ? "" : " & ") + f.str();
  return "coefficient of " + ms + " is " + r.str();
}

VerificationReport compare(const WedgeExpr& lhs, const WedgeExpr& rhs, int trials, std::uint64_t seed,
                           const std::string& name) {
  VerificationReport rep;
  rep.name = name;
  rep.seed = seed;
  for (int t = 0; t < trials; ++t) {
    Values diff;
    bool ok = with_valuation(seed, static_cast<std::uint64_t>(t), [&](Valuation& v) {
      diff.clear();
      return accumulate(v, lhs, 1, diff) && accumulate(v, rhs, -1, diff);
    });
    if (!ok) {
      rep.check("valuation", false, trial_failure(t, "resample cap exhausted"));
      return rep;
    }
    for (const auto& [m, r] : diff) {
      if (!r.is_zero()) {
        rep.check("equal at every trial", false, trial_failure(t, describe(m, r)));
        return rep;
      }
    }
  }
  rep.check("equal at every trial", true);
  return rep;
}

}  // namespace

VerificationReport random_check(const DiffExpr& e, int trials, std::uint64_t seed) {
  return random_compare(e, DiffExpr(), trials, seed);
}

VerificationReport random_compare(const DiffExpr& lhs, const DiffExpr& rhs, int trials, std::uint64_t seed) {
  return compare(WedgeExpr::scalar(lhs), WedgeExpr::scalar(rhs), trials, seed, "random-check");
}

VerificationReport wedge_random_check(const WedgeExpr& w, int trials, std::uint64_t seed) {
  return compare(w, WedgeExpr(), trials, seed, "wedge-random-check");
}

VerificationReport wedge_random_compare(const WedgeExpr& lhs, const WedgeExpr& rhs, int trials, std::uint64_t seed) {
  return compare(lhs, rhs, trials, seed, "wedge-random-check");
}

VerificationReport check_claims(const VerificationReport& r, int trials, std::uint64_t seed) {
  VerificationReport out;
  out.name = r.name;
  out.seed = seed;
  for (const auto& c : r.claims) {
    VerificationReport one = random_compare(c.lhs, c.rhs, trials, seed);
    out.check(c.label, one.passed() == (c.lhs == c.rhs), one.residual);
  }
  for (const auto& c : r.wedge_claims) {
    VerificationReport one = wedge_random_compare(c.lhs, c.rhs, trials, seed);
    out.check(c.label, one.passed() == (c.lhs == c.rhs), one.residual);
  }
  return out;
}

}  // namespace fhs
