#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "fhs/report.hpp"

namespace fhs {

/// Exact random values for every symbol, derived from (seed, trial, attempt,
/// symbol). Numerators lie in [-99, 99] and denominators in [1, 9].
class Valuation {
 public:
  Valuation(std::uint64_t seed, std::uint64_t trial, std::uint32_t attempt = 0)
      : seed_(seed), trial_(trial), attempt_(attempt) {}

  const Rational& value(Symbol s);
  /// nullopt if a symbol with a negative exponent evaluates to zero.
  std::optional<Rational> eval(const DiffExpr& e);

 private:
  std::uint64_t seed_, trial_;
  std::uint32_t attempt_;
  std::unordered_map<std::uint64_t, Rational> cache_;
};

inline constexpr int kDefaultTrials = 100;
inline constexpr std::uint32_t kResampleCap = 32;

/// Passes iff e evaluates to exactly 0 at every trial.
VerificationReport random_check(const DiffExpr& e, int trials, std::uint64_t seed);
/// Evaluates both sides separately and compares the values.
VerificationReport random_compare(const DiffExpr& lhs, const DiffExpr& rhs, int trials, std::uint64_t seed);
/// Coefficients evaluated at each trial; wedge monomials are basis elements.
VerificationReport wedge_random_check(const WedgeExpr& w, int trials, std::uint64_t seed);
VerificationReport wedge_random_compare(const WedgeExpr& lhs, const WedgeExpr& rhs, int trials, std::uint64_t seed);
/// Re-evaluates every claim of a report side by side. An item fails when the
/// oracle and the symbolic comparison disagree.
VerificationReport check_claims(const VerificationReport& r, int trials, std::uint64_t seed);

}  // namespace fhs
