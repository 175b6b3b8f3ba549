#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fhs/rational.hpp"
#include "fhs/symbol.hpp"

namespace fhs {

struct Factor {
  Symbol sym;
  int exp = 0;
  bool operator==(const Factor&) const = default;
};

/// Product of symbols with nonzero integer exponents, sorted by symbol.
/// Negative exponents make DiffExpr a Laurent polynomial.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Factor, 6>;

  Monomial() = default;
  explicit Monomial(Symbol s, int e = 1);

  const Storage& factors() const { return f_; }
  bool is_one() const { return f_.empty(); }
  int degree_of(Symbol s) const;
  bool has_negative_exponent() const;

  Monomial operator*(const Monomial& o) const;
  /// Multiplies by s^e in place.
  void mul(Symbol s, int e);
  Monomial inverse() const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
  friend bool operator<(const Monomial& a, const Monomial& b);

  std::size_t hash() const;
  std::string str() const;

 private:
  Storage f_;
};

struct Term {
  Monomial mono;
  Rational coef;
};

/// Exact differential function: a finite sum of rational multiples of
/// Laurent monomials in jets, base variables, function symbols and
/// parameters. Terms are kept sorted by monomial with nonzero coefficients,
/// so zero is the empty sum and equality is syntactic.
class DiffExpr {
 public:
  DiffExpr() = default;
  DiffExpr(Rational c);  // NOLINT(google-explicit-constructor)
  DiffExpr(std::int64_t c) : DiffExpr(Rational(c)) {}  // NOLINT
  explicit DiffExpr(Symbol s, int e = 1);
  DiffExpr(const Monomial& m, Rational c);

  static DiffExpr jet(Dep d, const MultiIndex& mi = {}) { return DiffExpr(Symbol::jet(d, mi)); }
  static DiffExpr jet(Dep d, std::initializer_list<BaseVar> vars) {
    return DiffExpr(Symbol::jet(d, MultiIndex::of(vars)));
  }
  static DiffExpr var(BaseVar v) { return DiffExpr(Symbol::base(v)); }
  static DiffExpr param(std::string_view n) { return DiffExpr(Symbol::param(n)); }
  static DiffExpr func(Func f, int d1 = 0, int d2 = 0) { return DiffExpr(Symbol::func(f, d1, d2)); }

  /// Builds a canonical expression from arbitrary (unsorted, repeated) terms.
  static DiffExpr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// True if free of jets, base variables and function symbols.
  bool is_constant() const;
  bool is_number() const;
  std::optional<Rational> as_number() const;
  bool is_monomial() const { return terms_.size() == 1; }

  DiffExpr operator-() const;
  DiffExpr& operator+=(const DiffExpr& o);
  DiffExpr& operator-=(const DiffExpr& o);
  DiffExpr& operator*=(const DiffExpr& o);
  friend DiffExpr operator+(DiffExpr a, const DiffExpr& b) { return a += b; }
  friend DiffExpr operator-(DiffExpr a, const DiffExpr& b) { return a -= b; }
  friend DiffExpr operator*(const DiffExpr& a, const DiffExpr& b);
  DiffExpr scaled(const Rational& c) const;
  DiffExpr times(const Monomial& m, const Rational& c) const;

  /// Integer power; negative powers only for single-term expressions.
  DiffExpr pow(int e) const;
  /// Exact inverse of a single-term expression; throws otherwise.
  DiffExpr inverse() const;

  friend bool operator==(const DiffExpr& a, const DiffExpr& b);
  friend bool operator!=(const DiffExpr& a, const DiffExpr& b) { return !(a == b); }
  friend bool operator<(const DiffExpr& a, const DiffExpr& b);

  /// Partial derivative with respect to a symbol, treating all symbols as
  /// independent.
  DiffExpr partial(Symbol s) const;
  std::set<Symbol> symbols() const;
  bool depends_on(Symbol s) const;
  /// Highest exponent of s over all terms (0 if absent); lowest likewise.
  int max_degree(Symbol s) const;
  int min_degree(Symbol s) const;

  /// Replaces symbols by expressions. Symbols mapped to nullopt stay as they
  /// are; a symbol with a negative exponent must map to a single-term image.
  DiffExpr substitute(const std::function<std::optional<DiffExpr>(Symbol)>& image) const;
  DiffExpr substitute(Symbol s, const DiffExpr& value) const;

  /// Splits by the exponent of `s`: coefficient of s^k for each k present.
  std::vector<std::pair<int, DiffExpr>> collect(Symbol s) const;

  /// Common denominator as a monomial (product of negative powers).
  Monomial denominator() const;
  DiffExpr numerator() const;

  std::size_t hash() const;
  /// Canonical DSL text (see mathdsl).
  std::string str() const;

 private:
  std::vector<Term> terms_;
};

/// Accumulates terms and normalizes once; used for large sums.
class ExprBuilder {
 public:
  void add(const DiffExpr& e) { terms_.insert(terms_.end(), e.terms().begin(), e.terms().end()); }
  void add(const DiffExpr& e, const Rational& c);
  void add(const DiffExpr& e, const Monomial& m, const Rational& c);
  void add_term(Monomial m, Rational c) { terms_.push_back({std::move(m), std::move(c)}); }
  DiffExpr build() { return DiffExpr::from_terms(std::move(terms_)); }
  std::size_t pending() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
};

}  // namespace fhs
