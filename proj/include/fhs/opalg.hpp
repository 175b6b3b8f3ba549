#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhs/calculus.hpp"

namespace fhs {

/// Exponents of D_t, D_x, D_xt, D_zt. Letters of distinct variables commute.
using Word = std::array<std::int8_t, 4>;

bool is_zero_word(const Word& w);

/// One product c * m0 . N1 . m1 . ... . Nk . mk . L with monomials mi,
/// words Ni of inverse letters only and a final word L of local letters.
/// Canonical shape: no variable has both a local letter in L and an inverse
/// letter in some Ni; factors of mi free of every variable of Ni stand to
/// the left of Ni; m1..m(k-1) differ from 1.
struct Composition {
  std::vector<Monomial> ms;
  std::vector<Word> ns;
  Word local{};

  std::size_t depth() const { return ns.size(); }
  bool is_local() const { return ns.empty(); }
  friend bool operator<(const Composition& a, const Composition& b);
  friend bool operator==(const Composition& a, const Composition& b) {
    return a.ms == b.ms && a.ns == b.ns && a.local == b.local;
  }
};

struct NonlocalResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar nonlocal pseudo-differential operator in normal form.
class PseudoDiffOp {
 public:
  using Terms = std::map<Composition, Rational>;

  PseudoDiffOp() = default;
  /// Multiplication operator.
  PseudoDiffOp(const DiffExpr& e);  // NOLINT(google-explicit-constructor)
  PseudoDiffOp(std::int64_t c) : PseudoDiffOp(DiffExpr(c)) {}  // NOLINT

  /// D_v^power; negative powers give inverse letters (v != t).
  static PseudoDiffOp letter(BaseVar v, int power = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_local() const;
  /// True if every composition is a pure multiplication operator.
  bool is_multiplication() const;
  DiffExpr as_multiplication() const;
  /// Coefficient of each local word; requires is_local().
  std::map<Word, DiffExpr> local_coefficients() const;

  PseudoDiffOp operator-() const;
  PseudoDiffOp& operator+=(const PseudoDiffOp& o);
  PseudoDiffOp& operator-=(const PseudoDiffOp& o);
  friend PseudoDiffOp operator+(PseudoDiffOp a, const PseudoDiffOp& b) { return a += b; }
  friend PseudoDiffOp operator-(PseudoDiffOp a, const PseudoDiffOp& b) { return a -= b; }
  /// Composition P . Q.
  friend PseudoDiffOp operator*(const PseudoDiffOp& a, const PseudoDiffOp& b);
  PseudoDiffOp scaled(const Rational& c) const;
  PseudoDiffOp pow(int n) const;

  friend bool operator==(const PseudoDiffOp& a, const PseudoDiffOp& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const PseudoDiffOp& a, const PseudoDiffOp& b) { return !(a == b); }

  PseudoDiffOp adjoint() const;
  /// Applies a symbol substitution to every coefficient and renormalizes.
  PseudoDiffOp map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const;

  std::string str() const;

  static PseudoDiffOp from_terms(const Terms& raw);

 private:
  Terms terms_;
};

/// Solves D_v W = target for a local W; nullopt if the candidate search
/// finds none within `cap` candidate terms.
std::optional<DiffExpr> antiderivative(const DiffExpr& target, BaseVar v, std::size_t cap = 500);

DiffExpr apply(const PseudoDiffOp& P, const DiffExpr& e);

/// 2x2 matrix of scalar operators.
class MatrixOp {
 public:
  MatrixOp() = default;
  MatrixOp(PseudoDiffOp a11, PseudoDiffOp a12, PseudoDiffOp a21, PseudoDiffOp a22)
      : e_{std::move(a11), std::move(a12), std::move(a21), std::move(a22)} {}
  static MatrixOp identity() { return MatrixOp(1, 0, 0, 1); }

  PseudoDiffOp& at(int i, int j) { return e_[static_cast<std::size_t>(2 * i + j)]; }
  const PseudoDiffOp& at(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }

  MatrixOp operator-() const;
  friend MatrixOp operator+(const MatrixOp& a, const MatrixOp& b);
  friend MatrixOp operator-(const MatrixOp& a, const MatrixOp& b);
  friend MatrixOp operator*(const MatrixOp& a, const MatrixOp& b);
  MatrixOp scaled(const Rational& c) const;
  MatrixOp times(const DiffExpr& c) const;
  friend bool operator==(const MatrixOp& a, const MatrixOp& b) { return a.e_ == b.e_; }
  friend bool operator!=(const MatrixOp& a, const MatrixOp& b) { return !(a == b); }
  bool is_zero() const;

  MatrixOp adjoint() const;
  MatrixOp map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const;
  std::string str() const;

 private:
  std::array<PseudoDiffOp, 4> e_;
};

MatrixOp compose(const MatrixOp& P, const MatrixOp& Q);
MatrixOp adjoint(const MatrixOp& P);
bool operator_equals(const MatrixOp& P, const MatrixOp& Q);
bool is_skew_adjoint(const MatrixOp& P);

/// Applies a matrix operator to a column. Contributions of a row that sit
/// under the same inverse letter are combined before integrating, so a row
/// localizes whenever its total does.
std::array<DiffExpr, 2> apply(const MatrixOp& P, const std::array<DiffExpr, 2>& col);
Characteristic apply(const MatrixOp& P, const Characteristic& c);

/// Frechet derivative matrix of (F1, F2) with respect to (u, v).
MatrixOp frechet_operator(const DiffExpr& F1, const DiffExpr& F2);
/// Helmholtz condition: the Frechet derivative of (Fu, Fv) is self-adjoint.
bool is_helmholtz(const DiffExpr& Fu, const DiffExpr& Fv);

/// The discrete symmetry xt -> -zt, zt -> -xt, x -> -x, t -> t.
DiffExpr discrete_transform(const DiffExpr& e);
PseudoDiffOp discrete_transform(const PseudoDiffOp& P);
MatrixOp discrete_transform(const MatrixOp& P);
Characteristic discrete_transform(const Characteristic& c);

/// Whether symbol s has a nonzero total derivative in v.
bool depends_on_var(Symbol s, BaseVar v);

}  // namespace fhs
