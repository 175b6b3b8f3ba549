#pragma once

#include <random>

#include "fhs/opalg.hpp"

namespace gen {

using fhs::BaseVar;
using fhs::Dep;
using fhs::DiffExpr;
using fhs::MultiIndex;
using fhs::Rational;

inline MultiIndex random_index(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> ord(0, max_order), var(1, 3);
  MultiIndex mi;
  int n = ord(rng);
  for (int i = 0; i < n; ++i) mi = mi.raised(static_cast<BaseVar>(var(rng)));
  return mi;
}

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  int n = 0;
  while (n == 0) n = num(rng);
  return Rational(n, den(rng));
}

/// Random polynomial in u, v jets (spatial), optionally with powers of 1/A.
inline DiffExpr random_expr(std::mt19937_64& rng, int terms = 3, int max_order = 2, bool inverse_A = false) {
  std::uniform_int_distribution<int> nfac(0, 3), dep(0, 1), coin(0, 3);
  DiffExpr e;
  for (int i = 0; i < terms; ++i) {
    DiffExpr m(random_rational(rng));
    int k = nfac(rng);
    for (int j = 0; j < k; ++j) {
      m *= DiffExpr::jet(static_cast<Dep>(dep(rng)), random_index(rng, max_order));
    }
    if (inverse_A && coin(rng) == 0) {
      m *= DiffExpr::jet(Dep::u, {BaseVar::xt, BaseVar::zt}).inverse();
    }
    e += m;
  }
  return e;
}

/// Random single-term differential function with small jets.
inline DiffExpr random_monomial(std::mt19937_64& rng, bool inverse_A = false) {
  std::uniform_int_distribution<int> nfac(0, 2), dep(0, 1), coin(0, 2);
  DiffExpr m(random_rational(rng));
  int k = nfac(rng);
  for (int j = 0; j < k; ++j) m *= DiffExpr::jet(static_cast<Dep>(dep(rng)), random_index(rng, 2));
  if (inverse_A && coin(rng) == 0) m *= DiffExpr::jet(Dep::u, {BaseVar::xt, BaseVar::zt}).inverse();
  return m;
}

/// Random operator: a sum of m0 . letter . m1 products. Inverse letters are
/// drawn only when `nonlocal` is set.
inline fhs::PseudoDiffOp random_op(std::mt19937_64& rng, bool nonlocal, int terms = 2) {
  std::uniform_int_distribution<int> var(1, 3), pw(nonlocal ? -1 : 0, 1), coin(0, 1);
  fhs::PseudoDiffOp r;
  for (int i = 0; i < terms; ++i) {
    auto v = static_cast<BaseVar>(var(rng));
    int p = pw(rng);
    if (p < 0 && v == BaseVar::x) v = BaseVar::xt;
    fhs::PseudoDiffOp letter = p == 0 ? fhs::PseudoDiffOp(1) : fhs::PseudoDiffOp::letter(v, p);
    fhs::PseudoDiffOp right = coin(rng) ? fhs::PseudoDiffOp(random_monomial(rng)) : fhs::PseudoDiffOp(1);
    r += fhs::PseudoDiffOp(random_monomial(rng, true)) * letter * right;
  }
  return r;
}

}  // namespace gen
