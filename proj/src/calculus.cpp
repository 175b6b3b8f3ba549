#include "fhs/calculus.hpp"

#include <mutex>
#include <set>

namespace fhs {

namespace {

DiffExpr J(Dep d, std::initializer_list<BaseVar> vars) { return DiffExpr::jet(d, vars); }

constexpr auto t = BaseVar::t;
constexpr auto x = BaseVar::x;
constexpr auto xt = BaseVar::xt;
constexpr auto zt = BaseVar::zt;

// D_v of a single symbol: zero, the number one, or sign * symbol.
struct SymbolDerivative {
  int sign = 0;
  bool one = false;
  Symbol sym;
};

SymbolDerivative d_symbol(Symbol s, BaseVar v) {
  switch (s.kind()) {
    case Symbol::Kind::param:
      return {};
    case Symbol::Kind::base:
      if (s.base_var() == v) return {1, true, {}};
      return {};
    case Symbol::Kind::jet:
      return {1, false, Symbol::jet(s.dep(), s.multi_index().raised(v))};
    case Symbol::Kind::func: {
      int d1 = s.func_deriv(0), d2 = s.func_deriv(1);
      switch (s.func_name()) {
        case Func::a:
          if (v == xt) return {1, false, Symbol::func(Func::a, d1 + 1)};
          return {};
        case Func::b:
          if (v == zt) return {1, false, Symbol::func(Func::b, d1 + 1)};
          return {};
        case Func::f:
          if (v == t || v == x) return {1, false, Symbol::func(Func::f, d1 + 1, d2)};
          if (v == xt) return {1, false, Symbol::func(Func::f, d1, d2 + 1)};
          return {};
        case Func::g:
          if (v == t) return {1, false, Symbol::func(Func::g, d1 + 1, d2)};
          if (v == x) return {-1, false, Symbol::func(Func::g, d1 + 1, d2)};
          if (v == zt) return {1, false, Symbol::func(Func::g, d1, d2 + 1)};
          return {};
      }
    }
  }
  return {};
}

template <typename Fn>
DiffExpr derivation(const DiffExpr& e, Fn&& image_of) {
  // Applies the derivation determined by symbol images (DiffExpr or empty).
  ExprBuilder out;
  for (const auto& term : e.terms()) {
    const auto& fs = term.mono.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const DiffExpr* img = image_of(fs[i].sym);
      if (img == nullptr || img->is_zero()) continue;
      Monomial rest = term.mono;
      rest.mul(fs[i].sym, -1);
      out.add(*img, rest, term.coef * Rational(fs[i].exp));
    }
  }
  return out.build();
}

}  // namespace

DiffExpr A_expr() { return J(Dep::u, {xt, zt}); }
DiffExpr mu_expr() { return J(Dep::v, {zt}) + J(Dep::u, {x, zt}); }
DiffExpr nu_expr() { return J(Dep::v, {xt}) - J(Dep::u, {x, xt}); }

DiffExpr Q_expr() { return J(Dep::u, {x, x}) + Qt_expr(); }

DiffExpr Qt_expr() { return A_expr().inverse() * (mu_expr() * nu_expr() + DiffExpr(1)); }

DiffExpr total_derivative(const DiffExpr& e, BaseVar v, Mode mode) {
  if (v == BaseVar::t && mode == Mode::evolutionary) {
    throw ModeError("total_derivative: D_t is not defined in evolutionary mode; use flow_derivative");
  }
  ExprBuilder out;
  for (const auto& term : e.terms()) {
    const auto& fs = term.mono.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      SymbolDerivative d = d_symbol(fs[i].sym, v);
      if (d.sign == 0) continue;
      Monomial m = term.mono;
      m.mul(fs[i].sym, -1);
      if (!d.one) m.mul(d.sym, 1);
      out.add_term(std::move(m), term.coef * Rational(fs[i].exp * d.sign));
    }
  }
  return out.build();
}

DiffExpr total_derivative(const DiffExpr& e, const MultiIndex& mi, Mode mode) {
  DiffExpr r = e;
  for (auto v : kAllVars) {
    for (int i = 0; i < mi[v]; ++i) r = total_derivative(r, v, mode);
  }
  return r;
}

const DiffExpr& Q_derivative(const MultiIndex& mi) {
  static std::mutex mu;
  static std::map<MultiIndex, DiffExpr> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(mi);
  if (it != cache.end()) return it->second;
  DiffExpr r;
  if (mi.order() == 0) {
    r = Q_expr();
  } else {
    // Build from the cached entry with one fewer derivative.
    BaseVar last = BaseVar::x;
    for (auto v : kSpaceVars) {
      if (mi[v] > 0) last = v;
    }
    MultiIndex lower = mi.raised(last, -1);
    auto lit = cache.find(lower);
    DiffExpr base;
    if (lit != cache.end()) {
      base = lit->second;
    } else {
      base = total_derivative(Q_expr(), lower);
      cache.emplace(lower, base);
    }
    r = total_derivative(base, last);
  }
  return cache.emplace(mi, std::move(r)).first->second;
}

DiffExpr flow_derivative(const DiffExpr& e) {
  std::map<Symbol, DiffExpr> images;
  for (Symbol s : e.symbols()) {
    switch (s.kind()) {
      case Symbol::Kind::param:
        break;
      case Symbol::Kind::base:
        if (s.base_var() == t) images.emplace(s, DiffExpr(1));
        break;
      case Symbol::Kind::func: {
        SymbolDerivative d = d_symbol(s, t);
        if (d.sign != 0) images.emplace(s, DiffExpr(d.sym).scaled(Rational(d.sign)));
        break;
      }
      case Symbol::Kind::jet: {
        MultiIndex mi = s.multi_index();
        if (mi[t] != 0) throw ModeError("flow_derivative: t-jet in evolutionary expression");
        if (s.dep() == Dep::u) {
          images.emplace(s, DiffExpr::jet(Dep::v, mi));
        } else if (s.dep() == Dep::v) {
          images.emplace(s, Q_derivative(mi));
        } else {
          throw ModeError("flow_derivative: no flow for " + s.str());
        }
        break;
      }
    }
  }
  return derivation(e, [&](Symbol s) -> const DiffExpr* {
    auto it = images.find(s);
    return it == images.end() ? nullptr : &it->second;
  });
}

std::vector<Symbol> jets_of(const DiffExpr& e, Dep dep) {
  std::vector<Symbol> r;
  for (Symbol s : e.symbols()) {
    if (s.is_jet() && s.dep() == dep) r.push_back(s);
  }
  return r;
}

std::vector<Symbol> jets_of(const DiffExpr& e) {
  std::vector<Symbol> r;
  for (Symbol s : e.symbols()) {
    if (s.is_jet()) r.push_back(s);
  }
  return r;
}

DiffExpr euler_operator(const DiffExpr& e, Dep dep, Mode mode) {
  ExprBuilder out;
  for (Symbol s : jets_of(e, dep)) {
    MultiIndex mi = s.multi_index();
    if (mode == Mode::evolutionary && mi[t] != 0) {
      throw ModeError("euler_operator: t-jet in evolutionary expression");
    }
    DiffExpr p = total_derivative(e.partial(s), mi, mode);
    out.add(p, Rational(mi.order() % 2 == 0 ? 1 : -1));
  }
  return out.build();
}

DiffExpr frechet_derivative(const DiffExpr& e, const Characteristic& c, Mode mode) {
  return frechet_derivative(e, {{Dep::u, c.phi}, {Dep::v, c.psi}}, mode);
}

DiffExpr frechet_derivative(const DiffExpr& e, const std::map<Dep, DiffExpr>& dirs, Mode mode) {
  ExprBuilder out;
  for (Symbol s : jets_of(e)) {
    auto it = dirs.find(s.dep());
    if (it == dirs.end()) continue;
    out.add(e.partial(s) * total_derivative(it->second, s.multi_index(), mode));
  }
  return out.build();
}

DiffExpr equation_residual() {
  DiffExpr utt_m_uxx = J(Dep::u, {t, t}) - J(Dep::u, {x, x});
  DiffExpr p = J(Dep::u, {t, zt}) + J(Dep::u, {x, zt});
  DiffExpr q = J(Dep::u, {t, xt}) - J(Dep::u, {x, xt});
  return utt_m_uxx * A_expr() - p * q - DiffExpr(1);
}

DiffExpr u_tt_rule() {
  DiffExpr p = J(Dep::u, {t, zt}) + J(Dep::u, {x, zt});
  DiffExpr q = J(Dep::u, {t, xt}) - J(Dep::u, {x, xt});
  return J(Dep::u, {x, x}) + A_expr().inverse() * (p * q + DiffExpr(1));
}

DiffExpr reduce_with(const DiffExpr& e, const std::map<Dep, DiffExpr>& rules) {
  std::map<Symbol, DiffExpr> memo;
  // Value of dep_J for t-count >= 2, free of such jets.
  std::function<const DiffExpr&(Symbol)> value = [&](Symbol s) -> const DiffExpr& {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    MultiIndex mi = s.multi_index();
    DiffExpr r;
    if (mi[t] == 2) {
      MultiIndex rest = mi;
      rest[t] = 0;
      r = total_derivative(rules.at(s.dep()), rest, Mode::full_jet);
    } else {
      Symbol lower = Symbol::jet(s.dep(), mi.raised(t, -1));
      DiffExpr d = total_derivative(value(lower), t, Mode::full_jet);
      r = d.substitute([&](Symbol y) -> std::optional<DiffExpr> {
        if (y.is_jet() && rules.count(y.dep()) && y.multi_index()[t] >= 2) return value(y);
        return std::nullopt;
      });
    }
    return memo.emplace(s, std::move(r)).first->second;
  };
  return e.substitute([&](Symbol y) -> std::optional<DiffExpr> {
    if (y.is_jet() && rules.count(y.dep()) && y.multi_index()[t] >= 2) return value(y);
    return std::nullopt;
  });
}

DiffExpr reduce_mod_equation(const DiffExpr& e) { return reduce_with(e, {{Dep::u, u_tt_rule()}}); }

bool is_divergence(const DiffExpr& d) {
  std::set<Dep> deps;
  for (Symbol s : jets_of(d)) deps.insert(s.dep());
  for (Dep dep : deps) {
    if (!euler_operator(d, dep).is_zero()) return false;
  }
  return true;
}

bool equals_mod_divergence(const DiffExpr& d1, const DiffExpr& d2) { return is_divergence(d1 - d2); }

DiffExpr homotopy_integrate(const DiffExpr& Fu, const DiffExpr& Fv) {
  ExprBuilder out;
  auto add = [&](const DiffExpr& F, Dep dep) {
    DiffExpr field = DiffExpr::jet(dep);
    for (const auto& term : F.terms()) {
      int deg = 0;
      for (const auto& f : term.mono.factors()) {
        if (f.sym.is_jet()) deg += f.exp;
      }
      // Integrand dep * F(lambda) carries lambda^deg.
      if (deg + 1 <= 0) {
        throw NotExact("homotopy_integrate: non-polynomial integrand in the homotopy parameter");
      }
      out.add(field, term.mono, term.coef / Rational(deg + 1));
    }
  };
  add(Fu, Dep::u);
  add(Fv, Dep::v);
  DiffExpr h = out.build();
  if (euler_operator(h, Dep::u) != Fu || euler_operator(h, Dep::v) != Fv) {
    throw NotExact("homotopy_integrate: pair is not an Euler-Lagrange expression");
  }
  return h;
}

}  // namespace fhs
