#include "fhs/symmetry.hpp"

#include <functional>

namespace fhs {

namespace {

constexpr auto t = BaseVar::t;
constexpr auto x = BaseVar::x;
constexpr auto xt = BaseVar::xt;
constexpr auto zt = BaseVar::zt;

DiffExpr jet(Dep d, std::initializer_list<BaseVar> vars = {}) { return DiffExpr::jet(d, vars); }

bool is_point(const DiffExpr& e) {
  for (Symbol s : e.symbols()) {
    if (s.is_jet() && (s.multi_index().order() > 0 || (s.dep() != Dep::u && s.dep() != Dep::v))) return false;
  }
  return true;
}

DiffExpr derivative_chain(const DiffExpr& image, std::initializer_list<std::pair<BaseVar, int>> steps) {
  DiffExpr r = image;
  for (auto [v, n] : steps) {
    for (int i = 0; i < n; ++i) r = total_derivative(r, v, Mode::full_jet);
  }
  return r;
}

}  // namespace

Characteristic characteristic_from_generator(const PointGenerator& g) {
  for (const auto& c : g.c) {
    if (!is_point(c)) throw std::invalid_argument("characteristic_from_generator: not a point generator: " + c.str());
  }
  const auto& [xi_t, xi_x, xi_xt, xi_zt, eta_u, eta_v] = g.c;
  Characteristic r;
  r.phi = eta_u - jet(Dep::v) * xi_t - jet(Dep::u, {x}) * xi_x - jet(Dep::u, {xt}) * xi_xt -
          jet(Dep::u, {zt}) * xi_zt;
  r.psi = eta_v - Q_expr() * xi_t - jet(Dep::v, {x}) * xi_x - jet(Dep::v, {xt}) * xi_xt -
          jet(Dep::v, {zt}) * xi_zt;
  return r;
}

std::pair<DiffExpr, DiffExpr> check_symmetry(const Characteristic& c) {
  return {flow_derivative(c.phi) - c.psi, flow_derivative(c.psi) - frechet_derivative(Q_expr(), c)};
}

bool is_symmetry(const Characteristic& c) {
  auto [r1, r2] = check_symmetry(c);
  return r1.is_zero() && r2.is_zero();
}

Characteristic lie_bracket(const Characteristic& c1, const Characteristic& c2) {
  return {frechet_derivative(c2.phi, c1) - frechet_derivative(c1.phi, c2),
          frechet_derivative(c2.psi, c1) - frechet_derivative(c1.psi, c2)};
}

DiffExpr substitute_function(const DiffExpr& e, Func F, const DiffExpr& image) {
  std::map<Symbol, DiffExpr> memo;
  return e.substitute([&](Symbol s) -> std::optional<DiffExpr> {
    if (!s.is_func() || s.func_name() != F) return std::nullopt;
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    int d1 = s.func_deriv(0), d2 = s.func_deriv(1);
    DiffExpr r;
    switch (F) {
      case Func::a: r = derivative_chain(image, {{xt, d1}}); break;
      case Func::b: r = derivative_chain(image, {{zt, d1}}); break;
      case Func::f: r = derivative_chain(image, {{t, d1}, {xt, d2}}); break;
      case Func::g: r = derivative_chain(image, {{t, d1}, {zt, d2}}); break;
    }
    return memo.emplace(s, r).first->second;
  });
}

PointGenerator substitute_function(const PointGenerator& g, Func F, const DiffExpr& image) {
  PointGenerator r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = substitute_function(g.c[i], F, image);
  return r;
}

Characteristic substitute_function(const Characteristic& c, Func F, const DiffExpr& image) {
  return {substitute_function(c.phi, F, image), substitute_function(c.psi, F, image)};
}

PointGenerator operator+(const PointGenerator& a, const PointGenerator& b) {
  PointGenerator r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

PointGenerator scaled(const PointGenerator& g, const Rational& c) {
  PointGenerator r;
  for (std::size_t i = 0; i < 6; ++i) r.c[i] = g.c[i].scaled(c);
  return r;
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"X1", "X2", "X3", "X4", "X5", "Ya", "Zb", "Vfg"};
  return names;
}

VerificationReport verify_symmetries(const Definitions& d) {
  VerificationReport rep;
  rep.name = "symmetries-all";
  static const std::vector<std::string> chis{"chi1", "chi2", "chi3", "chi4", "chi5", "chia", "chib", "chifg"};
  for (std::size_t i = 0; i < chis.size(); ++i) {
    const std::string& fam = family_names()[i];
    Characteristic c = characteristic_from_generator(d.generator(fam));
    Characteristic tab = d.characteristic(chis[i]);
    rep.expect_equal(fam + " phi", c.phi, tab.phi);
    rep.expect_equal(fam + " psi", c.psi, tab.psi);
    rep.expect_equal(fam + " D_t phi = psi", flow_derivative(tab.phi), tab.psi);
    rep.expect_equal(fam + " D_t psi = Q'", flow_derivative(tab.psi), frechet_derivative(Q_expr(), tab));
    Characteristic s = discrete_transform(tab);
    rep.check("sigma(" + fam + ") is a symmetry", is_symmetry(s));
  }
  // The flow itself is (chi_b - chi_a)/2 at a = b = 1.
  Characteristic flow = substitute_function(d.characteristic("chib"), Func::b, DiffExpr(1)) -
                        substitute_function(d.characteristic("chia"), Func::a, DiffExpr(1));
  flow = flow.scaled(Rational(1, 2));
  rep.expect_equal("(chi_b - chi_a)/2 phi", flow.phi, jet(Dep::v));
  rep.expect_equal("(chi_b - chi_a)/2 psi", flow.psi, Q_expr());
  return rep;
}

VerificationReport verify_commutator_table(const Definitions& d) {
  VerificationReport rep;
  rep.name = "commutator-table";
  auto E = [](std::string_view s) { return parse_expr(s); };
  const PointGenerator zero{};
  std::vector<PointGenerator> X;
  for (const auto& n : family_names()) X.push_back(d.generator(n));
  auto Y = [&](std::string_view a) { return substitute_function(X[5], Func::a, E(a)); };
  auto Z = [&](std::string_view b) { return substitute_function(X[6], Func::b, E(b)); };
  auto V = [&](std::string_view f, std::string_view g) {
    return substitute_function(substitute_function(X[7], Func::f, E(f)), Func::g, E(g));
  };
  auto neg = [](const PointGenerator& g) { return scaled(g, Rational(-1)); };
  auto two = [](const PointGenerator& g) { return scaled(g, Rational(2)); };
  const std::string fh = "(t+x)*f[1] - f", gh = "(t-x)*g[1] - g";

  // [row, column] in generator form, as tabulated.
  const std::vector<std::vector<PointGenerator>> table{
      {zero, zero, X[0], zero, two(X[0]), zero, Z("b'"), V("0", "g[2]")},
      {zero, zero, neg(X[1]), zero, zero, Y("a'"), zero, V("f[2]", "0")},
      {neg(X[0]), X[1], zero, zero, zero, neg(Y("xt*a'")), Z("zt*b'"), V("-xt*f[2]", "zt*g[2]")},
      {zero, zero, zero, zero, zero, zero, zero, V(fh, gh)},
      {two(neg(X[0])), zero, zero, zero, zero, zero, two(Z("zt*b'")), V("-f", "2*zt*g[2] - g")},
      {zero, neg(Y("a'")), Y("xt*a'"), zero, zero, zero, zero, V("2*a*f[1]", "0")},
      {neg(Z("b'")), zero, neg(Z("zt*b'")), zero, neg(two(Z("zt*b'"))), zero, zero, V("0", "-2*b*g[1]")},
      {V("0", "-g[2]"), V("-f[2]", "0"), V("xt*f[2]", "-zt*g[2]"), V("-(" + fh + ")", "-(" + gh + ")"),
       V("f", "g - 2*zt*g[2]"), V("-2*a*f[1]", "0"), V("0", "2*b*g[1]"), zero},
  };

  std::vector<Characteristic> rows;
  for (const auto& g : X) rows.push_back(characteristic_from_generator(g));
  // A family paired with itself uses a second instance of its function.
  std::vector<Characteristic> twins = rows;
  twins[5] = characteristic_from_generator(Y("a'"));
  twins[6] = characteristic_from_generator(Z("b'"));
  twins[7] = characteristic_from_generator(V("f[2]", "g[2]"));

  Characteristic b13 = lie_bracket(rows[0], rows[2]);
  int s = 0;
  if (b13 == rows[0]) s = 1;
  if (b13 == rows[0].scaled(Rational(-1))) s = -1;
  if (!rep.check("sign calibration on [X1,X3]", s != 0, print(b13))) return rep;
  rep.certificate = "s = " + std::to_string(s);

  const auto& names = family_names();
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      std::string label = "[" + names[i] + "," + names[j] + "]";
      Characteristic br = lie_bracket(rows[i], i == j ? twins[j] : rows[j]);
      Characteristic expect = characteristic_from_generator(table[i][j]).scaled(Rational(s));
      Characteristic diff = br - expect;
      rep.claims.push_back({label + " phi", br.phi, expect.phi});
      rep.claims.push_back({label + " psi", br.psi, expect.psi});
      if (rep.check(label, diff.is_zero(), print(diff))) continue;
      for (std::size_t k = 0; k < 8; ++k) {
        for (int c : {-2, -1, 1, 2}) {
          if (br == rows[k].scaled(Rational(s * c))) {
            rep.note("computed " + label + " = " + std::to_string(c) + " " + names[k]);
          }
        }
      }
    }
  }
  return rep;
}

DiffExpr linearized_equation(Dep phi) {
  auto w = [&](std::initializer_list<BaseVar> v) { return DiffExpr::jet(phi, v); };
  auto U = [&](std::initializer_list<BaseVar> v) { return jet(Dep::u, v); };
  return A_expr() * (w({t, t}) - w({x, x})) + (U({t, t}) - U({x, x})) * w({xt, zt}) -
         (U({t, xt}) - U({x, xt})) * (w({t, zt}) + w({x, zt})) -
         (U({t, zt}) + U({x, zt})) * (w({t, xt}) - w({x, xt}));
}

VerificationReport lax_identities(const Definitions& d, bool reduce) {
  VerificationReport rep;
  rep.name = "lax-identities";
  const PseudoDiffOp& L1 = d.op("L1");
  const PseudoDiffOp& L2 = d.op("L2");
  const PseudoDiffOp Dt = PseudoDiffOp::letter(t), Dx = PseudoDiffOp::letter(x), Dxt = PseudoDiffOp::letter(xt);
  const DiffExpr w1 = jet(Dep::w1), w2 = jet(Dep::w2);
  const DiffExpr S = linearized_equation(Dep::w1);

  // (i) commutator on solutions.
  PseudoDiffOp comm = L1 * L2 - L2 * L1;
  if (reduce) {
    PseudoDiffOp red = comm.map_coefficients(reduce_mod_equation);
    rep.check("[L1,L2] = 0 mod equation", red.is_zero(), print(red));
    rep.expect_equal("L1 L2 w1 = L2 L1 w1 mod equation", reduce_mod_equation(apply(L1 * L2, w1)),
                     reduce_mod_equation(apply(L2 * L1, w1)));
  } else {
    rep.check("[L1,L2] = 0 without reduction", comm.is_zero(), print(comm));
  }

  // The linearization of the equation residual is the symmetry condition.
  rep.expect_equal("symmetry condition is the linearized equation",
                   frechet_derivative(equation_residual(), {{Dep::u, w1}}, Mode::full_jet), S);
  // (ii), (iii) divergence forms.
  rep.expect_equal("(Dt+Dx) L2 - Dxt L1", apply((Dt + Dx) * L2 - Dxt * L1, w1), S);
  rep.expect_equal("L2 (Dt+Dx) - L1 Dxt", apply(L2 * (Dt + Dx) - L1 * Dxt, w1), S);

  // (iv) w2 is a potential of w1: w2_t + w2_x = L1 w1, w2_xt = L2 w1.
  const DiffExpr P1 = apply(L1, w1), P2 = apply(L2, w1);
  std::map<Symbol, DiffExpr> memo;
  std::function<DiffExpr(Symbol)> pot = [&](Symbol s) -> DiffExpr {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    MultiIndex mi = s.multi_index();
    DiffExpr r;
    if (mi[t] > 0) {
      MultiIndex rest = mi.raised(t, -1);
      r = total_derivative(P1, rest, Mode::full_jet) - pot(Symbol::jet(Dep::w2, rest.raised(x)));
    } else if (mi[xt] > 0) {
      r = total_derivative(P2, mi.raised(xt, -1), Mode::full_jet);
    } else {
      r = DiffExpr(s);
    }
    return memo.emplace(s, r).first->second;
  };
  DiffExpr lhs = apply(L2 * (Dt + Dx) - L1 * Dxt, w2).substitute([&](Symbol s) -> std::optional<DiffExpr> {
    if (s.is_jet() && s.dep() == Dep::w2) return pot(s);
    return std::nullopt;
  });
  DiffExpr rhs = apply(L2 * L1 - L1 * L2, w1);
  rep.check("potential eliminated", jets_of(lhs, Dep::w2).empty(), print(lhs));
  // w1 on the symmetry condition, u on the equation.
  DiffExpr w1_tt = reduce_mod_equation(jet(Dep::w1, {t, t}) - S * A_expr().inverse());
  std::map<Dep, DiffExpr> rules{{Dep::u, u_tt_rule()}, {Dep::w1, w1_tt}};
  rep.expect_equal("potential identity equals [L2,L1] w1 for symmetric w1", reduce_with(lhs, rules),
                   reduce_with(rhs, rules));
  DiffExpr factor = jet(Dep::u, {t, zt}) + jet(Dep::u, {x, zt});
  if (lhs - rhs == factor * S) rep.note("potential identity off shell: difference = (u[t,zt] + u[x,zt]) * S(w1)");
  if (reduce) {
    rep.expect_equal("[L2,L1] w1 = 0 mod equation", reduce_mod_equation(rhs), DiffExpr());
  }
  return rep;
}

}  // namespace fhs
