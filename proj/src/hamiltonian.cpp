#include "fhs/hamiltonian.hpp"

#include "fhs/symmetry.hpp"

namespace fhs {

namespace {

constexpr auto t = BaseVar::t;

const Symbol kV = Symbol::jet(Dep::v, {});
const Symbol kUt = Symbol::jet(Dep::u, MultiIndex::of({t}));
const Symbol kVt = Symbol::jet(Dep::v, MultiIndex::of({t}));

DiffExpr on_flow(const DiffExpr& e) {
  return e.substitute([](Symbol s) -> std::optional<DiffExpr> {
    if (s == kUt) return DiffExpr(kV);
    if (s == kVt) return Q_expr();
    return std::nullopt;
  });
}

bool has_t_jets(const DiffExpr& e) {
  for (Symbol s : jets_of(e)) {
    if (s.multi_index()[t] != 0) return true;
  }
  return false;
}

bool is_local(const MatrixOp& m) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (!m.at(i, j).is_local()) return false;
    }
  }
  return true;
}

/// Operator identity; local operators also yield claims on generic (w1, w2).
bool expect_operator(VerificationReport& rep, const std::string& label, const MatrixOp& P, const MatrixOp& Q) {
  if (is_local(P) && is_local(Q)) {
    std::array<DiffExpr, 2> w{DiffExpr::jet(Dep::w1), DiffExpr::jet(Dep::w2)};
    auto a = fhs::apply(P, w), b = fhs::apply(Q, w);
    rep.claims.push_back({label + " row 1", a[0], b[0]});
    rep.claims.push_back({label + " row 2", a[1], b[1]});
  }
  MatrixOp diff = P - Q;
  return rep.check(label, diff.is_zero(), print(diff));
}

/// Integral in v of a polynomial in v.
DiffExpr integrate_v(const DiffExpr& e) {
  ExprBuilder out;
  for (const auto& term : e.terms()) {
    int k = term.mono.degree_of(kV);
    if (k < 0) throw NonVariational("inverse_noether: negative power of v in H_v");
    Monomial m = term.mono;
    m.mul(kV, 1);
    out.add_term(std::move(m), term.coef / Rational(k + 1));
  }
  return out.build();
}

}  // namespace

ConstraintPair legendre_momenta(const DiffExpr& L) {
  for (Symbol s : jets_of(L)) {
    if (s.multi_index()[t] != 0 && s != kUt && s != kVt) {
      throw ModeError("legendre_momenta: Lagrangian has t-derivative " + s.str() + " beyond first order");
    }
  }
  ConstraintPair c{on_flow(L.partial(kUt)), on_flow(L.partial(kVt))};
  return c;
}

MatrixOp constraint_bracket(const ConstraintPair& c) {
  MatrixOp M = frechet_operator(c.W1, c.W2);
  MatrixOp K;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) K.at(i, j) = M.at(j, i).adjoint() - M.at(i, j);
  }
  return K;
}

DiffExpr legendre_hamiltonian(const DiffExpr& L, const ConstraintPair& c) {
  DiffExpr H = on_flow(c.W1 * DiffExpr(kUt) + c.W2 * DiffExpr(kVt) - L);
  if (has_t_jets(H)) throw ModeError("legendre_hamiltonian: t-derivatives remain in " + H.str());
  return H;
}

VerificationReport verify_flow(const HamiltonianTriple& tr) {
  VerificationReport rep;
  rep.name = tr.label;
  std::array<DiffExpr, 2> dH{euler_operator(tr.H, Dep::u), euler_operator(tr.H, Dep::v)};
  try {
    auto r = fhs::apply(tr.J, dH);
    rep.expect_equal("u_t", r[0], DiffExpr(kV));
    rep.expect_equal("v_t", r[1], Q_expr());
  } catch (const NonlocalResult& e) {
    rep.nonlocal("J delta H", e.what());
  }
  return rep;
}

DiffExpr inverse_noether(const Characteristic& c, const MatrixOp& K) {
  for (Symbol s : jets_of(c.phi, Dep::v)) {
    if (s != kV) throw std::invalid_argument("inverse_noether: phi contains derivatives of v");
  }
  std::array<DiffExpr, 2> target = fhs::apply(K, std::array<DiffExpr, 2>{c.phi, c.psi});
  for (Symbol s : jets_of(target[1], Dep::v)) {
    if (s != kV) throw NonVariational("inverse_noether: H_v depends on derivatives of v");
  }
  DiffExpr Hv = integrate_v(target[1]);
  DiffExpr rest = target[0] - euler_operator(Hv, Dep::u);
  if (!jets_of(rest, Dep::v).empty()) {
    throw NonVariational("inverse_noether: remainder for h[u] depends on v: " + rest.str());
  }
  DiffExpr h;
  try {
    h = homotopy_integrate(rest, DiffExpr());
  } catch (const NotExact& e) {
    throw NonVariational(std::string("inverse_noether: ") + e.what());
  }
  DiffExpr H = Hv + h;
  if (euler_operator(H, Dep::u) != target[0] || euler_operator(H, Dep::v) != target[1]) {
    throw NonVariational("inverse_noether: reconstruction does not reproduce K (phi, psi)");
  }
  return H;
}

DiffExpr at_param(const DiffExpr& e, std::string_view name, const Rational& value) {
  return e.substitute(Symbol::param(name), DiffExpr(value));
}

MatrixOp at_param(const MatrixOp& m, std::string_view name, const Rational& value) {
  Symbol p = Symbol::param(name);
  return m.map_coefficients([&](const DiffExpr& c) { return c.substitute(p, DiffExpr(value)); });
}

SecondStructures build_second_structures(const Definitions& d) {
  const MatrixOp& J0 = d.matrix("J0");
  MatrixOp Je = compose(d.matrix("Reps"), J0);
  return {compose(d.matrix("R1"), J0), compose(d.matrix("R2"), J0), at_param(Je, "eps", 1), at_param(Je, "eps", -1)};
}

VerificationReport check_k_from_lagrangian(const Definitions& d) {
  VerificationReport rep;
  rep.name = "k-from-lagrangian";
  DiffExpr L = d.expr("L");
  ConstraintPair c = legendre_momenta(L);
  rep.expect_equal("W1", c.W1, d.expr("W1"));
  rep.expect_equal("W2", c.W2, DiffExpr());
  if (c.W1 != d.expr("W1")) rep.note("momentum from L: W1 = " + print(c.W1));
  MatrixOp Kw = constraint_bracket({d.expr("W1"), DiffExpr()});
  if (Kw != d.matrix("K")) rep.note("constraint bracket of the tabulated W1: K = " + print(Kw));
  MatrixOp K = constraint_bracket(c);
  const MatrixOp& Kp = d.matrix("K");
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      PseudoDiffOp diff = K.at(i, j) - Kp.at(i, j);
      rep.check("K" + std::to_string(i + 1) + std::to_string(j + 1), diff.is_zero(), print(diff));
    }
  }
  rep.expect_equal("K12 = -A", K.at(0, 1).as_multiplication(), -A_expr());
  rep.check("K skew-adjoint", is_skew_adjoint(K));
  rep.expect_equal("H1 from the Legendre transform", legendre_hamiltonian(L, c), d.expr("H1"));
  return rep;
}

VerificationReport check_k_inverse(const Definitions& d) {
  VerificationReport rep;
  rep.name = "k-inverse";
  expect_operator(rep, "K J0 = I", compose(d.matrix("K"), d.matrix("J0")), MatrixOp::identity());
  expect_operator(rep, "J0 K = I", compose(d.matrix("J0"), d.matrix("K")), MatrixOp::identity());
  return rep;
}

VerificationReport check_skew_all(const Definitions& d) {
  VerificationReport rep;
  rep.name = "skew-all";
  const MatrixOp& Je = d.matrix("Jeps");
  std::vector<std::pair<std::string, MatrixOp>> ops{
      {"K", d.matrix("K")},           {"J0", d.matrix("J0")},           {"J1", d.matrix("J1")},
      {"J2", d.matrix("J2")},         {"J+", at_param(Je, "eps", 1)},  {"J-", at_param(Je, "eps", -1)},
      {"Jeps", Je},                   {"J(a,b,c)", d.matrix("Jabc")},
  };
  for (const auto& [name, J] : ops) expect_operator(rep, name + " skew-adjoint", adjoint(J), -J);
  MatrixOp pencil = d.matrix("J1").times(DiffExpr::param("a")) + d.matrix("J2").times(DiffExpr::param("b")) +
                    d.matrix("J0").times(DiffExpr::param("c"));
  expect_operator(rep, "J(a,b,c) = a J1 + b J2 + c J0", d.matrix("Jabc"), pencil);
  return rep;
}

VerificationReport check_flow(const Definitions& d, std::string_view which) {
  HamiltonianTriple tr;
  if (which == "j0") {
    tr = {"flow-j0", d.matrix("J0"), d.expr("H1")};
  } else if (which == "jplus") {
    tr = {"flow-jplus", at_param(d.matrix("Jeps"), "eps", 1), d.expr("H0p")};
  } else if (which == "jminus") {
    tr = {"flow-jminus", at_param(d.matrix("Jeps"), "eps", -1), d.expr("H0m")};
  } else {
    throw std::invalid_argument("check_flow: unknown triple " + std::string(which));
  }
  return verify_flow(tr);
}

VerificationReport check_noether_all(const Definitions& d) {
  VerificationReport rep;
  rep.name = "noether-all";
  const MatrixOp& K = d.matrix("K");
  static const std::vector<std::pair<std::string, std::string>> pairs{
      {"chi1", "Hint1"}, {"chi2", "Hint2"}, {"chi3", "Hint3"},    {"chi4", "Hint4"},
      {"chia", "Hinta"}, {"chib", "Hintb"}, {"chifg", "Hintfg"},
  };
  for (const auto& [chi, H] : pairs) {
    try {
      DiffExpr h = inverse_noether(d.characteristic(chi), K);
      DiffExpr diff = h - d.expr(H);
      rep.check(H + " mod divergence", is_divergence(diff), print(diff));
      for (Dep dep : {Dep::u, Dep::v}) {
        rep.claims.push_back({H + " delta_" + std::string(name(dep)), euler_operator(h, dep),
                              euler_operator(d.expr(H), dep)});
      }
    } catch (const NonVariational& e) {
      rep.check(H, false, e.what());
    }
  }
  try {
    Characteristic c45 = d.characteristic("chi4") - d.characteristic("chi5");
    DiffExpr H45 = inverse_noether(c45, K);
    rep.note("chi4 - chi5 is variational with H = " + print(H45) + "; D_t H " +
             (is_divergence(flow_derivative(H45)) ? "is" : "is not") + " a divergence");
  } catch (const NonVariational&) {
    rep.note("chi4 - chi5 is non-variational");
  }
  DiffExpr Hb1 = substitute_function(d.expr("Hintb"), Func::b, DiffExpr(1));
  DiffExpr Ha1 = substitute_function(d.expr("Hinta"), Func::a, DiffExpr(1));
  rep.expect_equal("H1 = (H^{b=1} - H^{a=1})/2", (Hb1 - Ha1).scaled(Rational(1, 2)), d.expr("H1"));
  Characteristic flow = (substitute_function(d.characteristic("chib"), Func::b, DiffExpr(1)) -
                         substitute_function(d.characteristic("chia"), Func::a, DiffExpr(1)))
                            .scaled(Rational(1, 2));
  DiffExpr H = inverse_noether(flow, K);
  rep.check("flow characteristic reconstructs H1", equals_mod_divergence(H, d.expr("H1")), print(H - d.expr("H1")));
  return rep;
}

VerificationReport check_noether_x5(const Definitions& d) {
  VerificationReport rep;
  rep.name = "noether-x5-negative";
  try {
    DiffExpr H = inverse_noether(d.characteristic("chi5"), d.matrix("K"));
    rep.check("chi5 is non-variational", false, "reconstructed " + print(H));
  } catch (const NonVariational& e) {
    rep.check("chi5 is non-variational", true);
    rep.certificate = e.what();
  }
  return rep;
}

VerificationReport check_conservation(const Definitions& d) {
  VerificationReport rep;
  rep.name = "conservation";
  for (const char* H : {"Hint1", "Hint2", "Hint3", "Hinta", "Hintb"}) {
    DiffExpr Dt = flow_derivative(d.expr(H));
    rep.check(std::string("D_t ") + H + " is a divergence", is_divergence(Dt), print(Dt));
    rep.claims.push_back({std::string("delta_u D_t ") + H, euler_operator(Dt, Dep::u), DiffExpr()});
    rep.claims.push_back({std::string("delta_v D_t ") + H, euler_operator(Dt, Dep::v), DiffExpr()});
  }
  for (const char* H : {"Hint4", "Hintfg"}) {
    bool div = is_divergence(flow_derivative(d.expr(H)));
    rep.note(std::string("D_t ") + H + (div ? " is" : " is not") + " a spatial divergence");
  }
  return rep;
}

VerificationReport check_recursion_compose(const Definitions& d) {
  VerificationReport rep;
  rep.name = "recursion-compose";
  const MatrixOp& J0 = d.matrix("J0");
  SecondStructures s = build_second_structures(d);
  expect_operator(rep, "R1 J0 = J1", s.J1, d.matrix("J1"));
  expect_operator(rep, "R2 J0 = J2", s.J2, d.matrix("J2"));
  expect_operator(rep, "Reps J0 = Jeps", compose(d.matrix("Reps"), J0), d.matrix("Jeps"));
  expect_operator(rep, "J+ = J1 + J2", s.Jplus, d.matrix("J1") + d.matrix("J2"));
  expect_operator(rep, "J- = J1 - J2", s.Jminus, d.matrix("J1") - d.matrix("J2"));
  rep.check("R1 J0 (1,1) = -Dixt", s.J1.at(0, 0) == -PseudoDiffOp::letter(BaseVar::xt, -1), print(s.J1.at(0, 0)));
  rep.check("R2 J0 (1,1) = Dizt", s.J2.at(0, 0) == PseudoDiffOp::letter(BaseVar::zt, -1), print(s.J2.at(0, 0)));
  return rep;
}

VerificationReport check_reps_sum(const Definitions& d) {
  VerificationReport rep;
  rep.name = "reps-sum";
  DiffExpr eps = DiffExpr::param("eps");
  expect_operator(rep, "Reps = R1 + eps R2", d.matrix("Reps"), d.matrix("R1") + d.matrix("R2").times(eps));
  expect_operator(rep, "Jeps = J1 + eps J2", d.matrix("Jeps"), d.matrix("J1") + d.matrix("J2").times(eps));
  return rep;
}

VerificationReport check_discrete_maps(const Definitions& d) {
  VerificationReport rep;
  rep.name = "discrete-maps";
  expect_operator(rep, "sigma(R1) = R2", discrete_transform(d.matrix("R1")), d.matrix("R2"));
  expect_operator(rep, "sigma(R2) = R1", discrete_transform(d.matrix("R2")), d.matrix("R1"));
  MatrixOp s1 = discrete_transform(d.matrix("J1"));
  int sign = 0;
  if (s1 == d.matrix("J2")) sign = 1;
  if (s1 == -d.matrix("J2")) sign = -1;
  rep.check("sigma(J1) = +-J2", sign != 0, print(s1 - d.matrix("J2")));
  rep.certificate = "sigma(J1) = " + std::string(sign < 0 ? "-" : "+") + "J2";
  expect_operator(rep, "sigma(J0) = J0", discrete_transform(d.matrix("J0")), d.matrix("J0"));
  expect_operator(rep, "sigma(K) = K", discrete_transform(d.matrix("K")), d.matrix("K"));
  return rep;
}

}  // namespace fhs
