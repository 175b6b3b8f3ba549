#include <doctest.h>

#include "fhs/hamiltonian.hpp"
#include "fhs/symmetry.hpp"
#include "gen.hpp"

using namespace fhs;

namespace {

const Definitions& defs() {
  static const Definitions d = load_defs(FHS_DEFS_PATH);
  return d;
}

DiffExpr v() { return DiffExpr::jet(Dep::v); }

Characteristic sub_ab(Characteristic c) {
  c = substitute_function(c, Func::a, DiffExpr(1));
  return substitute_function(c, Func::b, DiffExpr(1));
}

}  // namespace

TEST_CASE("momenta of small Lagrangians") {
  ConstraintPair c = legendre_momenta(parse_expr("v*u[t]"));
  CHECK(c.W1 == v());
  CHECK(c.W2.is_zero());
  CHECK(constraint_bracket(c) == MatrixOp(0, -1, 1, 0));

  ConstraintPair z = legendre_momenta(parse_expr("u[x]^2*v + u"));
  CHECK(z.W1.is_zero());
  CHECK(z.W2.is_zero());
  CHECK(constraint_bracket(z).is_zero());

  CHECK_THROWS_AS(legendre_momenta(parse_expr("u[t,t]*v")), ModeError);
  CHECK_THROWS_AS(legendre_momenta(parse_expr("u[t,x]*v")), ModeError);
}

TEST_CASE("momenta substitute the flow") {
  ConstraintPair c = legendre_momenta(parse_expr("u[t]*v[t]"));
  CHECK(c.W1 == Q_expr());
  CHECK(c.W2 == v());
}

TEST_CASE("Legendre Hamiltonian") {
  DiffExpr L = parse_expr("v*u[t] - v^2/2");
  CHECK(legendre_hamiltonian(L, legendre_momenta(L)) == parse_expr("v^2/2"));
  DiffExpr Lf = defs().expr("L");
  CHECK(equals_mod_divergence(legendre_hamiltonian(Lf, legendre_momenta(Lf)), defs().expr("H1")));
}

TEST_CASE("constraint bracket of the Lagrangian momenta") {
  ConstraintPair c = legendre_momenta(defs().expr("L"));
  CHECK(c.W2.is_zero());
  CHECK(constraint_bracket(c) == defs().matrix("K"));
  CHECK(compose(defs().matrix("K"), defs().matrix("J0")) == MatrixOp::identity());
  CHECK(compose(defs().matrix("J0"), defs().matrix("K")) == MatrixOp::identity());
}

TEST_CASE("flow verification") {
  const MatrixOp& J0 = defs().matrix("J0");
  CHECK(verify_flow({"h1", J0, defs().expr("H1")}).passed());
  VerificationReport zero = verify_flow({"zero", J0, DiffExpr()});
  CHECK(zero.status == Status::fail);
  CHECK(zero.items.size() == 2);
  CHECK_FALSE(verify_flow({"neg", J0, -defs().expr("H1")}).passed());
  // Flipping the sign of the linear term alone breaks the u-equation.
  DiffExpr mutated = defs().expr("H1") + parse_expr("2*u");
  CHECK_FALSE(verify_flow({"mut", J0, mutated}).passed());
}

TEST_CASE("inverse Noether") {
  const MatrixOp& K = defs().matrix("K");
  CHECK(equals_mod_divergence(inverse_noether({v(), Q_expr()}, K), defs().expr("H1")));
  CHECK(equals_mod_divergence(inverse_noether(defs().characteristic("chi1"), K), defs().expr("Hint1")));
  CHECK(equals_mod_divergence(inverse_noether(defs().characteristic("chi3"), K), defs().expr("Hint3")));
  CHECK_THROWS_AS(inverse_noether(defs().characteristic("chi5"), K), NonVariational);
  Characteristic ab = sub_ab(defs().characteristic("chib") - defs().characteristic("chia")).scaled(Rational(1, 2));
  CHECK(equals_mod_divergence(inverse_noether(ab, K), defs().expr("H1")));
  CHECK_THROWS_AS(inverse_noether({DiffExpr::jet(Dep::v, {BaseVar::x}), 0}, K), std::invalid_argument);
}

TEST_CASE("second structures at the pencil points") {
  SecondStructures s = build_second_structures(defs());
  CHECK(is_skew_adjoint(s.J1));
  CHECK(is_skew_adjoint(s.J2));
  CHECK(s.Jplus == at_param(defs().matrix("Jeps"), "eps", Rational(1)));
  CHECK(s.Jminus == at_param(defs().matrix("Jeps"), "eps", Rational(-1)));
  CHECK(discrete_transform(s.J1) == s.J2);
}

TEST_CASE("checks on the definitions") {
  CHECK(check_k_inverse(defs()).passed());
  CHECK(check_skew_all(defs()).passed());
  CHECK(check_flow(defs(), "j0").passed());
  CHECK(check_flow(defs(), "jplus").passed());
  CHECK(check_flow(defs(), "jminus").passed());
  CHECK(check_noether_x5(defs()).passed());
  CHECK(check_recursion_compose(defs()).passed());
  CHECK(check_reps_sum(defs()).passed());
  VerificationReport dm = check_discrete_maps(defs());
  CHECK(dm.passed());
  CHECK(dm.certificate == "sigma(J1) = +J2");
}

TEST_CASE("printed momenta and integrals that disagree") {
  VerificationReport k = check_k_from_lagrangian(defs());
  CHECK(k.status == Status::fail);
  int bad = 0;
  for (const auto& it : k.items) bad += it.ok ? 0 : 1;
  CHECK(bad == 1);

  VerificationReport n = check_noether_all(defs());
  CHECK(n.status == Status::fail);
  for (const auto& it : n.items) {
    bool expected_bad = it.label.find("Hint2") != std::string::npos || it.label.find("Hint4") != std::string::npos;
    CHECK_MESSAGE(it.ok != expected_bad, it.label);
  }
  // -sigma(Hint1) is the density of chi2.
  const MatrixOp& K = defs().matrix("K");
  CHECK(equals_mod_divergence(inverse_noether(defs().characteristic("chi2"), K),
                              -discrete_transform(defs().expr("Hint1"))));
  CHECK_THROWS_AS(inverse_noether(defs().characteristic("chi4"), K), NonVariational);
  Characteristic c45 = defs().characteristic("chi4") - defs().characteristic("chi5");
  CHECK(is_divergence(flow_derivative(inverse_noether(c45, K))));
}

TEST_CASE("property: constraint bracket is skew-adjoint") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 30; ++i) {
    ConstraintPair c{gen::random_expr(rng, 3, 2, true), gen::random_expr(rng, 2, 1)};
    CHECK(is_skew_adjoint(constraint_bracket(c)));
  }
}

TEST_CASE("property: inverse Noether inverts K J0") {
  std::mt19937_64 rng(73);
  const MatrixOp& K = defs().matrix("K");
  const MatrixOp& J0 = defs().matrix("J0");
  for (int i = 0; i < 15; ++i) {
    // Hamiltonians linear in v reach every (phi, psi) = J0 delta H with phi free of v-jets.
    DiffExpr H = gen::random_expr(rng, 2, 2) * (i % 2 ? v() : DiffExpr(1));
    if (!jets_of(H, Dep::v).empty() && jets_of(H, Dep::v) != std::vector<Symbol>{Symbol::jet(Dep::v, {})}) continue;
    Characteristic c = apply(J0, Characteristic{euler_operator(H, Dep::u), euler_operator(H, Dep::v)});
    bool phi_ok = true;
    for (Symbol s : jets_of(c.phi, Dep::v)) phi_ok = phi_ok && s == Symbol::jet(Dep::v, {});
    if (!phi_ok) continue;
    CHECK(equals_mod_divergence(inverse_noether(c, K), H));
  }
}
