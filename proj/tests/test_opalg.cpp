#include <doctest.h>

#include "fhs/mathdsl.hpp"
#include "gen.hpp"

using namespace fhs;

namespace {

constexpr auto x = BaseVar::x;
constexpr auto xt = BaseVar::xt;
constexpr auto zt = BaseVar::zt;

const Definitions& defs() {
  static const Definitions d = load_defs(FHS_DEFS_PATH);
  return d;
}

DiffExpr u(std::initializer_list<BaseVar> v = {}) { return DiffExpr::jet(Dep::u, v); }
DiffExpr v(std::initializer_list<BaseVar> w = {}) { return DiffExpr::jet(Dep::v, w); }

MatrixOp at_eps(const MatrixOp& m, int e) {
  Symbol eps = Symbol::param("eps");
  return m.map_coefficients([&](const DiffExpr& c) { return c.substitute(eps, DiffExpr(e)); });
}

}  // namespace

TEST_CASE("composition examples") {
  const auto& d = defs();
  CHECK(compose(d.matrix("K"), d.matrix("J0")) == MatrixOp::identity());
  MatrixOp J1 = compose(d.matrix("R1"), d.matrix("J0"));
  CHECK(J1.at(0, 0) == -PseudoDiffOp::letter(xt, -1));
  CHECK(compose(MatrixOp::identity(), d.matrix("R1")) == d.matrix("R1"));
}

TEST_CASE("adjoint examples") {
  DiffExpr f = u({x}) * v({zt});
  PseudoDiffOp P = PseudoDiffOp(f) * PseudoDiffOp::letter(x);
  CHECK(P.adjoint() == -(PseudoDiffOp(f) * PseudoDiffOp::letter(x)) - PseudoDiffOp(total_derivative(f, x)));
  const MatrixOp& J0 = defs().matrix("J0");
  CHECK(adjoint(J0) == -J0);
  CHECK(adjoint(adjoint(defs().matrix("R1"))) == defs().matrix("R1"));
}

TEST_CASE("apply examples") {
  CHECK(fhs::apply(PseudoDiffOp::letter(xt, -1), u({xt})) == u());
  CHECK_THROWS_AS(fhs::apply(PseudoDiffOp::letter(xt, -1), u({zt})), NonlocalResult);
  DiffExpr H1 = defs().expr("H1");
  auto r = fhs::apply(defs().matrix("J0"), std::array<DiffExpr, 2>{euler_operator(H1, Dep::u), euler_operator(H1, Dep::v)});
  CHECK(r[0] == v());
  CHECK(r[1] == Q_expr());
}

TEST_CASE("antiderivative of a product") {
  DiffExpr target = total_derivative(u({x}) * v({zt}) * A_expr().inverse(), zt);
  auto w = antiderivative(target, zt);
  REQUIRE(w.has_value());
  CHECK(total_derivative(*w, zt) == target);
}

TEST_CASE("discrete transform examples") {
  CHECK(discrete_transform(A_expr()) == A_expr());
  CHECK(discrete_transform(mu_expr()) == -nu_expr());
  CHECK(discrete_transform(defs().matrix("R1")) == defs().matrix("R2"));
  CHECK(discrete_transform(DiffExpr::func(Func::a, 1)) == -DiffExpr::func(Func::b, 1));
}

TEST_CASE("operator equality examples") {
  const auto& d = defs();
  CHECK(operator_equals(d.matrix("R1") + d.matrix("R2"), at_eps(d.matrix("Reps"), 1)));
  CHECK(operator_equals(d.matrix("J1") + d.matrix("J2"), at_eps(d.matrix("Jeps"), 1)));
  CHECK(operator_equals(d.matrix("J1") - d.matrix("J2"), at_eps(d.matrix("Jeps"), -1)));
  CHECK(operator_equals(d.matrix("K"), d.matrix("K")));
  CHECK_FALSE(operator_equals(d.matrix("J1"), d.matrix("J2")));
}

TEST_CASE("normal form cancels letters and keeps irreducible compositions") {
  auto Dx = PseudoDiffOp::letter(x), Dix = PseudoDiffOp::letter(x, -1);
  CHECK(Dx * Dix == PseudoDiffOp(1));
  CHECK(Dix * Dx == PseudoDiffOp(1));
  DiffExpr f = u({x, zt});
  // Dix . f . Dx = f - Dix . f_x
  CHECK(Dix * PseudoDiffOp(f) * Dx == PseudoDiffOp(f) - Dix * PseudoDiffOp(total_derivative(f, x)));
  CHECK((Dix * PseudoDiffOp(f)).str() == "Dix . u[x,zt]");
  CHECK((PseudoDiffOp::letter(xt, -1) * PseudoDiffOp(DiffExpr(3))).str() == "3 . Dixt");
}

TEST_CASE("property: composition is associative") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    auto P = gen::random_op(rng, true), Q = gen::random_op(rng, true), R = gen::random_op(rng, i % 2 == 0);
    CHECK((P * Q) * R == P * (Q * R));
  }
}

TEST_CASE("property: adjoint is an involutive anti-homomorphism") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 40; ++i) {
    auto P = gen::random_op(rng, true), Q = gen::random_op(rng, true);
    CHECK(P.adjoint().adjoint() == P);
    CHECK((P * Q).adjoint() == Q.adjoint() * P.adjoint());
  }
}

TEST_CASE("property: discrete transform is an involution compatible with composition and adjoint") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 40; ++i) {
    auto P = gen::random_op(rng, true), Q = gen::random_op(rng, true);
    CHECK(discrete_transform(discrete_transform(P)) == P);
    CHECK(discrete_transform(P * Q) == discrete_transform(P) * discrete_transform(Q));
    CHECK(discrete_transform(P.adjoint()) == discrete_transform(P).adjoint());
  }
  for (const auto& def : defs().all()) {
    if (def.kind == DefKind::matrixop) CHECK(discrete_transform(discrete_transform(def.matrix())) == def.matrix());
  }
}

TEST_CASE("property: application respects composition") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 30; ++i) {
    auto P = gen::random_op(rng, false), Q = gen::random_op(rng, false);
    DiffExpr e = gen::random_expr(rng, 2, 2, true);
    CHECK(fhs::apply(P * Q, e) == fhs::apply(P, fhs::apply(Q, e)));
  }
  // Nonlocal case where every application localizes.
  auto Dixt = PseudoDiffOp::letter(xt, -1);
  PseudoDiffOp P = PseudoDiffOp(u({x})) * Dixt;
  PseudoDiffOp Q = PseudoDiffOp::letter(xt) * PseudoDiffOp(v({zt}));
  DiffExpr e = u({x, zt});
  CHECK(fhs::apply(P * Q, e) == fhs::apply(P, fhs::apply(Q, e)));
}

TEST_CASE("property: Helmholtz condition detects Euler-Lagrange pairs") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    DiffExpr h = gen::random_expr(rng, 3, 2, false);
    CHECK(is_helmholtz(euler_operator(h, Dep::u), euler_operator(h, Dep::v)));
  }
  CHECK_FALSE(is_helmholtz(u({x}), 0));
}
