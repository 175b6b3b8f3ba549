#include <doctest.h>

#include "fhs/multivector.hpp"
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

WedgeExpr eta(std::initializer_list<BaseVar> v = {}, WedgeFactor::Tag t = WedgeFactor::Tag::none) {
  return WedgeExpr::factor(WedgeFactor::of(Comp::eta, v, t));
}
WedgeExpr th(std::initializer_list<BaseVar> v = {}, WedgeFactor::Tag t = WedgeFactor::Tag::none) {
  return WedgeExpr::factor(WedgeFactor::of(Comp::theta, v, t));
}
WedgeExpr du(std::initializer_list<BaseVar> v = {}) { return WedgeExpr::factor(WedgeFactor::of(Comp::du, v)); }
WedgeExpr dv(std::initializer_list<BaseVar> v = {}) { return WedgeExpr::factor(WedgeFactor::of(Comp::dv, v)); }
DiffExpr e(const char* s) { return parse_expr(s, defs()); }

constexpr auto Txt = WedgeFactor::Tag::xt;
constexpr auto Tzt = WedgeFactor::Tag::zt;

WedgeFactor random_factor(std::mt19937_64& rng, bool forms = false) {
  std::uniform_int_distribution<int> comp(0, 1);
  Comp c = static_cast<Comp>(comp(rng) + (forms ? 2 : 0));
  return WedgeFactor(c, gen::random_index(rng, 2));
}

WedgeExpr random_wedge(std::mt19937_64& rng, int degree, bool forms = false, int terms = 3) {
  WedgeExpr w;
  for (int i = 0; i < terms; ++i) {
    WedgeExpr::Mono m;
    for (int k = 0; k < degree; ++k) m.push_back(random_factor(rng, forms));
    w.add(m, gen::random_expr(rng, 2, 2, true));
  }
  return w;
}

}  // namespace

TEST_CASE("wedge antisymmetry") {
  CHECK(wedge(eta(), th({x})) == -wedge(th({x}), eta()));
  CHECK(wedge(th({x}), th({x})).is_zero());
  WedgeExpr w = wedge(wedge(eta(), th()), th({xt}));
  CHECK(wedge(wedge(th({xt}), eta()), th()) == w);
}

TEST_CASE("bi-vector of the zero operator and of J0") {
  CHECK(build_theta(MatrixOp()).is_zero());
  WedgeExpr t0 = build_theta(defs().matrix("J0")).scaled(Rational(2));
  auto it = t0.terms().find(WedgeExpr::Mono{WedgeFactor::of(Comp::eta), WedgeFactor::of(Comp::theta)});
  REQUIRE(it != t0.terms().end());
  CHECK(it->second == e("2/A"));
}

TEST_CASE("bi-vector of the pencil matches the nine-term display") {
  DiffExpr a = DiffExpr::param("a"), b = DiffExpr::param("b");
  WedgeExpr two_theta =
      wedge(eta(), eta({}, Tzt).times(b) - eta({}, Txt).times(a)) -
      wedge(eta(), th({x}, Txt).times(a) + th({x}, Tzt).times(b)) -
      wedge(eta(), th()).times(e("2/A*($b*nu - $a*mu - $c)")) +
      wedge(th(), eta({x}, Txt).times(a) + eta({x}, Tzt).times(b)) +
      wedge(th(), th({x, x}, Txt).times(a) - th({x, x}, Tzt).times(b)) +
      wedge(th(), th({xt}).times(b) - th({zt}).times(a)).times(e("1/A^2")) -
      wedge(th(), th({x})).times(e("2/A*($a*mu + $b*nu)")) +
      wedge(th(), th({xt})).times(e("mu/A^2*($a*mu + $c)")) -
      wedge(th(), th({zt})).times(e("nu/A^2*($b*nu - $c)"));
  CHECK(build_theta(defs().matrix("Jabc")).scaled(Rational(2)) == two_theta);
}

TEST_CASE("nested inverse letters are rejected") {
  MatrixOp m(parse_operator("Dixt . A", defs()), 0, 0, 0);
  CHECK_THROWS_AS(build_theta(m), std::invalid_argument);
  MatrixOp ok(parse_operator("Dixt"), 0, 0, 0);
  CHECK(apply_to_univectors(ok)[0] == eta({}, Txt));
}

TEST_CASE("prolongation examples") {
  const MatrixOp& J0 = defs().matrix("J0");
  CHECK(prolong(J0, DiffExpr(1)).is_zero());
  CHECK(prolong(J0, DiffExpr::param("a")).is_zero());
  // The u-component of J0 omega is theta/A.
  WedgeExpr tA = th().times(e("1/A"));
  CHECK(prolong(J0, A_expr()) == total_derivative(total_derivative(tA, xt), zt));
  CHECK(prolong(J0, e("u")) == tA);
  // A nonlocal characteristic localizes under the matching derivative.
  MatrixOp Jn(parse_operator("Dixt"), 0, 0, 0);
  CHECK(prolong(Jn, DiffExpr::jet(Dep::u, {xt})) == eta());
  CHECK(prolong(Jn, DiffExpr::jet(Dep::u, {x})) == eta({x}, Txt));
}

TEST_CASE("pr v annihilates uni-vectors") {
  Prolongation pr(defs().matrix("Jabc"));
  // Constant coefficients in front of nonlocal factors contribute nothing.
  CHECK(pr.on_multivector(wedge(eta(), eta({}, Txt)).times(DiffExpr::param("a"))).is_zero());
  CHECK(pr.on_multivector(wedge(eta(), th())).is_zero());
  CHECK_THROWS_AS(pr.on_multivector(wedge(eta(), th({}, Tzt)).times(A_expr())), NonlocalResult);
}

TEST_CASE("integration by parts examples") {
  Canonical c1 = ibp_canonicalize(wedge(eta({xt}), th()) + wedge(eta(), th({xt})));
  CHECK(c1.remainder.is_zero());
  CHECK(c1.certificate.W_xt == wedge(eta(), th()));
  CHECK(c1.certificate.W_x.is_zero());
  CHECK(c1.certificate.W_zt.is_zero());

  Canonical c2 = ibp_canonicalize(wedge(eta({xt}), th()));
  CHECK(c2.remainder == -wedge(eta(), th({xt})));

  // eta ^ eta_xx = D_x(eta ^ eta_x) although no factor is moved to the front.
  CHECK(ibp_canonicalize(wedge(eta(), eta({x, x}))).remainder.is_zero());
  CHECK_FALSE(ibp_canonicalize(wedge(eta(), eta({x}))).remainder.is_zero());
  CHECK_THROWS_AS(ibp_canonicalize(WedgeExpr::scalar(DiffExpr(1))), std::invalid_argument);
  CHECK_THROWS_AS(ibp_canonicalize(eta({}, Txt)), std::invalid_argument);
}

TEST_CASE("vertical differential") {
  CHECK(vertical_differential(wedge(du(), du({xt}))).is_zero());
  CHECK(vertical_differential(du().times(DiffExpr::jet(Dep::u))).is_zero());
  CHECK(vertical_differential(du({x}).times(DiffExpr::jet(Dep::v))) == wedge(dv(), du({x})));
  CHECK(vertical_differential(omega_form()) ==
        (wedge(wedge(dv({zt}) + du({x, zt}), du()), du({xt})) + wedge(wedge(dv({xt}) - du({x, xt}), du()), du({zt})))
                .scaled(Rational(1, 2)) +
            wedge(wedge(du({xt, zt}), dv()), du()));
  CHECK_THROWS_AS(vertical_differential(eta()), std::invalid_argument);
}

TEST_CASE("omega is closed up to a divergence") {
  VerificationReport r = check_omega_closed(defs());
  CHECK_MESSAGE(r.passed(), r.residual);
}

TEST_CASE("Jacobi criterion") {
  CHECK(jacobi_criterion(defs().matrix("J0")).report.passed());
  CHECK(jacobi_criterion(defs().matrix("J1")).report.passed());
  CHECK(jacobi_criterion(defs().matrix("J2")).report.passed());
  JacobiResult jr = jacobi_criterion(defs().matrix("Jabc"));
  CHECK(jr.report.passed());
  CHECK(jr.canonical.certificate.verifies(jr.prv_theta, jr.canonical.remainder));

  MatrixOp m = defs().matrix("J1");
  m.at(0, 1) = -m.at(0, 1);
  JacobiResult bad = jacobi_criterion(m);
  CHECK(bad.report.status == Status::nonlocal_residue);
  CHECK_FALSE(bad.nonlocal_part.is_zero());

  MatrixOp m0 = defs().matrix("J0");
  m0.at(1, 1) = -m0.at(1, 1);
  JacobiResult bad0 = jacobi_criterion(m0);
  CHECK(bad0.report.status == Status::fail);
  CHECK_FALSE(bad0.canonical.remainder.is_zero());
}

TEST_CASE("pencil check and mutants") {
  VerificationReport p = check_jacobi_pencil(defs());
  CHECK_MESSAGE(p.passed(), p.residual);
  VerificationReport m = check_jacobi_mutants(defs());
  CHECK_MESSAGE(m.passed(), m.residual);
  CHECK(jacobi_mutants(defs()).size() >= 5);
}

TEST_CASE("identities between A, mu and nu hold definitionally") {
  CHECK(total_derivative(A_expr(), x).scaled(2) == total_derivative(mu_expr(), xt) - total_derivative(nu_expr(), zt));
  CHECK(DiffExpr::jet(Dep::v, {xt, zt}).scaled(2) == total_derivative(mu_expr(), xt) + total_derivative(nu_expr(), zt));
}

TEST_CASE("property: swapping adjacent factors flips the sign") {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 40; ++i) {
    WedgeExpr::Mono m{random_factor(rng), random_factor(rng), random_factor(rng)};
    WedgeExpr a, b;
    a.add(m, DiffExpr(1));
    std::swap(m[0], m[1]);
    b.add(m, DiffExpr(1));
    CHECK(a == -b);
  }
}

TEST_CASE("property: pr v is a derivation and commutes with D") {
  std::mt19937_64 rng(83);
  Prolongation pr(defs().matrix("Jabc"));
  for (int i = 0; i < 20; ++i) {
    DiffExpr e1 = gen::random_expr(rng, 2, 2, true), e2 = gen::random_expr(rng, 2, 2, true);
    CHECK(pr(e1 * e2) == pr(e1).times(e2) + pr(e2).times(e1));
    for (auto v : kSpaceVars) {
      WedgeExpr lhs = pr(total_derivative(e1, v)), rhs = total_derivative(pr(e1), v);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("property: certificates re-expand and divergences vanish") {
  std::mt19937_64 rng(89);
  for (int i = 0; i < 30; ++i) {
    WedgeExpr w = random_wedge(rng, 1 + i % 3);
    Canonical c = ibp_canonicalize(w);
    CHECK(c.certificate.verifies(w, c.remainder));
    CHECK(ibp_canonicalize(c.remainder).remainder == c.remainder);
    WedgeExpr div = total_derivative(random_wedge(rng, 2), static_cast<BaseVar>(1 + i % 3));
    CHECK(ibp_canonicalize(div).remainder.is_zero());
    // Equivalent inputs give identical remainders.
    CHECK(ibp_canonicalize(w + div).remainder == c.remainder);
  }
}

TEST_CASE("property: Euler operators agree with the canonical remainder") {
  std::mt19937_64 rng(97);
  for (int i = 0; i < 30; ++i) {
    WedgeExpr w = i % 2 ? random_wedge(rng, 2) : total_derivative(random_wedge(rng, 2), static_cast<BaseVar>(1 + i % 3));
    bool euler_zero = odd_euler(w, Comp::eta).is_zero() && odd_euler(w, Comp::theta).is_zero() &&
                      even_euler(w, Dep::u).is_zero() && even_euler(w, Dep::v).is_zero();
    CHECK(euler_zero == ibp_canonicalize(w).remainder.is_zero());
  }
}

TEST_CASE("property: d d = 0") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 30; ++i) {
    WedgeExpr w = random_wedge(rng, 1 + i % 2, true);
    CHECK(vertical_differential(vertical_differential(w)).is_zero());
  }
}
