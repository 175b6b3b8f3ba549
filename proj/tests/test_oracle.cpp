#include <doctest.h>

#include "fhs/multivector.hpp"
#include "fhs/oracle.hpp"
#include "fhs/symmetry.hpp"
#include "gen.hpp"

using namespace fhs;

namespace {

const Definitions& defs() {
  static const Definitions d = load_defs(FHS_DEFS_PATH);
  return d;
}

DiffExpr ux() { return DiffExpr::jet(Dep::u, {BaseVar::x}); }

}  // namespace

TEST_CASE("valuations are exact, bounded and deterministic") {
  Valuation a(7, 3), b(7, 3);
  Symbol s = Symbol::jet(Dep::u, MultiIndex::of({BaseVar::xt, BaseVar::zt}));
  CHECK(a.value(s) == b.value(s));
  Rational r = a.value(s);
  CHECK(r.is_small());
  CHECK(r.small_den() >= 1);
  CHECK(r.small_den() <= 9);
  CHECK(r.small_num() >= -99);
  CHECK(r.small_num() <= 99);
  int differ = 0;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    Symbol p = Symbol::jet(Dep::v, gen::random_index(rng, 3));
    differ += Valuation(7, 3).value(p) != Valuation(8, 3).value(p) ? 1 : 0;
  }
  CHECK(differ > 0);
  CHECK(a.eval(DiffExpr(Rational(3, 4))) == Rational(3, 4));
  CHECK(a.eval(DiffExpr(s) * DiffExpr(s)) == r * r);
}

TEST_CASE("zero denominators are resampled") {
  // Find a valuation in which u_x vanishes.
  std::uint64_t seed = 0;
  while (!Valuation(seed, 0).value(Symbol::jet(Dep::u, MultiIndex::of({BaseVar::x}))).is_zero()) ++seed;
  CHECK_FALSE(Valuation(seed, 0).eval(ux().inverse()).has_value());
  // The first trial still produces a value after resampling.
  VerificationReport r = random_check(ux().inverse(), 1, seed);
  CHECK(r.status == Status::fail);
  CHECK(r.residual.find("trial 0: value") != std::string::npos);
}

TEST_CASE("random_check examples") {
  Characteristic c3 = characteristic_from_generator(defs().generator("X3"));
  auto [r1, r2] = check_symmetry(c3);
  CHECK(random_check(r1, kDefaultTrials, 1).passed());
  CHECK(random_check(r2, kDefaultTrials, 1).passed());
  CHECK(random_check(ux() * DiffExpr::jet(Dep::u, {BaseVar::xt}) - DiffExpr::jet(Dep::u, {BaseVar::xt}) * ux(), 10, 1)
            .passed());
  auto [s1, s2] = check_symmetry({DiffExpr::jet(Dep::u), 0});
  VerificationReport bad = random_check(s2, 10, 1);
  CHECK(bad.status == Status::fail);
  CHECK(bad.residual.find("trial 0") != std::string::npos);
}

TEST_CASE("wedge_random_check examples") {
  WedgeExpr et = wedge(WedgeExpr::factor(WedgeFactor::of(Comp::eta)), WedgeExpr::factor(WedgeFactor::of(Comp::theta)));
  CHECK(wedge_random_check(et - et, 10, 1).passed());
  CHECK_FALSE(wedge_random_check(et, 10, 1).passed());
  JacobiResult jr = jacobi_criterion(defs().matrix("Jabc"));
  CHECK(wedge_random_check(jr.canonical.remainder, kDefaultTrials, 5).passed());
  CHECK(check_claims(jr.report, 20, 5).passed());
  MatrixOp m = defs().matrix("J0");
  m.at(1, 1) = -m.at(1, 1);
  CHECK_FALSE(wedge_random_check(jacobi_criterion(m).canonical.remainder, 10, 5).passed());
}

TEST_CASE("identical seeds give identical reports") {
  DiffExpr e = Q_expr() - DiffExpr::jet(Dep::u, {BaseVar::x, BaseVar::x});
  VerificationReport a = random_check(e, 10, 42), b = random_check(e, 10, 42);
  CHECK(a.residual == b.residual);
  CHECK(a.status == b.status);
}

TEST_CASE("property: symbolic zero and oracle agree") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 30; ++i) {
    DiffExpr e = gen::random_expr(rng, 3, 2, true);
    DiffExpr comm = total_derivative(total_derivative(e, BaseVar::x), BaseVar::zt) -
                    total_derivative(total_derivative(e, BaseVar::zt), BaseVar::x);
    CHECK(comm.is_zero());
    CHECK(random_check(comm, 5, static_cast<std::uint64_t>(i)).passed());
    DiffExpr d = total_derivative(e, BaseVar::xt);
    CHECK(random_check(d, 5, static_cast<std::uint64_t>(i)).passed() == d.is_zero());
  }
}
