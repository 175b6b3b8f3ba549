#include <doctest.h>

#include "fhs/mathdsl.hpp"
#include "gen.hpp"

using namespace fhs;

namespace {

constexpr auto x = BaseVar::x;
constexpr auto xt = BaseVar::xt;
constexpr auto zt = BaseVar::zt;

DiffExpr u(std::initializer_list<BaseVar> v = {}) { return DiffExpr::jet(Dep::u, v); }
DiffExpr v(std::initializer_list<BaseVar> w = {}) { return DiffExpr::jet(Dep::v, w); }

ParseError parse_error(std::string_view text) {
  try {
    parse_defs(text, "t.defs");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError({}, "");
}

}  // namespace

TEST_CASE("parse examples") {
  auto d = parse_defs(
      "def A : expr = u[xt,zt];\n"
      "def J0_12 : operator = (1/u[xt,zt]);\n"
      "def H1 : density = 1/2*(v^2+u[x]^2)*u[xt,zt] - u;\n");
  CHECK(d.expr("A") == A_expr());
  CHECK(d.op("J0_12") == PseudoDiffOp(A_expr().inverse()));
  DiffExpr H1 = (v().pow(2) + u({x}).pow(2)).scaled(Rational(1, 2)) * A_expr() - u();
  CHECK(d.expr("H1") == H1);
}

TEST_CASE("print examples") {
  CHECK(print(A_expr()) == "u[xt,zt]");
  CHECK(print(-PseudoDiffOp::letter(xt, -1)) == "-Dixt");
  CHECK(print(DiffExpr()) == "0");
  CHECK(print(PseudoDiffOp()) == "0");
}

TEST_CASE("jet, function and letter syntax") {
  CHECK(parse_expr("u[x,x]") == u({x, x}));
  CHECK(parse_expr("u[xt,x]") == u({x, xt}));
  CHECK(parse_expr("a''") == DiffExpr::func(Func::a, 2));
  CHECK(parse_expr("f[1,2,2]") == DiffExpr::func(Func::f, 1, 2));
  CHECK(parse_expr("g") == DiffExpr::func(Func::g));
  CHECK(parse_expr("$eps*xt") == DiffExpr::param("eps") * DiffExpr::var(xt));
  CHECK(parse_expr("3/4") == DiffExpr(Rational(3, 4)));
  CHECK(parse_expr("u[zt]^-2") == u({zt}).pow(-2));
  CHECK(parse_operator("Dx^2") == PseudoDiffOp::letter(x, 2));
  CHECK(parse_operator("Dx . u") == PseudoDiffOp(u()) * PseudoDiffOp::letter(x) + PseudoDiffOp(u({x})));
  CHECK(parse_operator("Dx * u") == parse_operator("Dx . u"));
  MatrixOp m = parse_matrix("[[0, 1], [-1, Dizt]]");
  CHECK(m.at(1, 1) == PseudoDiffOp::letter(zt, -1));
  CHECK(m.at(1, 0) == PseudoDiffOp(-1));
}

TEST_CASE("kinds and references") {
  auto d = parse_defs(
      "# comment\n"
      "def m : expr = v[zt] + u[x,zt];\n"
      "def c : characteristic = (m, -m);\n"
      "def gen1 : generator = (0, 0, 0, 1, u, v);\n"
      "def M : matrixop = 2 . [[m, 0], [0, Dx]];\n");
  CHECK(d.expr("m") == mu_expr());
  CHECK(d.characteristic("c").psi == -mu_expr());
  CHECK(d.generator("gen1").c[5] == v());
  CHECK(d.matrix("M").at(0, 0) == PseudoDiffOp(mu_expr().scaled(2)));
  CHECK(print(d.at("c")) == "def c : characteristic = (u[x,zt] + v[zt], -u[x,zt] - v[zt]);");
}

TEST_CASE("errors carry source spans") {
  ParseError e = parse_error("def A : expr = u[xt,zt];\ndef A : expr = u;\n");
  CHECK(e.span.line == 2);
  CHECK(e.span.column == 5);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  e = parse_error("def B : expr = C + u;\ndef C : expr = v;\n");
  CHECK(e.span.line == 1);
  CHECK(e.span.column == 16);
  CHECK(std::string(e.what()).find("forward reference") != std::string::npos);

  e = parse_error("def B : expr = u[y];");
  CHECK(e.span.column == 18);
  e = parse_error("def B : expr = u +;");
  CHECK(e.span.column == 19);
  e = parse_error("def B : expr = Dx;");
  CHECK(std::string(e.what()).find("differential function") != std::string::npos);
  e = parse_error("def B : operator = u / (u + v);");
  CHECK(e.span.column == 24);
  e = parse_error("def u : expr = v;");
  CHECK(std::string(e.what()).find("reserved") != std::string::npos);
  e = parse_error("def B : expr = u @ v;");
  CHECK(e.span.column == 18);
  e = parse_error("def B : widget = u;");
  CHECK(e.span.column == 9);
  e = parse_error("def B : expr = u");
  CHECK(std::string(e.what()).find("end of input") != std::string::npos);
}

TEST_CASE("utf-8 comments are accepted") {
  auto d = parse_defs("# x\xcc\x83 and z\xcc\x83\ndef A : expr = u[xt,zt];\n");
  CHECK(d.contains("A"));
}

TEST_CASE("property: expressions round trip") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    DiffExpr e = gen::random_expr(rng, 4, 3, true);
    if (i % 3 == 0) e *= DiffExpr::func(static_cast<Func>(i % 4), i % 3, (i / 3) % 2) + DiffExpr::var(zt);
    if (i % 5 == 0) e *= DiffExpr::param("eps");
    CHECK(parse_expr(print(e)) == e);
  }
}

TEST_CASE("property: operators and matrices round trip") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 60; ++i) {
    PseudoDiffOp P = gen::random_op(rng, true, 3) * gen::random_op(rng, true, 1);
    CHECK(parse_operator(print(P)) == P);
    MatrixOp M(P, gen::random_op(rng, true), 0, gen::random_op(rng, false));
    CHECK(parse_matrix(print(M)) == M);
  }
}

TEST_CASE("shipped definitions round trip") {
  Definitions d = load_defs(FHS_DEFS_PATH);
  Definitions again = parse_defs(print(d));
  REQUIRE(again.all().size() == d.all().size());
  for (const auto& def : d.all()) CHECK(print(again.at(def.name)) == print(def));
}
