#include "fhs/mathdsl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace fhs {

std::string SourceSpan::str() const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

std::string_view kind_name(DefKind k) {
  switch (k) {
    case DefKind::expr: return "expr";
    case DefKind::op: return "operator";
    case DefKind::matrixop: return "matrixop";
    case DefKind::characteristic: return "characteristic";
    case DefKind::density: return "density";
    case DefKind::generator: return "generator";
  }
  return "?";
}

namespace {

enum class Tok { ident, number, param, sym, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  SourceSpan span;
};

std::vector<Token> tokenize(std::string_view src, const std::string& file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    Token t;
    t.span = {file, line, col, 1};
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::number;
    } else if (ch == '$') {
      ++j;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      if (j == i + 1) throw ParseError(t.span, "expected a parameter name after '$'");
      t.kind = Tok::param;
    } else if (std::string_view("+-*/.^,;:=()[]'").find(ch) != std::string_view::npos) {
      j = i + 1;
      t.kind = Tok::sym;
    } else {
      throw ParseError(t.span, std::string("unexpected character '") + ch + "'");
    }
    t.text = std::string(src.substr(i, j - i));
    t.span.length = static_cast<int>(j - i);
    out.push_back(std::move(t));
    advance(j - i);
  }
  Token end;
  end.span = {file, line, col, 0};
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>>& reserved() {
  static const std::set<std::string, std::less<>> r{"u",  "v",   "w1",   "w2",   "t",    "x",  "xt", "zt", "a",
                                                    "b",  "f",   "g",    "Dt",   "Dx",   "Dxt", "Dzt", "Dix",
                                                    "Dixt", "Dizt", "def"};
  return r;
}

std::optional<BaseVar> base_var_named(std::string_view s) {
  if (s == "t") return BaseVar::t;
  if (s == "x") return BaseVar::x;
  if (s == "xt") return BaseVar::xt;
  if (s == "zt") return BaseVar::zt;
  return std::nullopt;
}

std::optional<Dep> dep_named(std::string_view s) {
  if (s == "u") return Dep::u;
  if (s == "v") return Dep::v;
  if (s == "w1") return Dep::w1;
  if (s == "w2") return Dep::w2;
  return std::nullopt;
}

std::string value_kind(const Value& v) {
  if (std::holds_alternative<PseudoDiffOp>(v)) return "operator";
  if (std::holds_alternative<MatrixOp>(v)) return "matrix";
  return "tuple of " + std::to_string(std::get<Tuple>(v).size());
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Definitions& scope, std::set<std::string, std::less<>> later)
      : toks_(std::move(toks)), scope_(scope), later_(std::move(later)) {}

  bool at_end() const { return peek().kind == Tok::end; }
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::sym && peek(k).text == s;
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  const Token& expect_sym(std::string_view s) {
    if (!is_sym(s)) throw ParseError(peek().span, "expected '" + std::string(s) + "'" + found());
    return next();
  }
  const Token& expect_ident() {
    if (peek().kind != Tok::ident) throw ParseError(peek().span, "expected a name" + found());
    return next();
  }
  std::string found() const {
    return at_end() ? ", found end of input" : ", found '" + peek().text + "'";
  }

  Definition definition() {
    const Token& kw = expect_ident();
    if (kw.text != "def") throw ParseError(kw.span, "expected 'def'");
    const Token& nm = expect_ident();
    Definition d;
    d.name = nm.text;
    d.span = nm.span;
    if (reserved().count(nm.text)) throw ParseError(nm.span, "'" + nm.text + "' is a reserved name");
    if (scope_.contains(nm.text)) {
      throw ParseError(nm.span, "duplicate definition of '" + nm.text + "' (first at " +
                                    scope_.at(nm.text).span.str() + ")");
    }
    expect_sym(":");
    const Token& kt = expect_ident();
    static const std::map<std::string, DefKind, std::less<>> kinds{
        {"expr", DefKind::expr},
        {"operator", DefKind::op},
        {"matrixop", DefKind::matrixop},
        {"characteristic", DefKind::characteristic},
        {"density", DefKind::density},
        {"generator", DefKind::generator}};
    auto kit = kinds.find(kt.text);
    if (kit == kinds.end()) throw ParseError(kt.span, "unknown kind '" + kt.text + "'");
    d.kind = kit->second;
    expect_sym("=");
    const SourceSpan body = peek().span;
    d.value = expression();
    expect_sym(";");
    check_kind(d, body);
    return d;
  }

  Value expression() {
    Value v = term();
    while (is_sym("+") || is_sym("-")) {
      const Token& op = next();
      Value r = term();
      v = additive(v, r, op.text == "-", op.span);
    }
    return v;
  }

 private:
  void check_kind(Definition& d, const SourceSpan& body) {
    auto scalar_expr = [&](const PseudoDiffOp& p) {
      if (!p.is_multiplication()) throw ParseError(body, "'" + d.name + "' must be a differential function");
    };
    switch (d.kind) {
      case DefKind::expr:
      case DefKind::density:
      case DefKind::op:
        if (!std::holds_alternative<PseudoDiffOp>(d.value)) {
          throw ParseError(body, "'" + d.name + "' is declared " + std::string(kind_name(d.kind)) + " but is a " +
                                     value_kind(d.value));
        }
        if (d.kind != DefKind::op) scalar_expr(std::get<PseudoDiffOp>(d.value));
        break;
      case DefKind::matrixop:
        if (!std::holds_alternative<MatrixOp>(d.value)) {
          throw ParseError(body, "'" + d.name + "' is declared matrixop but is a " + value_kind(d.value));
        }
        break;
      case DefKind::characteristic:
      case DefKind::generator: {
        std::size_t n = d.kind == DefKind::characteristic ? 2 : 6;
        auto* tp = std::get_if<Tuple>(&d.value);
        if (tp == nullptr || tp->size() != n) {
          throw ParseError(body, "'" + d.name + "' must be a tuple of " + std::to_string(n) + " components");
        }
        for (const auto& c : *tp) scalar_expr(c);
        break;
      }
    }
  }

  static Value additive(const Value& a, const Value& b, bool minus, const SourceSpan& at) {
    if (a.index() != b.index()) {
      throw ParseError(at, "cannot add " + value_kind(a) + " and " + value_kind(b));
    }
    if (auto* p = std::get_if<PseudoDiffOp>(&a)) {
      const auto& q = std::get<PseudoDiffOp>(b);
      return minus ? *p - q : *p + q;
    }
    if (auto* p = std::get_if<MatrixOp>(&a)) {
      const auto& q = std::get<MatrixOp>(b);
      return minus ? *p - q : *p + q;
    }
    const auto& ta = std::get<Tuple>(a);
    const auto& tb = std::get<Tuple>(b);
    if (ta.size() != tb.size()) throw ParseError(at, "tuple sizes differ");
    Tuple r;
    for (std::size_t i = 0; i < ta.size(); ++i) r.push_back(minus ? ta[i] - tb[i] : ta[i] + tb[i]);
    return r;
  }

  static Value negate(const Value& a) {
    if (auto* p = std::get_if<PseudoDiffOp>(&a)) return -*p;
    if (auto* p = std::get_if<MatrixOp>(&a)) return -*p;
    Tuple r;
    for (const auto& c : std::get<Tuple>(a)) r.push_back(-c);
    return r;
  }

  static Value compose(const Value& a, const Value& b, const SourceSpan& at) {
    auto* pa = std::get_if<PseudoDiffOp>(&a);
    auto* pb = std::get_if<PseudoDiffOp>(&b);
    auto* ma = std::get_if<MatrixOp>(&a);
    auto* mb = std::get_if<MatrixOp>(&b);
    if (pa && pb) return *pa * *pb;
    if (ma && mb) return *ma * *mb;
    if (pa && mb) return MatrixOp(*pa, 0, 0, *pa) * *mb;
    if (ma && pb) return *ma * MatrixOp(*pb, 0, 0, *pb);
    if (pa) {
      Tuple r;
      for (const auto& c : std::get<Tuple>(b)) r.push_back(*pa * c);
      return r;
    }
    if (pb) {
      Tuple r;
      for (const auto& c : std::get<Tuple>(a)) r.push_back(c * *pb);
      return r;
    }
    throw ParseError(at, "cannot compose " + value_kind(a) + " with " + value_kind(b));
  }

  static std::optional<DiffExpr> monomial_of(const Value& v) {
    auto* p = std::get_if<PseudoDiffOp>(&v);
    if (p == nullptr || !p->is_multiplication()) return std::nullopt;
    DiffExpr e = p->as_multiplication();
    if (!e.is_monomial()) return std::nullopt;
    return e;
  }

  Value term() {
    Value v = unary();
    while (is_sym("*") || is_sym(".") || is_sym("/")) {
      const Token& op = next();
      SourceSpan rs = peek().span;
      Value r = unary();
      if (op.text == "/") {
        auto m = monomial_of(r);
        if (!m) throw ParseError(rs, "division requires a single-term differential function");
        r = PseudoDiffOp(m->inverse());
      }
      v = compose(v, r, op.span);
    }
    return v;
  }

  Value unary() {
    if (is_sym("-")) {
      next();
      return negate(unary());
    }
    return power();
  }

  Value power() {
    SourceSpan base_span = peek().span;
    Value v = primary();
    if (!is_sym("^")) return v;
    next();
    bool neg = false;
    if (is_sym("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::number) throw ParseError(peek().span, "expected an integer exponent" + found());
    const Token& nt = next();
    int n = std::stoi(nt.text);
    if (neg) n = -n;
    if (auto m = monomial_of(v)) return PseudoDiffOp(m->pow(n));
    if (n < 0) throw ParseError(base_span, "negative powers require a single-term differential function");
    if (auto* p = std::get_if<PseudoDiffOp>(&v)) return p->pow(n);
    if (auto* p = std::get_if<MatrixOp>(&v)) {
      MatrixOp r = MatrixOp::identity();
      for (int i = 0; i < n; ++i) r = r * *p;
      return r;
    }
    throw ParseError(base_span, "cannot raise a tuple to a power");
  }

  std::vector<BaseVar> var_list() {
    std::vector<BaseVar> vars;
    expect_sym("[");
    while (true) {
      const Token& t = expect_ident();
      auto bv = base_var_named(t.text);
      if (!bv) throw ParseError(t.span, "unknown variable '" + t.text + "'");
      vars.push_back(*bv);
      if (is_sym("]")) break;
      expect_sym(",");
    }
    next();
    return vars;
  }

  Value primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: {
        next();
        return PseudoDiffOp(DiffExpr(Rational::parse(t.text)));
      }
      case Tok::param:
        next();
        return PseudoDiffOp(DiffExpr::param(t.text.substr(1)));
      case Tok::sym:
        if (t.text == "(") return paren();
        if (t.text == "[") return matrix();
        throw ParseError(t.span, "unexpected '" + t.text + "'");
      case Tok::end:
        throw ParseError(t.span, "unexpected end of input");
      case Tok::ident:
        break;
    }
    next();
    const std::string& s = t.text;
    if (auto d = dep_named(s)) {
      MultiIndex mi;
      if (is_sym("[")) {
        for (auto bv : var_list()) mi = mi.raised(bv);
      }
      return PseudoDiffOp(DiffExpr::jet(*d, mi));
    }
    if (auto bv = base_var_named(s)) return PseudoDiffOp(DiffExpr::var(*bv));
    if (s == "a" || s == "b") {
      int k = 0;
      while (is_sym("'")) {
        next();
        ++k;
      }
      return PseudoDiffOp(DiffExpr::func(s == "a" ? Func::a : Func::b, k));
    }
    if (s == "f" || s == "g") {
      int d1 = 0, d2 = 0;
      if (is_sym("[")) {
        next();
        while (true) {
          const Token& n = next();
          if (n.kind != Tok::number || (n.text != "1" && n.text != "2")) {
            throw ParseError(n.span, "function argument index must be 1 or 2");
          }
          (n.text == "1" ? d1 : d2) += 1;
          if (is_sym("]")) break;
          expect_sym(",");
        }
        next();
      }
      return PseudoDiffOp(DiffExpr::func(s == "f" ? Func::f : Func::g, d1, d2));
    }
    static const std::map<std::string, std::pair<BaseVar, int>, std::less<>> letters{
        {"Dt", {BaseVar::t, 1}},     {"Dx", {BaseVar::x, 1}},      {"Dxt", {BaseVar::xt, 1}},
        {"Dzt", {BaseVar::zt, 1}},   {"Dix", {BaseVar::x, -1}},    {"Dixt", {BaseVar::xt, -1}},
        {"Dizt", {BaseVar::zt, -1}}};
    if (auto it = letters.find(s); it != letters.end()) {
      return PseudoDiffOp::letter(it->second.first, it->second.second);
    }
    if (scope_.contains(s)) return scope_.at(s).value;
    if (later_.count(s)) throw ParseError(t.span, "forward reference to '" + s + "'");
    throw ParseError(t.span, "unknown name '" + s + "'");
  }

  Value paren() {
    expect_sym("(");
    std::vector<Value> items{expression()};
    while (is_sym(",")) {
      next();
      items.push_back(expression());
    }
    SourceSpan close = peek().span;
    expect_sym(")");
    if (items.size() == 1) return items[0];
    Tuple r;
    for (const auto& it : items) {
      auto* p = std::get_if<PseudoDiffOp>(&it);
      if (p == nullptr) throw ParseError(close, "tuple components must be scalar");
      r.push_back(*p);
    }
    return r;
  }

  Value matrix() {
    const SourceSpan open = peek().span;
    expect_sym("[");
    std::array<PseudoDiffOp, 4> e;
    for (int i = 0; i < 2; ++i) {
      if (i) expect_sym(",");
      expect_sym("[");
      for (int j = 0; j < 2; ++j) {
        if (j) expect_sym(",");
        SourceSpan es = peek().span;
        Value v = expression();
        auto* p = std::get_if<PseudoDiffOp>(&v);
        if (p == nullptr) throw ParseError(es, "matrix entries must be scalar operators");
        e[static_cast<std::size_t>(2 * i + j)] = *p;
      }
      expect_sym("]");
    }
    if (!is_sym("]")) throw ParseError(open, "only 2x2 matrices are supported");
    next();
    return MatrixOp(e[0], e[1], e[2], e[3]);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Definitions& scope_;
  std::set<std::string, std::less<>> later_;
};

}  // namespace

DiffExpr Definition::expr() const {
  const auto* p = std::get_if<PseudoDiffOp>(&value);
  if (p == nullptr || !p->is_multiplication()) throw std::invalid_argument(name + " is not a differential function");
  return p->as_multiplication();
}

const PseudoDiffOp& Definition::op() const {
  const auto* p = std::get_if<PseudoDiffOp>(&value);
  if (p == nullptr) throw std::invalid_argument(name + " is not a scalar operator");
  return *p;
}

const MatrixOp& Definition::matrix() const {
  const auto* p = std::get_if<MatrixOp>(&value);
  if (p == nullptr) throw std::invalid_argument(name + " is not a matrix operator");
  return *p;
}

Characteristic Definition::characteristic() const {
  const auto* p = std::get_if<Tuple>(&value);
  if (p == nullptr || p->size() != 2) throw std::invalid_argument(name + " is not a characteristic");
  return {(*p)[0].as_multiplication(), (*p)[1].as_multiplication()};
}

PointGenerator Definition::generator() const {
  const auto* p = std::get_if<Tuple>(&value);
  if (p == nullptr || p->size() != 6) throw std::invalid_argument(name + " is not a generator");
  PointGenerator g;
  for (std::size_t i = 0; i < 6; ++i) g.c[i] = (*p)[i].as_multiplication();
  return g;
}

bool Definitions::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

const Definition& Definitions::at(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no definition named " + std::string(name));
  return defs_[it->second];
}

void Definitions::add(Definition d) {
  if (contains(d.name)) throw std::invalid_argument("duplicate definition " + d.name);
  index_.emplace(d.name, defs_.size());
  defs_.push_back(std::move(d));
}

Definitions parse_defs(std::string_view text, const std::string& file) {
  std::vector<Token> toks = tokenize(text, file);
  std::set<std::string, std::less<>> names;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].kind == Tok::ident && toks[i].text == "def" && toks[i + 1].kind == Tok::ident) {
      names.insert(toks[i + 1].text);
    }
  }
  Definitions defs;
  Parser p(std::move(toks), defs, names);
  while (!p.at_end()) defs.add(p.definition());
  return defs;
}

Definitions load_defs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_defs(ss.str(), path);
}

Value parse_value(std::string_view text, const Definitions& scope) {
  Parser p(tokenize(text, "<expr>"), scope, {});
  Value v = p.expression();
  if (!p.at_end()) throw ParseError(p.peek().span, "trailing input" + p.found());
  return v;
}

DiffExpr parse_expr(std::string_view text, const Definitions& scope) {
  Value v = parse_value(text, scope);
  auto* p = std::get_if<PseudoDiffOp>(&v);
  if (p == nullptr || !p->is_multiplication()) {
    throw ParseError({"<expr>", 1, 1, static_cast<int>(text.size())}, "not a differential function");
  }
  return p->as_multiplication();
}

PseudoDiffOp parse_operator(std::string_view text, const Definitions& scope) {
  Value v = parse_value(text, scope);
  auto* p = std::get_if<PseudoDiffOp>(&v);
  if (p == nullptr) throw ParseError({"<expr>", 1, 1, static_cast<int>(text.size())}, "not a scalar operator");
  return *p;
}

MatrixOp parse_matrix(std::string_view text, const Definitions& scope) {
  Value v = parse_value(text, scope);
  auto* p = std::get_if<MatrixOp>(&v);
  if (p == nullptr) throw ParseError({"<expr>", 1, 1, static_cast<int>(text.size())}, "not a matrix operator");
  return *p;
}

std::string print(const DiffExpr& e) { return e.str(); }
std::string print(const PseudoDiffOp& p) { return p.str(); }
std::string print(const MatrixOp& m) { return m.str(); }
std::string print(const Characteristic& c) { return "(" + c.phi.str() + ", " + c.psi.str() + ")"; }

std::string print(const Value& v) {
  if (auto* p = std::get_if<PseudoDiffOp>(&v)) return p->str();
  if (auto* p = std::get_if<MatrixOp>(&v)) return p->str();
  std::string s = "(";
  const auto& t = std::get<Tuple>(v);
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + t[i].str();
  return s + ")";
}

std::string print(const Definition& d) {
  return "def " + d.name + " : " + std::string(kind_name(d.kind)) + " = " + print(d.value) + ";";
}

std::string print(const Definitions& d) {
  std::string s;
  for (const auto& def : d.all()) s += print(def) + "\n";
  return s;
}

}  // namespace fhs
