#include "fhs/opalg.hpp"

#include <algorithm>
#include <set>

namespace fhs {

namespace {

using Terms = PseudoDiffOp::Terms;

constexpr auto t = BaseVar::t;
constexpr auto x = BaseVar::x;
constexpr auto xt = BaseVar::xt;
constexpr auto zt = BaseVar::zt;

int idx(BaseVar v) { return static_cast<int>(v); }

void accumulate(Terms& out, const Composition& c, const Rational& r) {
  if (r.is_zero()) return;
  auto [it, inserted] = out.try_emplace(c, r);
  if (!inserted) {
    it->second += r;
    if (it->second.is_zero()) out.erase(it);
  }
}

bool depends_on_word(Symbol s, const Word& w) {
  for (auto v : kAllVars) {
    if (w[static_cast<std::size_t>(idx(v))] != 0 && depends_on_var(s, v)) return true;
  }
  return false;
}

// Commutes free factors out of inverse blocks, drops empty blocks and merges
// blocks separated by the unit monomial.
void fix_shape(Composition& c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      if (is_zero_word(c.ns[i])) {
        c.ms[i] = c.ms[i] * c.ms[i + 1];
        c.ms.erase(c.ms.begin() + static_cast<long>(i) + 1);
        c.ns.erase(c.ns.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t i = c.ns.size(); i >= 1; --i) {
      Monomial keep, free;
      for (const auto& f : c.ms[i].factors()) {
        if (depends_on_word(f.sym, c.ns[i - 1])) {
          keep.mul(f.sym, f.exp);
        } else {
          free.mul(f.sym, f.exp);
        }
      }
      if (!free.is_one()) {
        c.ms[i] = keep;
        c.ms[i - 1] = c.ms[i - 1] * free;
      }
    }
    for (std::size_t i = 1; i + 1 < c.ms.size(); ++i) {
      if (c.ms[i].is_one()) {
        for (std::size_t k = 0; k < 4; ++k) {
          c.ns[i - 1][k] = static_cast<std::int8_t>(c.ns[i - 1][k] + c.ns[i][k]);
        }
        c.ms.erase(c.ms.begin() + static_cast<long>(i));
        c.ns.erase(c.ns.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
}

void canonicalize(Composition c, const Rational& r, Terms& out);

// D_xi^(-1) . X . D_xi -> X - D_xi^(-1) . [D_xi, X], generalized to the last
// block holding an inverse xi letter.
bool cancel_step(const Composition& c, const Rational& r, Terms& out) {
  for (auto v : kAllVars) {
    auto vi = static_cast<std::size_t>(idx(v));
    if (c.local[vi] <= 0) continue;
    std::size_t last = c.ns.size();
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      if (c.ns[i][vi] < 0) last = i;
    }
    if (last == c.ns.size()) continue;
    Composition base = c;
    base.local[vi] = static_cast<std::int8_t>(base.local[vi] - 1);
    Composition moved = base;
    moved.ns[last][vi] = static_cast<std::int8_t>(moved.ns[last][vi] + 1);
    canonicalize(std::move(moved), r, out);
    for (std::size_t j = last + 1; j < c.ms.size(); ++j) {
      DiffExpr d = total_derivative(DiffExpr(c.ms[j], Rational(1)), v, Mode::full_jet);
      for (const auto& term : d.terms()) {
        Composition k = base;
        k.ms[j] = term.mono;
        canonicalize(std::move(k), -r * term.coef, out);
      }
    }
    return true;
  }
  return false;
}

void canonicalize(Composition c, const Rational& r, Terms& out) {
  if (r.is_zero()) return;
  fix_shape(c);
  if (cancel_step(c, r, out)) return;
  accumulate(out, c, r);
}

std::int64_t binomial(int n, int k) {
  std::int64_t b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// c . m for a coefficient expression m.
void right_mul_expr(const Composition& c, const Rational& r, const DiffExpr& m, Terms& out) {
  // L . m = sum_beta binom(L, beta) D^beta(m) . D^(L - beta)
  Word L = c.local;
  std::array<int, 4> beta{};
  std::function<void(int, DiffExpr, std::int64_t)> rec = [&](int k, DiffExpr dm, std::int64_t coef) {
    if (dm.is_zero()) return;
    if (k == 4) {
      for (const auto& term : dm.terms()) {
        Composition n = c;
        n.ms.back() = n.ms.back() * term.mono;
        for (std::size_t i = 0; i < 4; ++i) n.local[i] = static_cast<std::int8_t>(L[i] - beta[i]);
        canonicalize(std::move(n), r * term.coef * Rational(coef), out);
      }
      return;
    }
    DiffExpr cur = dm;
    for (int b = 0; b <= L[static_cast<std::size_t>(k)]; ++b) {
      beta[static_cast<std::size_t>(k)] = b;
      rec(k + 1, cur, coef * binomial(L[static_cast<std::size_t>(k)], b));
      if (b < L[static_cast<std::size_t>(k)]) cur = total_derivative(cur, static_cast<BaseVar>(k), Mode::full_jet);
    }
    beta[static_cast<std::size_t>(k)] = 0;
  };
  rec(0, m, 1);
}

void right_mul_letter(const Composition& c, const Rational& r, BaseVar v, int sign, Terms& out) {
  auto vi = static_cast<std::size_t>(idx(v));
  Composition n = c;
  if (sign > 0) {
    n.local[vi] = static_cast<std::int8_t>(n.local[vi] + 1);
  } else if (n.local[vi] > 0) {
    n.local[vi] = static_cast<std::int8_t>(n.local[vi] - 1);
  } else {
    if (v == t) throw std::invalid_argument("inverse D_t is not supported");
    Word w{};
    w[vi] = -1;
    n.ns.push_back(w);
    n.ms.emplace_back();
  }
  canonicalize(std::move(n), r, out);
}

Terms map_terms(const Terms& in, const std::function<void(const Composition&, const Rational&, Terms&)>& f) {
  Terms out;
  for (const auto& [c, r] : in) f(c, r, out);
  return out;
}

Terms mul_expr(const Terms& in, const DiffExpr& m) {
  return map_terms(in, [&](const Composition& c, const Rational& r, Terms& out) { right_mul_expr(c, r, m, out); });
}

Terms mul_word(Terms cur, const Word& w) {
  for (auto v : kAllVars) {
    int e = w[static_cast<std::size_t>(idx(v))];
    for (int i = 0; i < std::abs(e); ++i) {
      cur = map_terms(cur, [&](const Composition& c, const Rational& r, Terms& out) {
        right_mul_letter(c, r, v, e > 0 ? 1 : -1, out);
      });
    }
  }
  return cur;
}

Composition unit() {
  Composition c;
  c.ms.emplace_back();
  return c;
}

std::string word_str(const Word& w) {
  std::string s;
  for (auto v : kAllVars) {
    int e = w[static_cast<std::size_t>(idx(v))];
    if (e == 0) continue;
    if (!s.empty()) s += " . ";
    s += (e > 0 ? "D" : "Di") + std::string(name(v));
    if (std::abs(e) != 1) s += "^" + std::to_string(std::abs(e));
  }
  return s;
}

}  // namespace

bool is_zero_word(const Word& w) { return w == Word{}; }

bool depends_on_var(Symbol s, BaseVar v) {
  switch (s.kind()) {
    case Symbol::Kind::param:
      return false;
    case Symbol::Kind::base:
      return s.base_var() == v;
    case Symbol::Kind::jet:
      return true;
    case Symbol::Kind::func:
      switch (s.func_name()) {
        case Func::a: return v == xt;
        case Func::b: return v == zt;
        case Func::f: return v == t || v == x || v == xt;
        case Func::g: return v == t || v == x || v == zt;
      }
  }
  return true;
}

bool operator<(const Composition& a, const Composition& b) {
  if (a.ns.size() != b.ns.size()) return a.ns.size() < b.ns.size();
  if (a.local != b.local) return a.local < b.local;
  if (a.ns != b.ns) return a.ns < b.ns;
  return std::lexicographical_compare(a.ms.begin(), a.ms.end(), b.ms.begin(), b.ms.end());
}

PseudoDiffOp::PseudoDiffOp(const DiffExpr& e) {
  for (const auto& term : e.terms()) {
    Composition c;
    c.ms.push_back(term.mono);
    terms_.emplace(std::move(c), term.coef);
  }
}

PseudoDiffOp PseudoDiffOp::letter(BaseVar v, int power) {
  PseudoDiffOp r;
  Terms cur{{unit(), Rational(1)}};
  Word w{};
  w[static_cast<std::size_t>(idx(v))] = static_cast<std::int8_t>(power);
  r.terms_ = mul_word(std::move(cur), w);
  return r;
}

PseudoDiffOp PseudoDiffOp::from_terms(const Terms& raw) {
  PseudoDiffOp r;
  for (const auto& [c, coef] : raw) canonicalize(c, coef, r.terms_);
  return r;
}

bool PseudoDiffOp::is_local() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.first.is_local(); });
}

bool PseudoDiffOp::is_multiplication() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return kv.first.is_local() && is_zero_word(kv.first.local); });
}

DiffExpr PseudoDiffOp::as_multiplication() const {
  if (!is_multiplication()) throw std::invalid_argument("operator is not a multiplication operator: " + str());
  ExprBuilder b;
  for (const auto& [c, r] : terms_) b.add_term(c.ms[0], r);
  return b.build();
}

std::map<Word, DiffExpr> PseudoDiffOp::local_coefficients() const {
  if (!is_local()) throw std::invalid_argument("local_coefficients: nonlocal operator");
  std::map<Word, ExprBuilder> acc;
  for (const auto& [c, r] : terms_) acc[c.local].add_term(c.ms[0], r);
  std::map<Word, DiffExpr> out;
  for (auto& [w, b] : acc) out.emplace(w, b.build());
  return out;
}

PseudoDiffOp PseudoDiffOp::operator-() const { return scaled(Rational(-1)); }

PseudoDiffOp& PseudoDiffOp::operator+=(const PseudoDiffOp& o) {
  for (const auto& [c, r] : o.terms_) accumulate(terms_, c, r);
  return *this;
}

PseudoDiffOp& PseudoDiffOp::operator-=(const PseudoDiffOp& o) {
  for (const auto& [c, r] : o.terms_) accumulate(terms_, c, -r);
  return *this;
}

PseudoDiffOp PseudoDiffOp::scaled(const Rational& c) const {
  PseudoDiffOp r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
  return r;
}

PseudoDiffOp operator*(const PseudoDiffOp& a, const PseudoDiffOp& b) {
  PseudoDiffOp result;
  for (const auto& [cb, rb] : b.terms_) {
    Terms cur;
    for (const auto& [ca, ra] : a.terms_) accumulate(cur, ca, ra * rb);
    cur = mul_expr(cur, DiffExpr(cb.ms[0], Rational(1)));
    for (std::size_t i = 0; i < cb.ns.size(); ++i) {
      cur = mul_word(std::move(cur), cb.ns[i]);
      cur = mul_expr(cur, DiffExpr(cb.ms[i + 1], Rational(1)));
    }
    cur = mul_word(std::move(cur), cb.local);
    for (const auto& [c, r] : cur) accumulate(result.terms_, c, r);
  }
  return result;
}

PseudoDiffOp PseudoDiffOp::pow(int n) const {
  if (n < 0) throw std::invalid_argument("negative power of an operator");
  PseudoDiffOp r(1);
  for (int i = 0; i < n; ++i) r = r * *this;
  return r;
}

PseudoDiffOp PseudoDiffOp::adjoint() const {
  PseudoDiffOp result;
  for (const auto& [c, r] : terms_) {
    int letters = 0;
    for (auto e : c.local) letters += std::abs(e);
    for (const auto& w : c.ns) {
      for (auto e : w) letters += std::abs(e);
    }
    Terms cur{{unit(), letters % 2 == 0 ? r : -r}};
    cur = mul_word(std::move(cur), c.local);
    for (std::size_t i = c.ns.size(); i >= 1; --i) {
      cur = mul_expr(cur, DiffExpr(c.ms[i], Rational(1)));
      cur = mul_word(std::move(cur), c.ns[i - 1]);
    }
    cur = mul_expr(cur, DiffExpr(c.ms[0], Rational(1)));
    for (const auto& [k, v] : cur) accumulate(result.terms_, k, v);
  }
  return result;
}

PseudoDiffOp PseudoDiffOp::map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const {
  PseudoDiffOp result;
  for (const auto& [c, r] : terms_) {
    Terms cur{{unit(), r}};
    cur = mul_expr(cur, f(DiffExpr(c.ms[0], Rational(1))));
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      cur = mul_word(std::move(cur), c.ns[i]);
      cur = mul_expr(cur, f(DiffExpr(c.ms[i + 1], Rational(1))));
    }
    cur = mul_word(std::move(cur), c.local);
    for (const auto& [k, v] : cur) accumulate(result.terms_, k, v);
  }
  return result;
}

std::string PseudoDiffOp::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [c, r] : terms_) {
    bool neg = r.sign() < 0;
    Rational mag = neg ? -r : r;
    s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    std::vector<std::string> parts;
    std::string head;
    if (!mag.is_one()) head = mag.str();
    if (!c.ms[0].is_one()) head += (head.empty() ? "" : "*") + c.ms[0].str();
    if (!head.empty()) parts.push_back(head);
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      parts.push_back(word_str(c.ns[i]));
      if (!c.ms[i + 1].is_one()) parts.push_back(c.ms[i + 1].str());
    }
    if (!is_zero_word(c.local)) parts.push_back(word_str(c.local));
    if (parts.empty()) parts.emplace_back("1");
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " . " : "") + parts[i];
  }
  return s;
}

// ---------------------------------------------------------------- antiderivatives

namespace {

void candidates_from(const Monomial& m, BaseVar v, std::vector<Monomial>& out) {
  bool free = true;
  for (const auto& f : m.factors()) {
    if (f.sym.is_base() && f.sym.base_var() == v) continue;
    if (depends_on_var(f.sym, v)) free = false;
  }
  if (free) {
    Monomial c = m;
    c.mul(Symbol::base(v), 1);
    out.push_back(c);
  }
  for (const auto& f : m.factors()) {
    if (f.exp <= 0) continue;
    Symbol lower;
    bool ok = false;
    if (f.sym.is_jet()) {
      MultiIndex mi = f.sym.multi_index();
      if (mi[v] > 0) {
        lower = Symbol::jet(f.sym.dep(), mi.raised(v, -1));
        ok = true;
      }
    } else if (f.sym.is_func()) {
      int d1 = f.sym.func_deriv(0), d2 = f.sym.func_deriv(1);
      switch (f.sym.func_name()) {
        case Func::a:
          if (v == xt && d1 > 0) lower = Symbol::func(Func::a, d1 - 1), ok = true;
          break;
        case Func::b:
          if (v == zt && d1 > 0) lower = Symbol::func(Func::b, d1 - 1), ok = true;
          break;
        case Func::f:
          if ((v == t || v == x) && d1 > 0) lower = Symbol::func(Func::f, d1 - 1, d2), ok = true;
          if (v == xt && d2 > 0) lower = Symbol::func(Func::f, d1, d2 - 1), ok = true;
          break;
        case Func::g:
          if ((v == t || v == x) && d1 > 0) lower = Symbol::func(Func::g, d1 - 1, d2), ok = true;
          if (v == zt && d2 > 0) lower = Symbol::func(Func::g, d1, d2 - 1), ok = true;
          break;
      }
    }
    if (!ok) continue;
    Monomial c = m;
    c.mul(f.sym, -1);
    c.mul(lower, 1);
    out.push_back(c);
  }
}

struct BasisVector {
  DiffExpr vec;
  std::map<std::size_t, Rational> combo;
};

}  // namespace

std::optional<DiffExpr> antiderivative(const DiffExpr& target, BaseVar v, std::size_t cap) {
  if (target.is_zero()) return DiffExpr();
  Mode mode = Mode::full_jet;
  std::vector<Monomial> cands;
  std::vector<DiffExpr> images;
  std::set<Monomial> seen_cand;
  std::set<Monomial> seen_mono;
  std::vector<Monomial> queue;
  for (const auto& term : target.terms()) {
    if (seen_mono.insert(term.mono).second) queue.push_back(term.mono);
  }
  while (!queue.empty()) {
    Monomial m = queue.back();
    queue.pop_back();
    std::vector<Monomial> fresh;
    candidates_from(m, v, fresh);
    for (auto& c : fresh) {
      if (!seen_cand.insert(c).second) continue;
      if (cands.size() >= cap) return std::nullopt;
      DiffExpr img = total_derivative(DiffExpr(c, Rational(1)), v, mode);
      for (const auto& term : img.terms()) {
        if (seen_mono.insert(term.mono).second) queue.push_back(term.mono);
      }
      cands.push_back(c);
      images.push_back(std::move(img));
    }
  }
  // Echelon basis of the images keyed by leading monomial.
  std::vector<BasisVector> basis;
  std::map<Monomial, std::size_t> pivot;
  auto reduce = [&](BasisVector& bv) {
    std::size_t i = 0;
    while (i < bv.vec.terms().size()) {
      const Term& term = bv.vec.terms()[i];
      auto it = pivot.find(term.mono);
      if (it == pivot.end()) {
        ++i;
        continue;
      }
      const BasisVector& b = basis[it->second];
      Rational f = term.coef / b.vec.terms()[0].coef;
      bv.vec -= b.vec.scaled(f);
      for (const auto& [k, r] : b.combo) {
        Rational& slot = bv.combo[k];
        slot -= r * f;
        if (slot.is_zero()) bv.combo.erase(k);
      }
    }
  };
  for (std::size_t j = 0; j < cands.size(); ++j) {
    BasisVector bv{images[j], {{j, Rational(1)}}};
    reduce(bv);
    if (bv.vec.is_zero()) continue;
    // Pivot is the smallest remaining monomial, which has no basis pivot.
    pivot.emplace(bv.vec.terms()[0].mono, basis.size());
    basis.push_back(std::move(bv));
  }
  BasisVector tv{target, {}};
  reduce(tv);
  if (!tv.vec.is_zero()) return std::nullopt;
  ExprBuilder w;
  for (const auto& [k, r] : tv.combo) w.add_term(cands[k], -r);
  return w.build();
}

// ---------------------------------------------------------------- application

namespace {

struct NNode {
  ExprBuilder local;
  std::map<std::pair<Monomial, Word>, NNode> children;
};

void insert(NNode& root, const Composition& c, const Rational& r, const DiffExpr& arg) {
  NNode* node = &root;
  for (std::size_t i = 0; i < c.ns.size(); ++i) node = &node->children[{c.ms[i], c.ns[i]}];
  DiffExpr value = total_derivative(arg, MultiIndex{{static_cast<std::uint8_t>(c.local[0]),
                                                    static_cast<std::uint8_t>(c.local[1]),
                                                    static_cast<std::uint8_t>(c.local[2]),
                                                    static_cast<std::uint8_t>(c.local[3])}},
                                    Mode::full_jet);
  node->local.add(value, c.ms.back(), r);
}

DiffExpr evaluate(NNode& node) {
  DiffExpr result = node.local.build();
  for (auto& [key, child] : node.children) {
    DiffExpr inner = evaluate(child);
    for (auto v : kAllVars) {
      int e = key.second[static_cast<std::size_t>(idx(v))];
      for (int i = 0; i < -e; ++i) {
        auto w = antiderivative(inner, v);
        if (!w) {
          throw NonlocalResult("no local antiderivative in " + std::string(name(v)) + " of " + inner.str());
        }
        inner = std::move(*w);
      }
    }
    result += inner.times(key.first, Rational(1));
  }
  return result;
}

}  // namespace

DiffExpr apply(const PseudoDiffOp& P, const DiffExpr& e) {
  NNode root;
  for (const auto& [c, r] : P.terms()) insert(root, c, r, e);
  return evaluate(root);
}

// ---------------------------------------------------------------- matrices

MatrixOp MatrixOp::operator-() const { return scaled(Rational(-1)); }

MatrixOp operator+(const MatrixOp& a, const MatrixOp& b) {
  MatrixOp r;
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r;
}

MatrixOp operator-(const MatrixOp& a, const MatrixOp& b) {
  MatrixOp r;
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = a.e_[i] - b.e_[i];
  return r;
}

MatrixOp operator*(const MatrixOp& a, const MatrixOp& b) {
  MatrixOp r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
  }
  return r;
}

MatrixOp MatrixOp::scaled(const Rational& c) const {
  MatrixOp r;
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = e_[i].scaled(c);
  return r;
}

MatrixOp MatrixOp::times(const DiffExpr& c) const {
  MatrixOp r;
  PseudoDiffOp m(c);
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = m * e_[i];
  return r;
}

bool MatrixOp::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const PseudoDiffOp& p) { return p.is_zero(); });
}

MatrixOp MatrixOp::adjoint() const {
  return MatrixOp(at(0, 0).adjoint(), at(1, 0).adjoint(), at(0, 1).adjoint(), at(1, 1).adjoint());
}

MatrixOp MatrixOp::map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const {
  MatrixOp r;
  for (std::size_t i = 0; i < 4; ++i) r.e_[i] = e_[i].map_coefficients(f);
  return r;
}

std::string MatrixOp::str() const {
  return "[[" + at(0, 0).str() + ", " + at(0, 1).str() + "], [" + at(1, 0).str() + ", " + at(1, 1).str() + "]]";
}

MatrixOp compose(const MatrixOp& P, const MatrixOp& Q) { return P * Q; }
MatrixOp adjoint(const MatrixOp& P) { return P.adjoint(); }
bool operator_equals(const MatrixOp& P, const MatrixOp& Q) { return (P - Q).is_zero(); }
bool is_skew_adjoint(const MatrixOp& P) { return (P.adjoint() + P).is_zero(); }

std::array<DiffExpr, 2> apply(const MatrixOp& P, const std::array<DiffExpr, 2>& col) {
  std::array<DiffExpr, 2> out;
  for (int i = 0; i < 2; ++i) {
    NNode root;
    for (int j = 0; j < 2; ++j) {
      for (const auto& [c, r] : P.at(i, j).terms()) insert(root, c, r, col[static_cast<std::size_t>(j)]);
    }
    out[static_cast<std::size_t>(i)] = evaluate(root);
  }
  return out;
}

Characteristic apply(const MatrixOp& P, const Characteristic& c) {
  auto r = fhs::apply(P, std::array<DiffExpr, 2>{c.phi, c.psi});
  return {r[0], r[1]};
}

MatrixOp frechet_operator(const DiffExpr& F1, const DiffExpr& F2) {
  MatrixOp M;
  const DiffExpr* F[2] = {&F1, &F2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      PseudoDiffOp op;
      for (Symbol s : jets_of(*F[i], j == 0 ? Dep::u : Dep::v)) {
        PseudoDiffOp word(1);
        MultiIndex mi = s.multi_index();
        for (auto v : kAllVars) {
          if (mi[v]) word = word * PseudoDiffOp::letter(v, mi[v]);
        }
        op += PseudoDiffOp(F[i]->partial(s)) * word;
      }
      M.at(i, j) = op;
    }
  }
  return M;
}

bool is_helmholtz(const DiffExpr& Fu, const DiffExpr& Fv) {
  MatrixOp D = frechet_operator(Fu, Fv);
  return D.adjoint() == D;
}

// ---------------------------------------------------------------- discrete symmetry

namespace {

std::pair<int, Symbol> sigma_symbol(Symbol s) {
  switch (s.kind()) {
    case Symbol::Kind::param:
      return {1, s};
    case Symbol::Kind::base:
      switch (s.base_var()) {
        case BaseVar::t: return {1, s};
        case BaseVar::x: return {-1, s};
        case BaseVar::xt: return {-1, Symbol::base(zt)};
        case BaseVar::zt: return {-1, Symbol::base(xt)};
      }
      break;
    case Symbol::Kind::jet: {
      MultiIndex mi = s.multi_index();
      int odd = (mi[x] + mi[xt] + mi[zt]) % 2;
      std::swap(mi[xt], mi[zt]);
      return {odd ? -1 : 1, Symbol::jet(s.dep(), mi)};
    }
    case Symbol::Kind::func: {
      int d1 = s.func_deriv(0), d2 = s.func_deriv(1);
      switch (s.func_name()) {
        case Func::a: return {d1 % 2 ? -1 : 1, Symbol::func(Func::b, d1)};
        case Func::b: return {d1 % 2 ? -1 : 1, Symbol::func(Func::a, d1)};
        case Func::f: return {d2 % 2 ? -1 : 1, Symbol::func(Func::g, d1, d2)};
        case Func::g: return {d2 % 2 ? -1 : 1, Symbol::func(Func::f, d1, d2)};
      }
    }
  }
  return {1, s};
}

}  // namespace

DiffExpr discrete_transform(const DiffExpr& e) {
  std::vector<Term> out;
  out.reserve(e.size());
  for (const auto& term : e.terms()) {
    Monomial m;
    int sign = 1;
    for (const auto& f : term.mono.factors()) {
      auto [s, sym] = sigma_symbol(f.sym);
      if (s < 0 && f.exp % 2 != 0) sign = -sign;
      m.mul(sym, f.exp);
    }
    out.push_back({std::move(m), sign > 0 ? term.coef : -term.coef});
  }
  return DiffExpr::from_terms(std::move(out));
}

PseudoDiffOp discrete_transform(const PseudoDiffOp& P) {
  PseudoDiffOp result;
  auto word_op = [](const Word& w) {
    PseudoDiffOp r(1);
    for (auto v : kAllVars) {
      int e = w[static_cast<std::size_t>(idx(v))];
      if (e == 0) continue;
      BaseVar image = v;
      int sign = 1;
      if (v == x) sign = -1;
      if (v == xt) image = zt, sign = -1;
      if (v == zt) image = xt, sign = -1;
      PseudoDiffOp l = PseudoDiffOp::letter(image, e);
      if (sign < 0 && std::abs(e) % 2 == 1) l = -l;
      r = r * l;
    }
    return r;
  };
  for (const auto& [c, r] : P.terms()) {
    PseudoDiffOp cur(discrete_transform(DiffExpr(c.ms[0], r)));
    for (std::size_t i = 0; i < c.ns.size(); ++i) {
      cur = cur * word_op(c.ns[i]);
      cur = cur * PseudoDiffOp(discrete_transform(DiffExpr(c.ms[i + 1], Rational(1))));
    }
    cur = cur * word_op(c.local);
    result += cur;
  }
  return result;
}

MatrixOp discrete_transform(const MatrixOp& P) {
  return MatrixOp(discrete_transform(P.at(0, 0)), discrete_transform(P.at(0, 1)), discrete_transform(P.at(1, 0)),
                  discrete_transform(P.at(1, 1)));
}

Characteristic discrete_transform(const Characteristic& c) {
  return {discrete_transform(c.phi), discrete_transform(c.psi)};
}

}  // namespace fhs
