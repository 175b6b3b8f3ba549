#include "fhs/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace fhs {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Symbol s, int e) {
  if (e != 0) f_.push_back({s, e});
}

int Monomial::degree_of(Symbol s) const {
  for (const auto& f : f_) {
    if (f.sym == s) return f.exp;
    if (s < f.sym) break;
  }
  return 0;
}

bool Monomial::has_negative_exponent() const {
  return std::any_of(f_.begin(), f_.end(), [](const Factor& f) { return f.exp < 0; });
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  auto i = f_.begin(), j = o.f_.begin();
  while (i != f_.end() && j != o.f_.end()) {
    if (i->sym < j->sym) {
      r.f_.push_back(*i++);
    } else if (j->sym < i->sym) {
      r.f_.push_back(*j++);
    } else {
      int e = i->exp + j->exp;
      if (e != 0) r.f_.push_back({i->sym, e});
      ++i;
      ++j;
    }
  }
  r.f_.insert(r.f_.end(), i, f_.end());
  r.f_.insert(r.f_.end(), j, o.f_.end());
  return r;
}

void Monomial::mul(Symbol s, int e) {
  if (e == 0) return;
  auto it = std::lower_bound(f_.begin(), f_.end(), s,
                             [](const Factor& f, Symbol k) { return f.sym < k; });
  if (it != f_.end() && it->sym == s) {
    it->exp += e;
    if (it->exp == 0) f_.erase(it);
  } else {
    f_.insert(it, Factor{s, e});
  }
}

Monomial Monomial::inverse() const {
  Monomial r = *this;
  for (auto& f : r.f_) f.exp = -f.exp;
  return r;
}

bool operator<(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.f_.size(), b.f_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Factor& x = a.f_[i];
    const Factor& y = b.f_[i];
    if (x.sym != y.sym) return x.sym < y.sym;
    if (x.exp != y.exp) return x.exp < y.exp;
  }
  return a.f_.size() < b.f_.size();
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& f : f_) {
    h ^= f.sym.key() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= static_cast<std::size_t>(f.exp) * 0x100000001b3ull;
  }
  return h;
}

std::string Monomial::str() const {
  std::string s;
  for (const auto& f : f_) {
    if (!s.empty()) s += '*';
    s += f.sym.str();
    if (f.exp != 1) s += "^" + std::to_string(f.exp);
  }
  return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- DiffExpr

DiffExpr::DiffExpr(Rational c) {
  if (!c.is_zero()) terms_.push_back({Monomial(), std::move(c)});
}

DiffExpr::DiffExpr(Symbol s, int e) { terms_.push_back({Monomial(s, e), Rational(1)}); }

DiffExpr::DiffExpr(const Monomial& m, Rational c) {
  if (!c.is_zero()) terms_.push_back({m, std::move(c)});
}

DiffExpr DiffExpr::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  DiffExpr r;
  r.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().mono == t.mono) {
      r.terms_.back().coef += t.coef;
    } else {
      if (!r.terms_.empty() && r.terms_.back().coef.is_zero()) r.terms_.pop_back();
      r.terms_.push_back(std::move(t));
    }
  }
  if (!r.terms_.empty() && r.terms_.back().coef.is_zero()) r.terms_.pop_back();
  return r;
}

bool DiffExpr::is_constant() const {
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) {
      if (!f.sym.is_param()) return false;
    }
  }
  return true;
}

bool DiffExpr::is_number() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

std::optional<Rational> DiffExpr::as_number() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_[0].mono.is_one()) return terms_[0].coef;
  return std::nullopt;
}

DiffExpr DiffExpr::operator-() const {
  DiffExpr r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

DiffExpr& DiffExpr::operator+=(const DiffExpr& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() && j != o.terms_.end()) {
    if (i->mono < j->mono) {
      out.push_back(std::move(*i++));
    } else if (j->mono < i->mono) {
      out.push_back(*j++);
    } else {
      Rational c = i->coef + j->coef;
      if (!c.is_zero()) out.push_back({std::move(i->mono), std::move(c)});
      ++i;
      ++j;
    }
  }
  for (; i != terms_.end(); ++i) out.push_back(std::move(*i));
  for (; j != o.terms_.end(); ++j) out.push_back(*j);
  terms_ = std::move(out);
  return *this;
}

DiffExpr& DiffExpr::operator-=(const DiffExpr& o) { return *this += -o; }

DiffExpr operator*(const DiffExpr& a, const DiffExpr& b) {
  if (a.terms_.empty() || b.terms_.empty()) return {};
  if (b.terms_.size() == 1) return a.times(b.terms_[0].mono, b.terms_[0].coef);
  if (a.terms_.size() == 1) return b.times(a.terms_[0].mono, a.terms_[0].coef);
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) out.push_back({x.mono * y.mono, x.coef * y.coef});
  }
  return DiffExpr::from_terms(std::move(out));
}

DiffExpr& DiffExpr::operator*=(const DiffExpr& o) { return *this = *this * o; }

DiffExpr DiffExpr::scaled(const Rational& c) const {
  if (c.is_zero()) return {};
  DiffExpr r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

DiffExpr DiffExpr::times(const Monomial& m, const Rational& c) const {
  if (c.is_zero()) return {};
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back({t.mono * m, t.coef * c});
  // Multiplying by a monomial can reorder terms, so renormalize.
  return from_terms(std::move(out));
}

DiffExpr DiffExpr::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  DiffExpr result(1);
  DiffExpr base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

DiffExpr DiffExpr::inverse() const {
  if (terms_.size() != 1) {
    throw std::domain_error("DiffExpr: only single-term expressions are invertible, got " + str());
  }
  return DiffExpr(terms_[0].mono.inverse(), Rational(1) / terms_[0].coef);
}

bool operator==(const DiffExpr& a, const DiffExpr& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) {
      return false;
    }
  }
  return true;
}

bool operator<(const DiffExpr& a, const DiffExpr& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (!(x.mono == y.mono)) return x.mono < y.mono;
    if (x.coef != y.coef) return x.coef < y.coef;
  }
  return a.terms_.size() < b.terms_.size();
}

DiffExpr DiffExpr::partial(Symbol s) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.mono.degree_of(s);
    if (e == 0) continue;
    Monomial m = t.mono;
    m.mul(s, -1);
    out.push_back({std::move(m), t.coef * Rational(e)});
  }
  return from_terms(std::move(out));
}

std::set<Symbol> DiffExpr::symbols() const {
  std::set<Symbol> s;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) s.insert(f.sym);
  }
  return s;
}

bool DiffExpr::depends_on(Symbol s) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return t.mono.degree_of(s) != 0; });
}

int DiffExpr::max_degree(Symbol s) const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.mono.degree_of(s));
  return m;
}

int DiffExpr::min_degree(Symbol s) const {
  int m = 0;
  for (const auto& t : terms_) m = std::min(m, t.mono.degree_of(s));
  return m;
}

DiffExpr DiffExpr::substitute(const std::function<std::optional<DiffExpr>(Symbol)>& image) const {
  ExprBuilder out;
  for (const auto& t : terms_) {
    DiffExpr prod(t.coef);
    Monomial kept;
    for (const auto& f : t.mono.factors()) {
      auto img = image(f.sym);
      if (!img) {
        kept.mul(f.sym, f.exp);
        continue;
      }
      if (f.exp < 0 && !img->is_monomial()) {
        throw std::domain_error("substitute: non-monomial image for " + f.sym.str() +
                                " under a negative power");
      }
      prod = prod * img->pow(f.exp);
    }
    out.add(prod, kept, Rational(1));
  }
  return out.build();
}

DiffExpr DiffExpr::substitute(Symbol s, const DiffExpr& value) const {
  return substitute([&](Symbol x) -> std::optional<DiffExpr> {
    if (x == s) return value;
    return std::nullopt;
  });
}

std::vector<std::pair<int, DiffExpr>> DiffExpr::collect(Symbol s) const {
  std::vector<std::pair<int, std::vector<Term>>> buckets;
  for (const auto& t : terms_) {
    int e = t.mono.degree_of(s);
    Monomial m = t.mono;
    m.mul(s, -e);
    auto it = std::find_if(buckets.begin(), buckets.end(), [e](const auto& b) { return b.first == e; });
    if (it == buckets.end()) {
      buckets.push_back({e, {}});
      it = std::prev(buckets.end());
    }
    it->second.push_back({std::move(m), t.coef});
  }
  std::sort(buckets.begin(), buckets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, DiffExpr>> out;
  for (auto& [e, ts] : buckets) out.emplace_back(e, from_terms(std::move(ts)));
  return out;
}

Monomial DiffExpr::denominator() const {
  Monomial d;
  std::vector<Factor> lows;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) {
      if (f.exp >= 0) continue;
      auto it = std::find_if(lows.begin(), lows.end(), [&](const Factor& x) { return x.sym == f.sym; });
      if (it == lows.end()) {
        lows.push_back(f);
      } else {
        it->exp = std::min(it->exp, f.exp);
      }
    }
  }
  for (const auto& f : lows) d.mul(f.sym, -f.exp);
  return d;
}

DiffExpr DiffExpr::numerator() const { return times(denominator(), Rational(1)); }

std::size_t DiffExpr::hash() const {
  std::size_t h = 0;
  for (const auto& t : terms_) h = h * 1000003u ^ (t.mono.hash() + 31u * t.coef.hash());
  return h;
}

std::string DiffExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    bool neg = t.coef.sign() < 0;
    Rational mag = neg ? -t.coef : t.coef;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      s += mag.str();
    } else if (mag.is_one()) {
      s += t.mono.str();
    } else {
      s += mag.str() + "*" + t.mono.str();
    }
  }
  return s;
}

// ---------------------------------------------------------------- builder

void ExprBuilder::add(const DiffExpr& e, const Rational& c) {
  if (c.is_zero()) return;
  for (const auto& t : e.terms()) terms_.push_back({t.mono, t.coef * c});
}

void ExprBuilder::add(const DiffExpr& e, const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  for (const auto& t : e.terms()) terms_.push_back({t.mono * m, t.coef * c});
}

}  // namespace fhs
