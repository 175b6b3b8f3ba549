#include "fhs/wedge.hpp"

#include <stdexcept>

namespace fhs {

namespace {

constexpr std::uint32_t kCountMask = 0x3f;

int shift_of(BaseVar v) {
  switch (v) {
    case BaseVar::x: return 12;
    case BaseVar::xt: return 6;
    case BaseVar::zt: return 0;
    case BaseVar::t: break;
  }
  throw std::invalid_argument("wedge factors carry no t-derivatives");
}

std::string_view comp_name(Comp c) {
  switch (c) {
    case Comp::eta: return "eta";
    case Comp::theta: return "theta";
    case Comp::du: return "du";
    case Comp::dv: return "dv";
  }
  return "?";
}

}  // namespace

WedgeFactor::WedgeFactor(Comp c, const MultiIndex& mi, Tag tag) {
  if (mi[BaseVar::t] != 0) throw std::invalid_argument("wedge factors carry no t-derivatives");
  if (tag != Tag::none && (c == Comp::du || c == Comp::dv)) {
    throw std::invalid_argument("nonlocal tags only on eta and theta");
  }
  key_ = static_cast<std::uint32_t>(c) << 28 | static_cast<std::uint32_t>(tag) << 24;
  std::uint32_t order = 0;
  for (auto v : kSpaceVars) {
    if (mi[v] > kCountMask) throw std::invalid_argument("wedge factor derivative order too high");
    key_ |= static_cast<std::uint32_t>(mi[v]) << shift_of(v);
    order += mi[v];
  }
  if (order > kCountMask) throw std::invalid_argument("wedge factor derivative order too high");
  key_ |= order << 18;
}

MultiIndex WedgeFactor::multi_index() const {
  MultiIndex mi;
  for (auto v : kSpaceVars) mi[v] = static_cast<std::uint8_t>((key_ >> shift_of(v)) & kCountMask);
  return mi;
}

WedgeFactor WedgeFactor::raised(BaseVar v) const {
  Tag tg = tag();
  if ((tg == Tag::xt && v == BaseVar::xt) || (tg == Tag::zt && v == BaseVar::zt)) {
    return WedgeFactor(comp(), multi_index(), Tag::none);
  }
  return WedgeFactor(comp(), multi_index().raised(v), tg);
}

WedgeFactor WedgeFactor::lowered(BaseVar v) const {
  MultiIndex mi = multi_index();
  if (mi[v] == 0) throw std::invalid_argument("WedgeFactor::lowered: no derivative to remove");
  return WedgeFactor(comp(), mi.raised(v, -1), tag());
}

std::string WedgeFactor::str() const {
  std::string s(comp_name(comp()));
  MultiIndex mi = multi_index();
  if (mi.order() > 0) {
    s += "[";
    bool first = true;
    for (auto v : kSpaceVars) {
      for (int i = 0; i < mi[v]; ++i) {
        if (!first) s += ",";
        s += name(v);
        first = false;
      }
    }
    s += "]";
  }
  switch (tag()) {
    case Tag::xt: return "Dixt(" + s + ")";
    case Tag::zt: return "Dizt(" + s + ")";
    case Tag::none: break;
  }
  return s;
}

int sort_factors(WedgeExpr::Mono& f) {
  int sign = 1;
  for (std::size_t i = 1; i < f.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      if (f[j - 1] == f[j]) return 0;
      if (f[j] < f[j - 1]) {
        std::swap(f[j - 1], f[j]);
        sign = -sign;
      } else {
        break;
      }
    }
  }
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] == f[i - 1]) return 0;
  }
  return sign;
}

WedgeExpr WedgeExpr::factor(WedgeFactor f, const DiffExpr& coef) {
  WedgeExpr w;
  w.add(Mono{f}, coef);
  return w;
}

WedgeExpr WedgeExpr::scalar(const DiffExpr& coef) {
  WedgeExpr w;
  w.add(Mono{}, coef);
  return w;
}

bool WedgeExpr::is_local() const {
  for (const auto& [m, c] : terms_) {
    for (auto f : m) {
      if (!f.is_local()) return false;
    }
  }
  return true;
}

void WedgeExpr::add(Mono factors, const DiffExpr& coef) {
  if (coef.is_zero()) return;
  int s = sort_factors(factors);
  if (s == 0) return;
  auto [it, fresh] = terms_.try_emplace(std::move(factors));
  if (s > 0) {
    it->second += coef;
  } else {
    it->second -= coef;
  }
  if (it->second.is_zero()) terms_.erase(it);
}

WedgeExpr WedgeExpr::operator-() const { return scaled(Rational(-1)); }

WedgeExpr& WedgeExpr::operator+=(const WedgeExpr& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace(m);
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

WedgeExpr& WedgeExpr::operator-=(const WedgeExpr& o) {
  for (const auto& [m, c] : o.terms_) {
    auto [it, fresh] = terms_.try_emplace(m);
    it->second -= c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

WedgeExpr WedgeExpr::scaled(const Rational& c) const {
  WedgeExpr r;
  if (c.is_zero()) return r;
  for (const auto& [m, e] : terms_) r.terms_.emplace(m, e.scaled(c));
  return r;
}

WedgeExpr WedgeExpr::times(const DiffExpr& c) const {
  WedgeExpr r;
  for (const auto& [m, e] : terms_) {
    DiffExpr p = e * c;
    if (!p.is_zero()) r.terms_.emplace(m, std::move(p));
  }
  return r;
}

WedgeExpr WedgeExpr::map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const {
  WedgeExpr r;
  for (const auto& [m, e] : terms_) {
    DiffExpr p = f(e);
    if (!p.is_zero()) r.terms_.emplace(m, std::move(p));
  }
  return r;
}

std::string WedgeExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    std::string cs = c.str();
    s += c.size() > 1 ? "(" + cs + ")" : cs;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i == 0 ? " * " : " & ") + m[i].str();
  }
  return s;
}

WedgeExpr wedge(const WedgeExpr& a, const WedgeExpr& b) {
  WedgeExpr r;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      WedgeExpr::Mono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      r.add(std::move(m), ca * cb);
    }
  }
  return r;
}

WedgeExpr total_derivative(const WedgeExpr& w, BaseVar v) {
  WedgeExpr r;
  for (const auto& [m, c] : w.terms()) {
    r.add(m, total_derivative(c, v));
    for (std::size_t i = 0; i < m.size(); ++i) {
      WedgeExpr::Mono n = m;
      n[i] = m[i].raised(v);
      r.add(std::move(n), c);
    }
  }
  return r;
}

WedgeExpr total_derivative(const WedgeExpr& w, const MultiIndex& mi) {
  WedgeExpr r = w;
  for (auto v : kSpaceVars) {
    for (int i = 0; i < mi[v]; ++i) r = total_derivative(r, v);
  }
  return r;
}

}  // namespace fhs
