#include "fhs/symbol.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace fhs {

namespace {

struct ParamRegistry {
  std::mutex mu;
  std::vector<std::string> names{"a", "b", "c", "eps"};
  std::unordered_map<std::string, std::uint32_t> index{{"a", 0}, {"b", 1}, {"c", 2}, {"eps", 3}};
};

ParamRegistry& registry() {
  static ParamRegistry r;
  return r;
}

constexpr std::uint64_t kind_bits(Symbol::Kind k) {
  return static_cast<std::uint64_t>(k) << 56;
}

}  // namespace

std::string_view name(BaseVar v) {
  switch (v) {
    case BaseVar::t: return "t";
    case BaseVar::x: return "x";
    case BaseVar::xt: return "xt";
    case BaseVar::zt: return "zt";
  }
  return "?";
}

std::string_view name(Dep d) {
  switch (d) {
    case Dep::u: return "u";
    case Dep::v: return "v";
    case Dep::w1: return "w1";
    case Dep::w2: return "w2";
  }
  return "?";
}

std::string_view name(Func f) {
  switch (f) {
    case Func::a: return "a";
    case Func::b: return "b";
    case Func::f: return "f";
    case Func::g: return "g";
  }
  return "?";
}

MultiIndex MultiIndex::raised(BaseVar v, int by) const {
  MultiIndex r = *this;
  int c = r[v] + by;
  if (c < 0 || c > 255) throw std::out_of_range("MultiIndex: derivative count out of range");
  r[v] = static_cast<std::uint8_t>(c);
  return r;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex r = *this;
  for (auto v : kAllVars) r = r.raised(v, o[v]);
  return r;
}

MultiIndex MultiIndex::of(std::initializer_list<BaseVar> vars) {
  MultiIndex r;
  for (auto v : vars) r = r.raised(v);
  return r;
}

Symbol Symbol::jet(Dep dep, const MultiIndex& mi) {
  std::uint64_t k = kind_bits(Kind::jet);
  k |= static_cast<std::uint64_t>(dep) << 48;
  k |= static_cast<std::uint64_t>(mi.order()) << 40;
  k |= static_cast<std::uint64_t>(mi.counts[0]) << 24;
  k |= static_cast<std::uint64_t>(mi.counts[1]) << 16;
  k |= static_cast<std::uint64_t>(mi.counts[2]) << 8;
  k |= static_cast<std::uint64_t>(mi.counts[3]);
  return Symbol(k);
}

Symbol Symbol::base(BaseVar v) {
  return Symbol(kind_bits(Kind::base) | static_cast<std::uint64_t>(v));
}

Symbol Symbol::func(Func f, int d1, int d2) {
  if (f == Func::a || f == Func::b) d2 = 0;
  if (d1 < 0 || d2 < 0 || d1 > 255 || d2 > 255) {
    throw std::out_of_range("Symbol::func: derivative count out of range");
  }
  std::uint64_t k = kind_bits(Kind::func);
  k |= static_cast<std::uint64_t>(f) << 48;
  k |= static_cast<std::uint64_t>(d1 + d2) << 40;
  k |= static_cast<std::uint64_t>(d1) << 8;
  k |= static_cast<std::uint64_t>(d2);
  return Symbol(k);
}

Symbol Symbol::param(std::string_view n) {
  return Symbol(kind_bits(Kind::param) | fhs::param_index(n));
}

Dep Symbol::dep() const { return static_cast<Dep>((key_ >> 48) & 0xff); }

MultiIndex Symbol::multi_index() const {
  MultiIndex mi;
  mi.counts[0] = static_cast<std::uint8_t>((key_ >> 24) & 0xff);
  mi.counts[1] = static_cast<std::uint8_t>((key_ >> 16) & 0xff);
  mi.counts[2] = static_cast<std::uint8_t>((key_ >> 8) & 0xff);
  mi.counts[3] = static_cast<std::uint8_t>(key_ & 0xff);
  return mi;
}

BaseVar Symbol::base_var() const { return static_cast<BaseVar>(key_ & 0xff); }

Func Symbol::func_name() const { return static_cast<Func>((key_ >> 48) & 0xff); }

int Symbol::func_deriv(int arg) const {
  return arg == 0 ? static_cast<int>((key_ >> 8) & 0xff) : static_cast<int>(key_ & 0xff);
}

std::uint32_t Symbol::param_index() const { return static_cast<std::uint32_t>(key_ & 0xffffffffu); }

std::string Symbol::param_name() const { return fhs::param_name(param_index()); }

std::string Symbol::str() const {
  switch (kind()) {
    case Kind::param:
      return "$" + param_name();
    case Kind::base:
      return std::string(name(base_var()));
    case Kind::func: {
      Func f = func_name();
      std::string s(name(f));
      if (f == Func::a || f == Func::b) {
        s.append(static_cast<std::size_t>(func_deriv(0)), '\'');
        return s;
      }
      int d1 = func_deriv(0), d2 = func_deriv(1);
      if (d1 + d2 == 0) return s;
      s += '[';
      bool first = true;
      for (int i = 0; i < d1; ++i, first = false) s += first ? "1" : ",1";
      for (int i = 0; i < d2; ++i, first = false) s += first ? "2" : ",2";
      s += ']';
      return s;
    }
    case Kind::jet: {
      std::string s(name(dep()));
      MultiIndex mi = multi_index();
      if (mi.order() == 0) return s;
      s += '[';
      bool first = true;
      for (auto v : kAllVars) {
        for (int i = 0; i < mi[v]; ++i) {
          if (!first) s += ',';
          s += name(v);
          first = false;
        }
      }
      s += ']';
      return s;
    }
  }
  return "?";
}

std::string param_name(std::uint32_t index) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  if (index >= r.names.size()) throw std::out_of_range("unknown parameter index");
  return r.names[index];
}

std::uint32_t param_index(std::string_view n) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.index.find(std::string(n));
  if (it != r.index.end()) return it->second;
  auto idx = static_cast<std::uint32_t>(r.names.size());
  r.names.emplace_back(n);
  r.index.emplace(std::string(n), idx);
  return idx;
}

}  // namespace fhs
