#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace fhs {

/// Independent variables. The order t < x < xt < zt is fixed.
enum class BaseVar : std::uint8_t { t = 0, x = 1, xt = 2, zt = 3 };

/// Dependent variables. `w1`, `w2` are generic test functions used by
/// identities that must hold for an arbitrary argument.
enum class Dep : std::uint8_t { u = 0, v = 1, w1 = 2, w2 = 3 };

/// Arbitrary-function symbols with fixed argument lists:
/// a(xt), b(zt), f(t+x, xt), g(t-x, zt).
enum class Func : std::uint8_t { a = 0, b = 1, f = 2, g = 3 };

inline constexpr std::array<BaseVar, 4> kAllVars{BaseVar::t, BaseVar::x, BaseVar::xt, BaseVar::zt};
inline constexpr std::array<BaseVar, 3> kSpaceVars{BaseVar::x, BaseVar::xt, BaseVar::zt};

std::string_view name(BaseVar v);
std::string_view name(Dep d);
std::string_view name(Func f);

/// Derivative counts per base variable, indexed by BaseVar.
struct MultiIndex {
  std::array<std::uint8_t, 4> counts{};

  std::uint8_t& operator[](BaseVar v) { return counts[static_cast<int>(v)]; }
  std::uint8_t operator[](BaseVar v) const { return counts[static_cast<int>(v)]; }
  int order() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  MultiIndex raised(BaseVar v, int by = 1) const;
  MultiIndex operator+(const MultiIndex& o) const;
  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;

  static MultiIndex of(std::initializer_list<BaseVar> vars);
};

/// A variable of the differential algebra packed into 64 bits. Integer order
/// is the canonical order: parameters, base variables, function symbols,
/// jets; jets by dependent variable, total order, then counts (t, x, xt, zt).
class Symbol {
 public:
  enum class Kind : std::uint8_t { param = 0, base = 1, func = 2, jet = 3 };

  constexpr Symbol() = default;
  static Symbol jet(Dep dep, const MultiIndex& mi);
  static Symbol base(BaseVar v);
  /// Function symbol with derivative counts per argument (arg2 ignored for a, b).
  static Symbol func(Func f, int d1, int d2 = 0);
  static Symbol param(std::string_view name);

  Kind kind() const { return static_cast<Kind>(key_ >> 56); }
  bool is_jet() const { return kind() == Kind::jet; }
  bool is_param() const { return kind() == Kind::param; }
  bool is_base() const { return kind() == Kind::base; }
  bool is_func() const { return kind() == Kind::func; }

  Dep dep() const;
  MultiIndex multi_index() const;
  BaseVar base_var() const;
  Func func_name() const;
  int func_deriv(int arg) const;  // arg in {0, 1}
  std::uint32_t param_index() const;
  std::string param_name() const;

  std::uint64_t key() const { return key_; }
  std::string str() const;

  friend bool operator==(Symbol a, Symbol b) { return a.key_ == b.key_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.key_ != b.key_; }
  friend bool operator<(Symbol a, Symbol b) { return a.key_ < b.key_; }

 private:
  explicit constexpr Symbol(std::uint64_t k) : key_(k) {}
  std::uint64_t key_ = 0;
};

/// Registered parameter names, in registration order. The pencil
/// coefficients a, b, c and the sign parameter eps are registered first.
std::string param_name(std::uint32_t index);
std::uint32_t param_index(std::string_view name);

}  // namespace fhs
