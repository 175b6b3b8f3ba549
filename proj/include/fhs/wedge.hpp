#pragma once

#include <functional>
#include <map>
#include <string>

#include <boost/container/small_vector.hpp>

#include "fhs/calculus.hpp"

namespace fhs {

/// Uni-vector components eta, theta and vertical forms du, dv.
enum class Comp : std::uint8_t { eta = 0, theta = 1, du = 2, dv = 3 };

/// D_tag^-1 D_J applied to a component, packed so that integer order is
/// component, then locality, then derivative order and counts (x, xt, zt).
class WedgeFactor {
 public:
  enum class Tag : std::uint8_t { none = 0, xt = 1, zt = 2 };

  WedgeFactor() = default;
  WedgeFactor(Comp c, const MultiIndex& mi, Tag tag = Tag::none);
  static WedgeFactor of(Comp c, std::initializer_list<BaseVar> vars = {}, Tag tag = Tag::none) {
    return WedgeFactor(c, MultiIndex::of(vars), tag);
  }

  Comp comp() const { return static_cast<Comp>(key_ >> 28); }
  Tag tag() const { return static_cast<Tag>((key_ >> 24) & 0xf); }
  bool is_local() const { return tag() == Tag::none; }
  MultiIndex multi_index() const;
  int order() const { return static_cast<int>((key_ >> 18) & 0x3f); }
  /// D_v applied to this factor.
  WedgeFactor raised(BaseVar v) const;
  /// Factor with one v-derivative removed; requires a positive count.
  WedgeFactor lowered(BaseVar v) const;

  std::uint32_t key() const { return key_; }
  std::string str() const;

  friend bool operator==(WedgeFactor a, WedgeFactor b) { return a.key_ == b.key_; }
  friend bool operator!=(WedgeFactor a, WedgeFactor b) { return a.key_ != b.key_; }
  friend bool operator<(WedgeFactor a, WedgeFactor b) { return a.key_ < b.key_; }

 private:
  std::uint32_t key_ = 0;
};

/// Sum of coefficient * (f1 ^ f2 ^ ...) with strictly increasing factors.
class WedgeExpr {
 public:
  using Mono = boost::container::small_vector<WedgeFactor, 4>;
  using Terms = std::map<Mono, DiffExpr>;

  WedgeExpr() = default;
  static WedgeExpr factor(WedgeFactor f, const DiffExpr& coef = DiffExpr(1));
  static WedgeExpr scalar(const DiffExpr& coef);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_local() const;
  std::size_t size() const { return terms_.size(); }

  /// Adds coef * (f1 ^ ... ^ fk) for factors in any order.
  void add(Mono factors, const DiffExpr& coef);

  WedgeExpr operator-() const;
  WedgeExpr& operator+=(const WedgeExpr& o);
  WedgeExpr& operator-=(const WedgeExpr& o);
  friend WedgeExpr operator+(WedgeExpr a, const WedgeExpr& b) { return a += b; }
  friend WedgeExpr operator-(WedgeExpr a, const WedgeExpr& b) { return a -= b; }
  WedgeExpr scaled(const Rational& c) const;
  WedgeExpr times(const DiffExpr& c) const;
  friend bool operator==(const WedgeExpr& a, const WedgeExpr& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const WedgeExpr& a, const WedgeExpr& b) { return !(a == b); }

  WedgeExpr map_coefficients(const std::function<DiffExpr(const DiffExpr&)>& f) const;
  std::string str() const;

 private:
  Terms terms_;
};

WedgeExpr wedge(const WedgeExpr& a, const WedgeExpr& b);
WedgeExpr total_derivative(const WedgeExpr& w, BaseVar v);
WedgeExpr total_derivative(const WedgeExpr& w, const MultiIndex& mi);

/// Sign of the permutation sorting `f` and the sorted factors; 0 on a repeat.
int sort_factors(WedgeExpr::Mono& f);

}  // namespace fhs
