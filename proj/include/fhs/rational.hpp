#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fhs {

/// Exact rational number of unbounded size.
///
/// Values that fit a pair of 64-bit integers are stored inline; anything
/// larger is promoted to a GMP rational. The representation is always
/// reduced with a positive denominator, so equality is structural.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o);
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&&) noexcept = default;
  ~Rational() = default;

  /// Parses "p" or "p/q" in base 10.
  static Rational parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  int sign() const;

  /// Numerator and denominator as GMP integers (always valid).
  mpz_class numerator() const;
  mpz_class denominator() const;
  mpq_class to_mpq() const;

  /// True if the value fits the inline representation; used by the oracle to
  /// keep sampled values small.
  bool is_small() const { return !big_; }
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  /// Integer power; negative exponents invert (throws on 0^-k).
  Rational pow(int e) const;

  std::string str() const;
  std::size_t hash() const;

 private:
  void set_big(mpq_class q);
  void normalize_big();

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace fhs
