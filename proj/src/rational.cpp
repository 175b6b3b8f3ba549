#include "fhs/rational.hpp"

#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fhs {

namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = -kMax;  // keep |x| representable on negation

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(std::int64_t v) {
  mpz_class z;
  mpz_set_si(z.get_mpz_t(), v);
  return z;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  i128 nn = n, dd = d;
  if (dd < 0) {
    nn = -nn;
    dd = -dd;
  }
  i128 g = gcd128(nn, dd);
  if (g > 1) {
    nn /= g;
    dd /= g;
  }
  if (nn > kMax || nn < kMin || dd > kMax) {
    mpq_class q(to_mpz(n), to_mpz(d));
    q.canonicalize();
    set_big(std::move(q));
  } else {
    num_ = static_cast<std::int64_t>(nn);
    den_ = static_cast<std::int64_t>(dd);
  }
}

Rational::Rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  set_big(std::move(c));
}

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
  if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
  if (this != &o) {
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
  }
  return *this;
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    mpz_class z(std::string(text), 10);
    return Rational(mpq_class(z));
  }
  mpz_class n(std::string(text.substr(0, slash)), 10);
  mpz_class d(std::string(text.substr(slash + 1)), 10);
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  return Rational(mpq_class(n, d));
}

void Rational::set_big(mpq_class q) {
  // Demote when the canonical value fits inline.
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
    long n = q.get_num().get_si();
    long d = q.get_den().get_si();
    if (n != std::numeric_limits<long>::min()) {
      num_ = n;
      den_ = d;
      big_.reset();
      return;
    }
  }
  big_ = std::make_unique<mpq_class>(std::move(q));
  num_ = 0;
  den_ = 1;
}

void Rational::normalize_big() {
  if (big_) {
    mpq_class q = std::move(*big_);
    set_big(std::move(q));
  }
}

bool Rational::is_integer() const {
  return big_ ? big_->get_den() == 1 : den_ == 1;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpz_class Rational::numerator() const {
  return big_ ? mpz_class(big_->get_num()) : to_mpz(num_);
}

mpz_class Rational::denominator() const {
  return big_ ? mpz_class(big_->get_den()) : to_mpz(den_);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(to_mpz(num_), to_mpz(den_));
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_) {
    *r.big_ = -*r.big_;
  } else {
    r.num_ = -r.num_;
  }
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    i128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n <= kMax && n >= kMin && d <= kMax) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
      return *this;
    }
  }
  set_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    i128 g1 = gcd128(num_, o.den_);
    i128 g2 = gcd128(o.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    i128 n = (static_cast<i128>(num_) / g1) * (static_cast<i128>(o.num_) / g2);
    i128 d = (static_cast<i128>(den_) / g2) * (static_cast<i128>(o.den_) / g1);
    if (n <= kMax && n >= kMin && d <= kMax) {
      num_ = static_cast<std::int64_t>(n);
      den_ = n == 0 ? 1 : static_cast<std::int64_t>(d);
      return *this;
    }
  }
  set_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  if (!o.big_) {
    Rational inv;
    inv.num_ = o.num_ < 0 ? -o.den_ : o.den_;
    inv.den_ = o.num_ < 0 ? -o.num_ : o.num_;
    return *this *= inv;
  }
  set_big(to_mpq() / o.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical: small and big never represent the same value
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
  }
  return a.to_mpq() < b.to_mpq();
}

Rational Rational::pow(int e) const {
  if (e < 0) {
    if (is_zero()) throw std::domain_error("Rational: zero to negative power");
    return Rational(1) / pow(-e);
  }
  Rational result(1);
  Rational base(*this);
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::string Rational::str() const {
  if (big_) return big_->get_str(10);
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t Rational::hash() const {
  if (big_) return std::hash<std::string>{}(big_->get_str(16));
  return std::hash<std::int64_t>{}(num_) * 31u + std::hash<std::int64_t>{}(den_);
}

}  // namespace fhs
