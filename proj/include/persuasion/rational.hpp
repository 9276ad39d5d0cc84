#pragma once

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace persuasion {

// Exact rational number. Always kept canonical: fully reduced, positive
// denominator. Every comparison is exact; there is no epsilon anywhere in
// this type.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long n) {  // implicit: plain integers mix freely with Rational
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rational(int n) : Rational(static_cast<long>(n)) {}
  Rational(long num, long den);

  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  // Accepts "p/q" literals, plain integers, and decimal literals with an
  // optional exponent ("0.55", "-3", "12/7", "1e-3"). Conversion is exact.
  static Rational parse(const std::string& text);

  // Exact value of the double (doubles are dyadic rationals).
  static Rational from_double(double x);

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // throws on division by zero
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  bool operator==(const Rational& o) const { return mpq_equal(q_, o.q_) != 0; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return mpq_cmp(q_, o.q_) < 0; }
  bool operator<=(const Rational& o) const { return mpq_cmp(q_, o.q_) <= 0; }
  bool operator>(const Rational& o) const { return mpq_cmp(q_, o.q_) > 0; }
  bool operator>=(const Rational& o) const { return mpq_cmp(q_, o.q_) >= 0; }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
  Rational abs() const;

  // "p/q", or just "p" for integers. This is the authoritative rendering.
  std::string str() const;

  // Decimal rendering with at most `digits` fractional digits, rounded to
  // nearest. If `exact` is non-null it is set to whether the rendering is
  // the exact value (i.e. the expansion terminates within `digits`).
  std::string decimal(int digits = 12, bool* exact = nullptr) const;

  double to_double() const { return mpq_get_d(q_); }

 private:
  mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace persuasion
