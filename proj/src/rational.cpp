#include "persuasion/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace persuasion {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  mpq_init(q_);
  mpq_set_si(q_, num, 1);
  mpq_t d;
  mpq_init(d);
  mpq_set_si(d, den, 1);
  mpq_div(q_, q_, d);
  mpq_clear(d);
}

Rational Rational::parse(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational r;
    if (mpq_set_str(r.q_, s.c_str(), 10) != 0) {
      throw std::invalid_argument("Rational::parse: bad fraction '" + text + "'");
    }
    if (mpz_sgn(mpq_denref(r.q_)) == 0) {
      throw std::invalid_argument("Rational::parse: zero denominator in '" + text + "'");
    }
    mpq_canonicalize(r.q_);
    return r;
  }

  // Decimal form: [+-] digits [. digits] [(e|E) [+-] digits]
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  std::string mantissa;
  long frac_digits = 0;
  bool any_digit = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    mantissa.push_back(s[i]);
    any_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      mantissa.push_back(s[i]);
      ++frac_digits;
      any_digit = true;
    }
  }
  long exponent = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    if (i >= s.size()) throw std::invalid_argument("Rational::parse: bad exponent in '" + text + "'");
    long e = 0;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      e = e * 10 + (s[i] - '0');
      if (e > 100000) throw std::invalid_argument("Rational::parse: exponent too large");
    }
    exponent = eneg ? -e : e;
  }
  if (!any_digit || i != s.size()) {
    throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
  }

  Rational r;
  mpz_set_str(mpq_numref(r.q_), mantissa.empty() ? "0" : mantissa.c_str(), 10);
  long pow10 = frac_digits - exponent;
  mpz_t scale;
  mpz_init_set_ui(scale, 10);
  if (pow10 >= 0) {
    mpz_pow_ui(scale, scale, static_cast<unsigned long>(pow10));
    mpz_set(mpq_denref(r.q_), scale);
  } else {
    mpz_pow_ui(scale, scale, static_cast<unsigned long>(-pow10));
    mpz_mul(mpq_numref(r.q_), mpq_numref(r.q_), scale);
  }
  mpz_clear(scale);
  mpq_canonicalize(r.q_);
  if (neg) mpq_neg(r.q_, r.q_);
  return r;
}

Rational Rational::from_double(double x) {
  Rational r;
  mpq_set_d(r.q_, x);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  mpq_neg(r.q_, q_);
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  Rational r;
  mpq_add(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  Rational r;
  mpq_sub(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator*(const Rational& o) const {
  Rational r;
  mpq_mul(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  Rational r;
  mpq_div(r.q_, q_, o.q_);
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  mpq_add(q_, q_, o.q_);
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  mpq_sub(q_, q_, o.q_);
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  mpq_mul(q_, q_, o.q_);
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  mpq_div(q_, q_, o.q_);
  return *this;
}

Rational Rational::abs() const {
  Rational r;
  mpq_abs(r.q_, q_);
  return r;
}

std::string Rational::str() const {
  char* c = mpq_get_str(nullptr, 10, q_);
  std::string s(c);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(c, s.size() + 1);
  return s;
}

std::string Rational::decimal(int digits, bool* exact) const {
  mpz_t scaled, quo, rem, den;
  mpz_inits(scaled, quo, rem, den, nullptr);
  mpz_abs(scaled, mpq_numref(q_));
  mpz_set(den, mpq_denref(q_));
  mpz_t pow10;
  mpz_init_set_ui(pow10, 10);
  mpz_pow_ui(pow10, pow10, static_cast<unsigned long>(digits));
  mpz_mul(scaled, scaled, pow10);
  mpz_tdiv_qr(quo, rem, scaled, den);
  bool is_exact = (mpz_sgn(rem) == 0);
  // round to nearest, ties away from zero
  mpz_mul_ui(rem, rem, 2);
  if (mpz_cmp(rem, den) >= 0) mpz_add_ui(quo, quo, 1);

  char* c = mpz_get_str(nullptr, 10, quo);
  std::string body(c);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(c, body.size() + 1);
  mpz_clears(scaled, quo, rem, den, pow10, nullptr);

  while (static_cast<int>(body.size()) < digits + 1) body.insert(body.begin(), '0');
  std::string ip = body.substr(0, body.size() - digits);
  std::string fp = body.substr(body.size() - digits);
  while (!fp.empty() && fp.back() == '0') fp.pop_back();
  std::string out = (sign() < 0) ? "-" : "";
  out += ip;
  if (!fp.empty()) out += "." + fp;
  if (out == "-0") out = "0";
  if (exact) *exact = is_exact;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace persuasion
