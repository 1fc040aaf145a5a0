#include "mspe/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mspe {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Integer parse_integer(std::string_view digits) {
  return Integer(std::string(digits), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    }
    Integer d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(parse_integer(num), d);
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    result = Rational(parse_integer(whole) * scale + parse_integer(frac), scale);
  } else {
    if (!all_digits(text)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    result = Rational(parse_integer(text));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string to_fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_plain_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return to_fraction_string(q);
}

std::string to_decimal_string(const Rational& q, int digits) {
  mpfr_t x;
  mpfr_init2(x, 256);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, x);
  mpfr_clear(x);
  return buf;
}

std::size_t bit_length(const Integer& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

std::size_t bit_size(const Rational& q) {
  return bit_length(q.get_num()) + bit_length(q.get_den());
}

Rational pow2(long exponent) {
  Integer p = 1;
  if (exponent >= 0) {
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
    return Rational(p);
  }
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Rational(Integer(1), p);
}

Rational pow(const Rational& base, unsigned long exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  r.canonicalize();
  return r;
}

Rational floor_to_grid(const Rational& q, unsigned long precision) {
  Integer scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), precision);
  Integer floored;
  mpz_fdiv_q(floored.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(floored);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), precision);
  return r;
}

Rational ceil_to_grid(const Rational& q, unsigned long precision) {
  Integer scaled = q.get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), precision);
  Integer ceiled;
  mpz_cdiv_q(ceiled.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(ceiled);
  mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), precision);
  return r;
}

Integer ceil(const Rational& q) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

Rational log2_upper(const Rational& q) {
  if (q <= 0) throw std::domain_error("log2_upper requires a positive argument");
  mpfr_t x;
  mpfr_init2(x, 64);
  // log2 is increasing, so rounding up at both stages yields an upper bound.
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDU);
  mpfr_log2(x, x, MPFR_RNDU);
  Rational r;
  mpfr_get_q(r.get_mpq_t(), x);
  mpfr_clear(x);
  return r;
}

long floor_neg_log2(const Rational& q) {
  if (q <= 0) throw std::domain_error("floor_neg_log2 requires a positive argument");
  // q <= 2^-i  <=>  num * 2^i <= den.
  long i = static_cast<long>(bit_length(q.get_den())) - static_cast<long>(bit_length(q.get_num())) + 1;
  while (true) {
    bool fits;
    if (i >= 0) {
      Integer lhs = q.get_num();
      mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(i));
      fits = lhs <= q.get_den();
    } else {
      Integer rhs = q.get_den();
      mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-i));
      fits = q.get_num() <= rhs;
    }
    if (fits) return i;
    --i;
  }
}

Rational pow2_ceil_at_least_one(const Rational& q) {
  if (q <= 1) return Rational(1);
  Integer c = ceil(q);
  std::size_t bits = bit_length(c - 1);
  return pow2(static_cast<long>(bits));
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace mspe
