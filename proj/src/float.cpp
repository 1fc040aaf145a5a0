#include "mspe/float.hpp"

#include <atomic>
#include <stdexcept>

namespace mspe {

namespace {
std::atomic<long> g_default_precision{53};
}

void Float::set_default_precision(long bits) {
  if (bits < MPFR_PREC_MIN || bits > 1 << 20) throw std::invalid_argument("float precision out of range");
  g_default_precision.store(bits);
}

long Float::default_precision() { return g_default_precision.load(); }

Float::Float() {
  mpfr_init2(value_, g_default_precision.load());
  mpfr_set_zero(value_, 1);
}

Float::Float(long value) {
  mpfr_init2(value_, g_default_precision.load());
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Float::Float(double value) {
  mpfr_init2(value_, g_default_precision.load());
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Float::Float(const Rational& value) {
  mpfr_init2(value_, g_default_precision.load());
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Float::Float(const Float& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Float::~Float() { mpfr_clear(value_); }

long Float::precision() const { return mpfr_get_prec(value_); }

bool Float::is_finite() const { return mpfr_number_p(value_) != 0; }

double Float::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

Rational Float::to_rational() const {
  if (!is_finite()) throw std::domain_error("non-finite float has no rational value");
  Rational r;
  mpfr_get_q(r.get_mpq_t(), value_);
  return r;
}

std::string Float::to_string(int digits) const {
  char buf[256];
  mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, value_);
  return buf;
}

Float& Float::operator+=(const Float& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Float& Float::operator-=(const Float& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Float& Float::operator*=(const Float& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Float& Float::operator/=(const Float& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Float Float::operator-() const {
  Float r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Float& a, const Float& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Float abs(const Float& x) {
  Float r(x);
  mpfr_abs(r.value_, r.value_, MPFR_RNDN);
  return r;
}

}  // namespace mspe
