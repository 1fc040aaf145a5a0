#pragma once

#include <mpfr.h>

#include <compare>
#include <string>

#include "mspe/rational.hpp"

namespace mspe {

/// Binary floating point with a run-wide precision (in bits), backed by MPFR.
///
/// The precision is read from a process-wide default when a value is
/// created; set it once at the start of a run with set_default_precision().
/// Every arithmetic result is rounded to nearest.
class Float {
 public:
  Float();
  Float(long value);  // NOLINT(google-explicit-constructor)
  Float(int value) : Float(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  explicit Float(double value);
  explicit Float(const Rational& value);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  static void set_default_precision(long bits);
  static long default_precision();

  long precision() const;
  bool is_finite() const;
  double to_double() const;
  /// Exact conversion; floats are dyadic rationals.
  Rational to_rational() const;
  std::string to_string(int digits = 17) const;

  Float& operator+=(const Float& rhs);
  Float& operator-=(const Float& rhs);
  Float& operator*=(const Float& rhs);
  Float& operator/=(const Float& rhs);
  Float operator-() const;

  friend Float operator+(Float lhs, const Float& rhs) { return lhs += rhs; }
  friend Float operator-(Float lhs, const Float& rhs) { return lhs -= rhs; }
  friend Float operator*(Float lhs, const Float& rhs) { return lhs *= rhs; }
  friend Float operator/(Float lhs, const Float& rhs) { return lhs /= rhs; }

  friend bool operator==(const Float& a, const Float& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Float& a, const Float& b);

  friend Float abs(const Float& x);

  mpfr_srcptr get() const { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace mspe
