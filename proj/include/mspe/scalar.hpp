#pragma once

#include <concepts>
#include <string>
#include <string_view>
#include <vector>

#include "mspe/errors.hpp"
#include "mspe/float.hpp"
#include "mspe/rational.hpp"

namespace mspe {

enum class ArithmeticMode { exact, floating };

std::string_view to_string(ArithmeticMode mode);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr ArithmeticMode mode = ArithmeticMode::exact;
  static Rational from_rational(const Rational& q) { return q; }
  static Rational to_rational(const Rational& q) { return q; }
  static double to_double(const Rational& q) { return q.get_d(); }
  static bool is_finite(const Rational&) { return true; }
  static std::string to_string(const Rational& q) { return to_plain_string(q); }
};

template <>
struct ScalarTraits<Float> {
  static constexpr ArithmeticMode mode = ArithmeticMode::floating;
  static Float from_rational(const Rational& q) { return Float(q); }
  static Rational to_rational(const Float& x) { return x.to_rational(); }
  static double to_double(const Float& x) { return x.to_double(); }
  static bool is_finite(const Float& x) { return x.is_finite(); }
  static std::string to_string(const Float& x) { return x.to_string(); }
};

/// The two scalar types the solvers are instantiated for.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, Float>;

template <Scalar T>
using NumVec = std::vector<T>;

template <Scalar T>
NumVec<T> zeros(std::size_t n) {
  return NumVec<T>(n, T(0));
}

template <Scalar T>
void require_finite(const T& x) {
  if (!ScalarTraits<T>::is_finite(x)) throw SolverError("non-finite value produced in floating-point mode");
}

/// x <= y componentwise.
template <Scalar T>
bool leq(const NumVec<T>& x, const NumVec<T>& y) {
  if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] <= y[i])) return false;
  }
  return true;
}

/// x < y in every component.
template <Scalar T>
bool strictly_less(const NumVec<T>& x, const NumVec<T>& y) {
  if (x.size() != y.size()) throw DimensionMismatch(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] < y[i])) return false;
  }
  return true;
}

template <Scalar T>
NumVec<Rational> to_rational(const NumVec<T>& x) {
  NumVec<Rational> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(ScalarTraits<T>::to_rational(v));
  return out;
}

template <Scalar T>
NumVec<T> from_rational(const NumVec<Rational>& x) {
  NumVec<T> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(ScalarTraits<T>::from_rational(v));
  return out;
}

}  // namespace mspe
