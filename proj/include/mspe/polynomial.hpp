#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mspe/rational.hpp"
#include "mspe/scalar.hpp"

namespace mspe {

using VarIndex = std::size_t;

/// Exponent signature: (variable, power) pairs sorted by variable, powers >= 1.
using Exponents = std::vector<std::pair<VarIndex, unsigned>>;

/// Sorts, merges repeated variables and drops zero powers.
Exponents canonical_exponents(Exponents exponents);

unsigned total_degree(const Exponents& exponents);

/// A term c * X_i1^p1 * ... with c > 0.
class Monomial {
 public:
  /// Throws std::invalid_argument unless coefficient > 0.
  Monomial(Rational coefficient, Exponents exponents);

  const Rational& coefficient() const { return coefficient_; }
  const Exponents& exponents() const { return exponents_; }
  unsigned degree() const { return total_degree(exponents_); }
  unsigned power_of(VarIndex var) const;
  bool contains(VarIndex var) const { return power_of(var) != 0; }

  /// Variables with multiplicity, in index order (X*X*Y -> {X, X, Y}).
  std::vector<VarIndex> factors() const;

  template <Scalar T>
  T evaluate(std::span<const T> x) const {
    T value = ScalarTraits<T>::from_rational(coefficient_);
    for (const auto& [var, power] : exponents_) {
      for (unsigned p = 0; p < power; ++p) value *= x[var];
    }
    return value;
  }

  /// d/dX_var evaluated at x.
  template <Scalar T>
  T derivative(VarIndex var, std::span<const T> x) const {
    unsigned k = power_of(var);
    if (k == 0) return T(0);
    T value = ScalarTraits<T>::from_rational(coefficient_ * k);
    for (const auto& [v, power] : exponents_) {
      unsigned p = v == var ? power - 1 : power;
      for (unsigned i = 0; i < p; ++i) value *= x[v];
    }
    return value;
  }

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  Rational coefficient_;
  Exponents exponents_;
};

/// Canonical polynomial: like terms merged, zero terms dropped, terms ordered
/// by descending degree and then by exponent signature.
class Polynomial {
 public:
  Polynomial() = default;
  /// Accepts arbitrary non-negative terms; zero coefficients are dropped.
  explicit Polynomial(std::vector<std::pair<Rational, Exponents>> terms);

  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }
  unsigned degree() const;
  bool contains(VarIndex var) const;
  /// Coefficient of the degree-0 term (0 if absent).
  Rational constant_term() const;

  template <Scalar T>
  T evaluate(std::span<const T> x) const {
    T sum(0);
    for (const auto& m : monomials_) sum += m.evaluate<T>(x);
    return sum;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<Monomial> monomials_;
};

}  // namespace mspe
