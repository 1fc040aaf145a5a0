#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mspe/errors.hpp"
#include "mspe/scalar.hpp"

namespace mspe {

/// Dense n x n matrix, row-major.
template <Scalar T>
class SquareMat {
 public:
  explicit SquareMat(std::size_t n) : n_(n), data_(n * n, T(0)) {}

  static SquareMat identity(std::size_t n) {
    SquareMat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t size() const { return n_; }
  T& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

  NumVec<T> operator*(const NumVec<T>& x) const {
    if (x.size() != n_) throw DimensionMismatch(n_, x.size());
    NumVec<T> y(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
  }

  friend bool operator==(const SquareMat&, const SquareMat&) = default;

 private:
  std::size_t n_;
  std::vector<T> data_;
};

/// Id - A.
template <Scalar T>
SquareMat<T> identity_minus(const SquareMat<T>& a) {
  SquareMat<T> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = (i == j ? T(1) : T(0)) - a(i, j);
  }
  return m;
}

struct LinearSolveOptions {
  /// Float mode only: a pivot whose magnitude is below this is treated as zero.
  double pivot_threshold = 1e-12;
};

/// Solves A y = b. Exact mode runs Gaussian elimination over the rationals
/// (first non-zero pivot); float mode runs LU with partial pivoting.
/// Throws SingularMatrix.
template <Scalar T>
NumVec<T> solve_linear(const SquareMat<T>& a, const NumVec<T>& b, const LinearSolveOptions& options = {});

/// Same factorization applied to several right-hand sides.
template <Scalar T>
std::vector<NumVec<T>> solve_linear(const SquareMat<T>& a, std::span<const NumVec<T>> rhs,
                                    const LinearSolveOptions& options = {});

}  // namespace mspe
