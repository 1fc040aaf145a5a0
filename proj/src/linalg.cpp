#include "mspe/linalg.hpp"

#include <utility>

namespace mspe {

namespace {

template <Scalar T>
std::size_t choose_pivot(const std::vector<std::vector<T>>& rows, std::size_t col, const LinearSolveOptions& options) {
  const std::size_t n = rows.size();
  if constexpr (ScalarTraits<T>::mode == ArithmeticMode::exact) {
    (void)options;
    for (std::size_t r = col; r < n; ++r) {
      if (sgn(rows[r][col]) != 0) return r;
    }
    throw SingularMatrix("singular matrix: no non-zero pivot in column " + std::to_string(col));
  } else {
    std::size_t best = col;
    T best_abs = abs(rows[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      T candidate = abs(rows[r][col]);
      if (candidate > best_abs) {
        best = r;
        best_abs = candidate;
      }
    }
    if (!(best_abs >= T(options.pivot_threshold))) {
      throw SingularMatrix("singular matrix: pivot magnitude " + best_abs.to_string(6) + " in column " +
                           std::to_string(col) + " is below threshold");
    }
    return best;
  }
}

}  // namespace

template <Scalar T>
std::vector<NumVec<T>> solve_linear(const SquareMat<T>& a, std::span<const NumVec<T>> rhs,
                                    const LinearSolveOptions& options) {
  const std::size_t n = a.size();
  const std::size_t k = rhs.size();
  for (const auto& b : rhs) {
    if (b.size() != n) throw DimensionMismatch(n, b.size());
  }

  // Augmented rows [A | b_1 ... b_k].
  std::vector<std::vector<T>> rows(n, std::vector<T>(n + k, T(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j);
    for (std::size_t c = 0; c < k; ++c) rows[i][n + c] = rhs[c][i];
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = choose_pivot(rows, col, options);
    if (pivot != col) std::swap(rows[pivot], rows[col]);
    const T inv = T(1) / rows[col][col];
    for (std::size_t j = col; j < n + k; ++j) rows[col][j] *= inv;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (rows[r][col] == T(0)) continue;
      const T factor = rows[r][col];
      for (std::size_t j = col; j < n + k; ++j) rows[r][j] -= factor * rows[col][j];
    }
  }

  std::vector<NumVec<T>> solutions(k, NumVec<T>(n, T(0)));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = n; i-- > 0;) {
      T value = rows[i][n + c];
      for (std::size_t j = i + 1; j < n; ++j) value -= rows[i][j] * solutions[c][j];
      require_finite(value);
      solutions[c][i] = std::move(value);
    }
  }
  return solutions;
}

template <Scalar T>
NumVec<T> solve_linear(const SquareMat<T>& a, const NumVec<T>& b, const LinearSolveOptions& options) {
  std::vector<NumVec<T>> rhs{b};
  return std::move(solve_linear<T>(a, std::span<const NumVec<T>>(rhs), options).front());
}

template std::vector<NumVec<Rational>> solve_linear(const SquareMat<Rational>&, std::span<const NumVec<Rational>>,
                                                    const LinearSolveOptions&);
template std::vector<NumVec<Float>> solve_linear(const SquareMat<Float>&, std::span<const NumVec<Float>>,
                                                 const LinearSolveOptions&);
template NumVec<Rational> solve_linear(const SquareMat<Rational>&, const NumVec<Rational>&, const LinearSolveOptions&);
template NumVec<Float> solve_linear(const SquareMat<Float>&, const NumVec<Float>&, const LinearSolveOptions&);

}  // namespace mspe
