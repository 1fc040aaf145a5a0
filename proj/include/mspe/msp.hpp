#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mspe/linalg.hpp"
#include "mspe/polynomial.hpp"
#include "mspe/scalar.hpp"

namespace mspe {

struct SccDag;

/// Where a system came from. Termination systems have mu <= 1; strict ones
/// additionally have mu >= c (the constant-term vector).
enum class Origin { generic, termination, strict_termination };

std::string_view to_string(Origin origin);

/// A monotone system of polynomials X = f(X) with non-negative rational
/// coefficients. Immutable; structural metadata is computed on construction.
class Msp {
 public:
  /// Throws std::invalid_argument for empty systems, duplicate names,
  /// size mismatches or out-of-range variable indices.
  Msp(std::vector<std::string> variables, std::vector<Polynomial> equations, Origin origin = Origin::generic);

  std::size_t size() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::string& variable(VarIndex i) const { return variables_.at(i); }
  std::optional<VarIndex> index_of(std::string_view name) const;

  const std::vector<Polynomial>& equations() const { return equations_; }
  const Polynomial& equation(VarIndex i) const { return equations_.at(i); }

  Origin origin() const { return origin_; }
  bool is_termination() const { return origin_ != Origin::generic; }
  bool is_strict() const { return origin_ == Origin::strict_termination; }
  Msp with_origin(Origin origin) const;

  bool is_clean() const { return is_clean_; }
  bool is_quadratic() const { return is_quadratic_; }
  bool is_strongly_connected() const { return is_strongly_connected_; }

  /// Structural equality: same variable names and same canonical equations.
  friend bool operator==(const Msp& a, const Msp& b) {
    return a.variables_ == b.variables_ && a.equations_ == b.equations_;
  }

  /// Cached SCC decomposition (see graph.hpp). Population is idempotent.
  std::shared_ptr<const SccDag> cached_scc_dag() const;
  void cache_scc_dag(std::shared_ptr<const SccDag> dag) const;

 private:
  struct Cache;

  std::vector<std::string> variables_;
  std::vector<Polynomial> equations_;
  Origin origin_;
  bool is_clean_ = false;
  bool is_quadratic_ = false;
  bool is_strongly_connected_ = false;
  std::shared_ptr<Cache> cache_;
};

/// Productive variables: X_i is productive iff some Kleene iterate is
/// positive in component i. Computed on the Boolean abstraction in at most
/// n rounds.
std::vector<bool> productive_variables(const Msp& f);

/// f(x). Throws DimensionMismatch.
template <Scalar T>
NumVec<T> eval(const Msp& f, const NumVec<T>& x);

/// Jacobian f'(x), entry (i, k) = d f_i / d X_k at x. Throws DimensionMismatch.
template <Scalar T>
SquareMat<T> jacobian(const Msp& f, const NumVec<T>& x);

/// f(0).
NumVec<Rational> constant_terms(const Msp& f);

/// Max-norm of f(x) - x.
template <Scalar T>
T residual_norm(const Msp& f, const NumVec<T>& x);

}  // namespace mspe
