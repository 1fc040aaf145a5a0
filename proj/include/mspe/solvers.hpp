#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "mspe/linalg.hpp"
#include "mspe/msp.hpp"

namespace mspe {

enum class SchemeKind { kleene, newton, dnm };

std::string_view to_string(SchemeKind scheme);

struct SolverOptions {
  /// Exact mode: once the largest component of an iterate needs more than
  /// this many bits (numerator + denominator), the iterate is rounded down
  /// to the grid 2^-(budget/2) in a way that keeps the iteration below the
  /// least fixed point (see safe_newton_step). When rounding has to fall
  /// back to f(x), the step is redone on a grid fine enough to avoid it and
  /// the budget grows to match. 0 keeps every iterate exact.
  std::size_t precision_budget = 256;
  /// An iterate component above this value raises InfeasibleSuspected.
  double divergence_bound = 1e12;
  LinearSolveOptions linear;
  /// DNM: solve SCCs of equal depth on separate threads. Results are
  /// identical to the sequential order.
  bool parallel_sccs = false;
  /// DNM: stop an SCC as soon as its iterate is an exact fixed point.
  bool early_exit = false;
};

template <Scalar T>
struct IterationTrace {
  SchemeKind scheme = SchemeKind::newton;
  /// Step counts at which iterates were recorded: every step up to 50, then
  /// every 10th, and always the last. Step 0 is the zero vector.
  std::vector<std::size_t> recorded_steps;
  std::vector<NumVec<T>> iterates;
  /// f(x) - x for each recorded iterate.
  std::vector<NumVec<T>> residuals;
  /// Kleene: number of Kleene steps. Newton/DNM: number of Newton steps.
  std::size_t total_newton_steps = 0;
  /// DNM only, indexed by SCC (see SccDag).
  std::vector<std::size_t> per_scc_steps;
  /// Exact Newton only: rounding_errors[k-1] = max_j (N(x_{k-1}) - x_k)_j,
  /// zero for steps that stayed exact.
  std::vector<Rational> rounding_errors;
  NumVec<T> final_iterate;

  std::size_t steps() const { return total_newton_steps; }
  const NumVec<T>& iterate_at(std::size_t step) const;
};

/// When newton_solve / kleene_solve stop. Exactly one criterion is active;
/// `limit` caps the residual and predicate rules.
struct StopRule {
  enum class Kind { max_iterations, residual_below, predicate };

  Kind kind = Kind::max_iterations;
  std::size_t iterations = 0;
  Rational epsilon;
  std::size_t limit = 10000;
  /// Exact mode only. Called after every step with the trace so far.
  std::function<bool(const IterationTrace<Rational>&)> done;

  static StopRule max_iterations(std::size_t k);
  /// Max-norm of f(x) - x at most eps.
  static StopRule residual_below(Rational eps, std::size_t limit = 10000);
  static StopRule until(std::function<bool(const IterationTrace<Rational>&)> done, std::size_t limit = 10000);
};

/// f(x).
template <Scalar T>
NumVec<T> kleene_step(const Msp& f, const NumVec<T>& x);

/// N(x) = x + (Id - f'(x))^-1 (f(x) - x), unrounded.
/// Throws SingularMatrix.
template <Scalar T>
NumVec<T> newton_step(const Msp& f, const NumVec<T>& x, const LinearSolveOptions& options = {});

struct SafeStep {
  NumVec<Rational> next;
  /// max_j (N(x) - next)_j.
  Rational error;
  bool rounded = false;
  /// Some component fell back to f(x).
  bool clamped = false;
  /// Smallest grid precision at which no clamped component would have
  /// clamped (0 if unknown).
  unsigned long precision_needed = 0;
};

/// Exact Newton step that rounds the result onto the grid 2^-precision when
/// `precision` is non-zero:
///
///     z = max(f(x), floor(N(x) - s*d)),  d = (Id - f'(x))^-1 1,
///     s = 2^-precision * 2^ceil(log2 max(1, |f'(x)|_inf)).
///
/// For 0 <= x <= f(x), x <= mu this gives f(x) <= z <= N(x) <= mu and
/// z <= f(z), so the rounded sequence keeps every ordering property of the
/// exact one. Throws InfeasibleSuspected if N(x) < x or d is not positive.
SafeStep safe_newton_step(const Msp& f, const NumVec<Rational>& x, unsigned long precision,
                          const LinearSolveOptions& options = {});

/// Newton from 0. Throws SingularMatrix, InfeasibleSuspected.
template <Scalar T>
IterationTrace<T> newton_solve(const Msp& f, const StopRule& stop, const SolverOptions& options = {});

/// Kleene from 0. Exact mode rounds oversized iterates down to
/// max(x, floor(f(x))), which stays a post-fixed point below mu.
template <Scalar T>
IterationTrace<T> kleene_solve(const Msp& f, const StopRule& stop, const SolverOptions& options = {});

/// Decomposed Newton: for t = h(f) down to 0, every SCC of depth t gets
/// j * 2^t Newton steps on its subsystem, with deeper SCCs replaced by their
/// computed values. Requires a quadratic system (PreconditionViolated).
template <Scalar T>
IterationTrace<T> dnm_solve(const Msp& f, std::size_t j, const SolverOptions& options = {});

}  // namespace mspe
