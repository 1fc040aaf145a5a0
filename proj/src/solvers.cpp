#include "mspe/solvers.hpp"

#include <algorithm>
#include <future>
#include <type_traits>

#include "mspe/graph.hpp"
#include "mspe/transforms.hpp"

namespace mspe {

std::string_view to_string(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::kleene:
      return "kleene";
    case SchemeKind::newton:
      return "newton";
    case SchemeKind::dnm:
      return "dnm";
  }
  return "newton";
}

template <Scalar T>
const NumVec<T>& IterationTrace<T>::iterate_at(std::size_t step) const {
  auto it = std::find(recorded_steps.begin(), recorded_steps.end(), step);
  if (it == recorded_steps.end()) throw std::out_of_range("iterate not recorded at step " + std::to_string(step));
  return iterates[static_cast<std::size_t>(it - recorded_steps.begin())];
}

StopRule StopRule::max_iterations(std::size_t k) {
  StopRule rule;
  rule.kind = Kind::max_iterations;
  rule.iterations = k;
  rule.limit = k;
  return rule;
}

StopRule StopRule::residual_below(Rational eps, std::size_t limit) {
  StopRule rule;
  rule.kind = Kind::residual_below;
  rule.epsilon = std::move(eps);
  rule.limit = limit;
  return rule;
}

StopRule StopRule::until(std::function<bool(const IterationTrace<Rational>&)> done, std::size_t limit) {
  StopRule rule;
  rule.kind = Kind::predicate;
  rule.done = std::move(done);
  rule.limit = limit;
  return rule;
}

template <Scalar T>
NumVec<T> kleene_step(const Msp& f, const NumVec<T>& x) {
  return eval(f, x);
}

template <Scalar T>
NumVec<T> newton_step(const Msp& f, const NumVec<T>& x, const LinearSolveOptions& options) {
  NumVec<T> fx = eval(f, x);
  NumVec<T> rhs(x.size(), T(0));
  for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = fx[i] - x[i];
  NumVec<T> delta = solve_linear(identity_minus(jacobian(f, x)), rhs, options);
  NumVec<T> next(x.size(), T(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    next[i] = x[i] + delta[i];
    require_finite(next[i]);
  }
  return next;
}

namespace {

std::size_t max_bit_size(const NumVec<Rational>& x) {
  std::size_t bits = 0;
  for (const auto& v : x) bits = std::max(bits, bit_size(v));
  return bits;
}

Rational row_sum_norm(const SquareMat<Rational>& m) {
  Rational best = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Rational row = 0;
    for (std::size_t j = 0; j < m.size(); ++j) row += abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

template <Scalar T>
void check_divergence(const NumVec<T>& x, double bound) {
  const T limit = ScalarTraits<T>::from_rational(Rational(bound));
  for (const auto& v : x) {
    if (v > limit) {
      throw InfeasibleSuspected("iterate exceeded the divergence bound " + std::to_string(bound) +
                                "; the system is probably infeasible (mu has an infinite component)");
    }
  }
}

template <Scalar T>
NumVec<T> residual(const Msp& f, const NumVec<T>& x) {
  NumVec<T> r = eval(f, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= x[i];
  return r;
}

template <Scalar T>
void record(IterationTrace<T>& trace, const Msp& f, std::size_t step, const NumVec<T>& x) {
  trace.recorded_steps.push_back(step);
  trace.iterates.push_back(x);
  trace.residuals.push_back(residual(f, x));
}

bool wants_record(std::size_t step) { return step <= 50 || step % 10 == 0; }

template <Scalar T>
bool should_stop(const Msp& f, const StopRule& stop, const IterationTrace<T>& trace, std::size_t step,
                 const NumVec<T>& x) {
  switch (stop.kind) {
    case StopRule::Kind::max_iterations:
      return step >= stop.iterations;
    case StopRule::Kind::residual_below:
      return step >= stop.limit || residual_norm(f, x) <= ScalarTraits<T>::from_rational(stop.epsilon);
    case StopRule::Kind::predicate:
      if constexpr (std::is_same_v<T, Rational>) {
        return step >= stop.limit || stop.done(trace);
      } else {
        throw PreconditionViolated("predicate stop rules need exact arithmetic");
      }
  }
  return true;
}

template <Scalar T>
void finish(IterationTrace<T>& trace, const Msp& f, std::size_t step, const NumVec<T>& x) {
  if (trace.recorded_steps.empty() || trace.recorded_steps.back() != step) record(trace, f, step, x);
  trace.final_iterate = x;
  trace.total_newton_steps = step;
}

// One Newton step in either mode; exact mode applies the budgeted rounding.
template <Scalar T>
NumVec<T> advance(const Msp& f, const NumVec<T>& x, std::size_t& budget, const SolverOptions& options,
                  Rational* rounding_error) {
  if constexpr (std::is_same_v<T, Rational>) {
    SafeStep exact = safe_newton_step(f, x, 0, options.linear);
    if (budget == 0 || max_bit_size(exact.next) <= budget) {
      if (rounding_error) *rounding_error = 0;
      return std::move(exact.next);
    }
    SafeStep rounded = safe_newton_step(f, x, budget / 2, options.linear);
    // A clamped component takes f(x) exactly, which doubles its size. Retry
    // on the grid that is fine enough to avoid the clamp.
    if (rounded.clamped && rounded.precision_needed > budget / 2) {
      budget = 2 * rounded.precision_needed;
      rounded = safe_newton_step(f, x, budget / 2, options.linear);
    }
    if (rounding_error) *rounding_error = rounded.error;
    return std::move(rounded.next);
  } else {
    NumVec<T> next = newton_step(f, x, options.linear);
    for (std::size_t i = 0; i < x.size(); ++i) {
      T slack = abs(x[i]) > T(1) ? abs(x[i]) : T(1);
      if (next[i] < x[i] - slack * T(Rational(1, 1000000))) {
        throw InfeasibleSuspected("Newton iterate decreased; the system is probably infeasible or unclean");
      }
    }
    return next;
  }
}

}  // namespace

SafeStep safe_newton_step(const Msp& f, const NumVec<Rational>& x, unsigned long precision,
                          const LinearSolveOptions& options) {
  const std::size_t n = f.size();
  if (x.size() != n) throw DimensionMismatch(n, x.size());
  NumVec<Rational> fx = eval(f, x);
  SquareMat<Rational> jac = jacobian(f, x);
  SquareMat<Rational> a = identity_minus(jac);

  std::vector<NumVec<Rational>> rhs(1, NumVec<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) rhs[0][i] = fx[i] - x[i];
  if (precision > 0) rhs.emplace_back(n, Rational(1));
  std::vector<NumVec<Rational>> sol = solve_linear(a, std::span<const NumVec<Rational>>(rhs), options);

  SafeStep out;
  out.next.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sol[0][i] < 0) {
      throw InfeasibleSuspected("Newton iterate decreased in component " + f.variable(i) +
                                "; the system is probably infeasible");
    }
    out.next[i] = x[i] + sol[0][i];
  }
  out.error = 0;
  if (precision == 0) return out;

  const NumVec<Rational>& d = sol[1];
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] <= 0) {
      throw InfeasibleSuspected("(Id - f'(x))^-1 is not positive; the system is probably infeasible");
    }
  }
  const Rational scale = pow2_ceil_at_least_one(row_sum_norm(jac));
  const Rational s = pow2(-static_cast<long>(precision)) * scale;
  out.rounded = true;
  for (std::size_t i = 0; i < n; ++i) {
    Rational z = floor_to_grid(out.next[i] - s * d[i], precision);
    if (fx[i] > z) {
      z = fx[i];
      out.clamped = true;
      // floor(N - s*d) >= f(x) once 2^-p (|f'|*d + 1) <= N - f(x).
      Rational gap = out.next[i] - fx[i];
      if (gap > 0) {
        Rational ratio = gap / (scale * d[i] + 1);
        out.precision_needed =
            std::max(out.precision_needed, static_cast<unsigned long>(std::max(0L, floor_neg_log2(ratio) + 1)));
      }
    }
    out.error = std::max(out.error, Rational(out.next[i] - z));
    out.next[i] = std::move(z);
  }
  return out;
}

template <Scalar T>
IterationTrace<T> newton_solve(const Msp& f, const StopRule& stop, const SolverOptions& options) {
  IterationTrace<T> trace;
  trace.scheme = SchemeKind::newton;
  NumVec<T> x = zeros<T>(f.size());
  std::size_t budget = options.precision_budget;
  std::size_t step = 0;
  record(trace, f, 0, x);
  trace.final_iterate = x;
  while (!should_stop(f, stop, trace, step, x)) {
    Rational error;
    x = advance(f, x, budget, options, &error);
    check_divergence(x, options.divergence_bound);
    ++step;
    if constexpr (std::is_same_v<T, Rational>) trace.rounding_errors.push_back(error);
    if (wants_record(step)) record(trace, f, step, x);
    trace.final_iterate = x;
    trace.total_newton_steps = step;
  }
  finish(trace, f, step, x);
  return trace;
}

template <Scalar T>
IterationTrace<T> kleene_solve(const Msp& f, const StopRule& stop, const SolverOptions& options) {
  IterationTrace<T> trace;
  trace.scheme = SchemeKind::kleene;
  NumVec<T> x = zeros<T>(f.size());
  std::size_t step = 0;
  record(trace, f, 0, x);
  trace.final_iterate = x;
  while (!should_stop(f, stop, trace, step, x)) {
    NumVec<T> next = kleene_step(f, x);
    if constexpr (std::is_same_v<T, Rational>) {
      const std::size_t budget = options.precision_budget;
      if (budget != 0 && max_bit_size(next) > budget) {
        for (std::size_t i = 0; i < next.size(); ++i) {
          next[i] = std::max(x[i], floor_to_grid(next[i], budget / 2));
        }
      }
    }
    x = std::move(next);
    check_divergence(x, options.divergence_bound);
    ++step;
    if (wants_record(step)) record(trace, f, step, x);
    trace.final_iterate = x;
    trace.total_newton_steps = step;
  }
  finish(trace, f, step, x);
  return trace;
}

namespace {

struct SccResult {
  NumVec<Rational> values;
  std::size_t steps = 0;
};

template <Scalar T>
SccResult solve_scc(const Msp& f, const std::vector<VarIndex>& scc, const NumVec<Rational>& values,
                    std::size_t max_steps, const SolverOptions& options) {
  SccResult result{NumVec<Rational>(scc.size(), Rational(0)), 0};
  Msp sub = substitute(f, scc, values);
  std::optional<CleanResult> cleaned;
  try {
    cleaned = clean(sub);
  } catch (const AllVariablesUnproductive&) {
    return result;
  }
  const Msp& g = cleaned->system;
  NumVec<T> x = zeros<T>(g.size());
  std::size_t budget = options.precision_budget;
  for (std::size_t k = 0; k < max_steps; ++k) {
    NumVec<T> next = advance(g, x, budget, options, nullptr);
    check_divergence(next, options.divergence_bound);
    ++result.steps;
    const bool fixed = next == x;
    x = std::move(next);
    if (options.early_exit && fixed) break;
  }
  for (std::size_t i = 0; i < scc.size(); ++i) {
    if (cleaned->index_map[i]) result.values[i] = ScalarTraits<T>::to_rational(x[*cleaned->index_map[i]]);
  }
  return result;
}

}  // namespace

template <Scalar T>
IterationTrace<T> dnm_solve(const Msp& f, std::size_t j, const SolverOptions& options) {
  if (!f.is_quadratic()) throw PreconditionViolated("DNM needs a quadratic system; quadratize it first");
  if (j == 0) throw PreconditionViolated("DNM needs j >= 1");
  const auto dag = scc_decompose(f);

  IterationTrace<T> trace;
  trace.scheme = SchemeKind::dnm;
  trace.per_scc_steps.assign(dag->size(), 0);
  NumVec<Rational> values(f.size(), Rational(0));
  record(trace, f, 0, zeros<T>(f.size()));

  std::size_t total = 0;
  for (std::size_t t = dag->height + 1; t-- > 0;) {
    const std::vector<std::size_t> level = dag->comp(t);
    const std::size_t steps = j << t;
    std::vector<SccResult> results(level.size());
    if (options.parallel_sccs && level.size() > 1) {
      std::vector<std::future<SccResult>> jobs;
      for (std::size_t s : level) {
        jobs.push_back(std::async(std::launch::async, [&, s] {
          return solve_scc<T>(f, dag->sccs[s], values, steps, options);
        }));
      }
      for (std::size_t k = 0; k < jobs.size(); ++k) results[k] = jobs[k].get();
    } else {
      for (std::size_t k = 0; k < level.size(); ++k) {
        results[k] = solve_scc<T>(f, dag->sccs[level[k]], values, steps, options);
      }
    }
    for (std::size_t k = 0; k < level.size(); ++k) {
      const auto& scc = dag->sccs[level[k]];
      for (std::size_t i = 0; i < scc.size(); ++i) values[scc[i]] = results[k].values[i];
      trace.per_scc_steps[level[k]] = results[k].steps;
      total += results[k].steps;
    }
    record(trace, f, total, from_rational<T>(values));
  }
  trace.final_iterate = from_rational<T>(values);
  trace.total_newton_steps = total;
  return trace;
}

template struct IterationTrace<Rational>;
template struct IterationTrace<Float>;
template NumVec<Rational> kleene_step(const Msp&, const NumVec<Rational>&);
template NumVec<Float> kleene_step(const Msp&, const NumVec<Float>&);
template NumVec<Rational> newton_step(const Msp&, const NumVec<Rational>&, const LinearSolveOptions&);
template NumVec<Float> newton_step(const Msp&, const NumVec<Float>&, const LinearSolveOptions&);
template IterationTrace<Rational> newton_solve(const Msp&, const StopRule&, const SolverOptions&);
template IterationTrace<Float> newton_solve(const Msp&, const StopRule&, const SolverOptions&);
template IterationTrace<Rational> kleene_solve(const Msp&, const StopRule&, const SolverOptions&);
template IterationTrace<Float> kleene_solve(const Msp&, const StopRule&, const SolverOptions&);
template IterationTrace<Rational> dnm_solve(const Msp&, std::size_t, const SolverOptions&);
template IterationTrace<Float> dnm_solve(const Msp&, std::size_t, const SolverOptions&);

}  // namespace mspe
