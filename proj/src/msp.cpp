#include "mspe/msp.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <stdexcept>

namespace mspe {

std::string_view to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? "exact" : "float";
}

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::generic:
      return "generic";
    case Origin::termination:
      return "termination";
    case Origin::strict_termination:
      return "strict-termination";
  }
  return "generic";
}

struct Msp::Cache {
  std::mutex mutex;
  std::shared_ptr<const SccDag> scc_dag;
};

namespace {

std::vector<bool> reachable_from(const std::vector<std::vector<VarIndex>>& adjacency, VarIndex start) {
  std::vector<bool> seen(adjacency.size(), false);
  std::vector<VarIndex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    VarIndex v = stack.back();
    stack.pop_back();
    for (VarIndex w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

Msp::Msp(std::vector<std::string> variables, std::vector<Polynomial> equations, Origin origin)
    : variables_(std::move(variables)),
      equations_(std::move(equations)),
      origin_(origin),
      cache_(std::make_shared<Cache>()) {
  const std::size_t n = variables_.size();
  if (n == 0) throw std::invalid_argument("a system needs at least one variable");
  if (equations_.size() != n) throw std::invalid_argument("one equation per variable is required");
  std::set<std::string> names(variables_.begin(), variables_.end());
  if (names.size() != n) throw std::invalid_argument("duplicate variable name");

  std::vector<std::vector<VarIndex>> forward(n);
  std::vector<std::vector<VarIndex>> backward(n);
  is_quadratic_ = true;
  for (VarIndex i = 0; i < n; ++i) {
    std::set<VarIndex> targets;
    for (const auto& m : equations_[i].monomials()) {
      if (m.degree() > 2) is_quadratic_ = false;
      for (const auto& [var, power] : m.exponents()) {
        if (var >= n) throw std::invalid_argument("variable index out of range");
        targets.insert(var);
      }
    }
    for (VarIndex k : targets) {
      forward[i].push_back(k);
      backward[k].push_back(i);
    }
  }

  auto productive = productive_variables(*this);
  is_clean_ = std::all_of(productive.begin(), productive.end(), [](bool b) { return b; });

  auto down = reachable_from(forward, 0);
  auto up = reachable_from(backward, 0);
  is_strongly_connected_ = true;
  for (VarIndex i = 0; i < n; ++i) {
    if (!down[i] || !up[i]) is_strongly_connected_ = false;
  }
  // A single variable is strongly connected even without a self-loop.
}

std::optional<VarIndex> Msp::index_of(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<VarIndex>(it - variables_.begin());
}

Msp Msp::with_origin(Origin origin) const { return Msp(variables_, equations_, origin); }

std::shared_ptr<const SccDag> Msp::cached_scc_dag() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->scc_dag;
}

void Msp::cache_scc_dag(std::shared_ptr<const SccDag> dag) const {
  std::lock_guard lock(cache_->mutex);
  cache_->scc_dag = std::move(dag);
}

std::vector<bool> productive_variables(const Msp& f) {
  const std::size_t n = f.size();
  std::vector<bool> positive(n, false);
  // kappa^(k+1)_i > 0 iff some monomial of f_i has all its variables positive in kappa^(k).
  for (std::size_t round = 0; round < n; ++round) {
    std::vector<bool> next(n, false);
    bool changed = false;
    for (VarIndex i = 0; i < n; ++i) {
      for (const auto& m : f.equation(i).monomials()) {
        bool all = std::all_of(m.exponents().begin(), m.exponents().end(),
                               [&](const auto& e) { return positive[e.first]; });
        if (all) {
          next[i] = true;
          break;
        }
      }
      if (next[i] != positive[i]) changed = true;
    }
    positive = std::move(next);
    if (!changed) break;
  }
  return positive;
}

template <Scalar T>
NumVec<T> eval(const Msp& f, const NumVec<T>& x) {
  if (x.size() != f.size()) throw DimensionMismatch(f.size(), x.size());
  NumVec<T> y;
  y.reserve(f.size());
  std::span<const T> view(x);
  for (const auto& p : f.equations()) {
    T value = p.template evaluate<T>(view);
    require_finite(value);
    y.push_back(std::move(value));
  }
  return y;
}

template <Scalar T>
SquareMat<T> jacobian(const Msp& f, const NumVec<T>& x) {
  if (x.size() != f.size()) throw DimensionMismatch(f.size(), x.size());
  const std::size_t n = f.size();
  SquareMat<T> jac(n);
  std::span<const T> view(x);
  for (VarIndex i = 0; i < n; ++i) {
    for (const auto& m : f.equation(i).monomials()) {
      for (const auto& [var, power] : m.exponents()) {
        jac(i, var) += m.template derivative<T>(var, view);
      }
    }
    for (VarIndex k = 0; k < n; ++k) require_finite(jac(i, k));
  }
  return jac;
}

NumVec<Rational> constant_terms(const Msp& f) {
  NumVec<Rational> c;
  c.reserve(f.size());
  for (const auto& p : f.equations()) c.push_back(p.constant_term());
  return c;
}

template <Scalar T>
T residual_norm(const Msp& f, const NumVec<T>& x) {
  NumVec<T> fx = eval(f, x);
  T norm(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    T d = abs(T(fx[i] - x[i]));
    if (d > norm) norm = d;
  }
  return norm;
}

template NumVec<Rational> eval(const Msp&, const NumVec<Rational>&);
template NumVec<Float> eval(const Msp&, const NumVec<Float>&);
template SquareMat<Rational> jacobian(const Msp&, const NumVec<Rational>&);
template SquareMat<Float> jacobian(const Msp&, const NumVec<Float>&);
template Rational residual_norm(const Msp&, const NumVec<Rational>&);
template Float residual_norm(const Msp&, const NumVec<Float>&);

}  // namespace mspe
