#include "mspe/transforms.hpp"

#include <map>
#include <set>

namespace mspe {

CleanResult clean(const Msp& f) {
  const std::vector<bool> productive = productive_variables(f);
  std::vector<std::optional<VarIndex>> index_map(f.size());
  std::vector<std::string> names;
  std::vector<std::string> removed;
  for (VarIndex i = 0; i < f.size(); ++i) {
    if (productive[i]) {
      index_map[i] = names.size();
      names.push_back(f.variable(i));
    } else {
      removed.push_back(f.variable(i));
    }
  }
  if (names.empty()) throw AllVariablesUnproductive();
  if (removed.empty()) return {f, {}, std::move(index_map)};

  std::vector<Polynomial> equations;
  for (VarIndex i = 0; i < f.size(); ++i) {
    if (!productive[i]) continue;
    std::vector<std::pair<Rational, Exponents>> terms;
    for (const auto& m : f.equation(i).monomials()) {
      Exponents exps;
      bool vanishes = false;
      for (const auto& [var, power] : m.exponents()) {
        if (!index_map[var]) {
          vanishes = true;
          break;
        }
        exps.emplace_back(*index_map[var], power);
      }
      if (!vanishes) terms.emplace_back(m.coefficient(), std::move(exps));
    }
    equations.emplace_back(std::move(terms));
  }
  return {Msp(std::move(names), std::move(equations), f.origin()), std::move(removed), std::move(index_map)};
}

QuadratizeResult quadratize(const Msp& f) {
  std::vector<VarIndex> identity(f.size());
  for (VarIndex i = 0; i < f.size(); ++i) identity[i] = i;
  if (f.is_quadratic()) return {f, std::move(identity), 0};

  std::vector<std::string> names = f.variables();
  std::set<std::string> taken(names.begin(), names.end());
  std::map<std::pair<VarIndex, VarIndex>, VarIndex> products;
  std::vector<std::pair<VarIndex, VarIndex>> aux_definitions;
  std::size_t counter = 0;

  auto auxiliary_for = [&](VarIndex a, VarIndex b) {
    auto key = std::minmax(a, b);
    if (auto it = products.find(key); it != products.end()) return it->second;
    std::string name;
    do {
      name = "_aux" + std::to_string(++counter);
    } while (taken.count(name) != 0);
    taken.insert(name);
    VarIndex index = names.size();
    names.push_back(name);
    products.emplace(key, index);
    aux_definitions.push_back(key);
    return index;
  };

  std::vector<Polynomial> equations;
  for (const auto& p : f.equations()) {
    std::vector<std::pair<Rational, Exponents>> terms;
    for (const auto& m : p.monomials()) {
      std::vector<VarIndex> factors = m.factors();
      while (factors.size() > 2) {
        VarIndex aux = auxiliary_for(factors[0], factors[1]);
        factors.erase(factors.begin());
        factors.front() = aux;
      }
      Exponents exps;
      for (VarIndex v : factors) exps.emplace_back(v, 1);
      terms.emplace_back(m.coefficient(), std::move(exps));
    }
    equations.emplace_back(std::move(terms));
  }
  for (const auto& [a, b] : aux_definitions) {
    equations.emplace_back(std::vector<std::pair<Rational, Exponents>>{{Rational(1), Exponents{{a, 1}, {b, 1}}}});
  }
  std::size_t count = aux_definitions.size();
  return {Msp(std::move(names), std::move(equations), Origin::generic), std::move(identity), count};
}

Msp substitute(const Msp& f, const std::vector<VarIndex>& keep, const NumVec<Rational>& values) {
  if (values.size() != f.size()) throw DimensionMismatch(f.size(), values.size());
  std::vector<std::optional<VarIndex>> local(f.size());
  std::vector<std::string> names;
  for (VarIndex v : keep) {
    local.at(v) = names.size();
    names.push_back(f.variable(v));
  }
  std::vector<Polynomial> equations;
  for (VarIndex v : keep) {
    std::vector<std::pair<Rational, Exponents>> terms;
    for (const auto& m : f.equation(v).monomials()) {
      Rational coefficient = m.coefficient();
      Exponents exps;
      for (const auto& [var, power] : m.exponents()) {
        if (local[var]) {
          exps.emplace_back(*local[var], power);
        } else {
          coefficient *= pow(values[var], power);
        }
      }
      terms.emplace_back(std::move(coefficient), std::move(exps));
    }
    equations.emplace_back(std::move(terms));
  }
  return Msp(std::move(names), std::move(equations), Origin::generic);
}

}  // namespace mspe
