#include "mspe/polynomial.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mspe {

Exponents canonical_exponents(Exponents exponents) {
  std::sort(exponents.begin(), exponents.end());
  Exponents merged;
  for (const auto& [var, power] : exponents) {
    if (power == 0) continue;
    if (!merged.empty() && merged.back().first == var) {
      merged.back().second += power;
    } else {
      merged.emplace_back(var, power);
    }
  }
  return merged;
}

unsigned total_degree(const Exponents& exponents) {
  unsigned d = 0;
  for (const auto& e : exponents) d += e.second;
  return d;
}

Monomial::Monomial(Rational coefficient, Exponents exponents)
    : coefficient_(std::move(coefficient)), exponents_(canonical_exponents(std::move(exponents))) {
  if (coefficient_ <= 0) throw std::invalid_argument("monomial coefficient must be positive");
}

unsigned Monomial::power_of(VarIndex var) const {
  for (const auto& [v, p] : exponents_) {
    if (v == var) return p;
    if (v > var) break;
  }
  return 0;
}

std::vector<VarIndex> Monomial::factors() const {
  std::vector<VarIndex> out;
  for (const auto& [v, p] : exponents_) out.insert(out.end(), p, v);
  return out;
}

namespace {

// Descending degree, then ascending signature.
struct TermOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    unsigned da = total_degree(a);
    unsigned db = total_degree(b);
    if (da != db) return da > db;
    return a < b;
  }
};

}  // namespace

Polynomial::Polynomial(std::vector<std::pair<Rational, Exponents>> terms) {
  std::map<Exponents, Rational, TermOrder> merged;
  for (auto& [coefficient, exponents] : terms) {
    if (coefficient < 0) throw std::invalid_argument("polynomial coefficients must be non-negative");
    if (coefficient == 0) continue;
    merged[canonical_exponents(std::move(exponents))] += coefficient;
  }
  monomials_.reserve(merged.size());
  for (auto& [exponents, coefficient] : merged) monomials_.emplace_back(coefficient, exponents);
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& m : monomials_) d = std::max(d, m.degree());
  return d;
}

bool Polynomial::contains(VarIndex var) const {
  return std::any_of(monomials_.begin(), monomials_.end(), [var](const Monomial& m) { return m.contains(var); });
}

Rational Polynomial::constant_term() const {
  if (!monomials_.empty() && monomials_.back().degree() == 0) return monomials_.back().coefficient();
  return Rational(0);
}

}  // namespace mspe
