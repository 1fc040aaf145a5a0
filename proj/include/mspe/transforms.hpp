#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mspe/msp.hpp"

namespace mspe {

struct CleanResult {
  Msp system;
  /// Names of the unproductive variables, in original order.
  std::vector<std::string> removed;
  /// Original index -> index in `system`, or nullopt for removed variables.
  std::vector<std::optional<VarIndex>> index_map;
};

/// Removes unproductive variables (substituting 0 for them) so the result is
/// clean. Monomials that mention a removed variable vanish.
/// Throws AllVariablesUnproductive if nothing survives.
CleanResult clean(const Msp& f);

struct QuadratizeResult {
  Msp system;
  /// Original index -> index in `system` (auxiliaries are appended).
  std::vector<VarIndex> var_map;
  std::size_t auxiliaries = 0;
};

/// Splits every monomial of degree > 2 by repeatedly replacing its two
/// leftmost factors with an auxiliary variable Y = A*B. Each distinct product
/// gets one auxiliary. Systems that are already quadratic are returned as is.
QuadratizeResult quadratize(const Msp& f);

/// Restricts `f` to the variables in `keep` (in that order) and replaces
/// every other variable by the given value, folding constants.
/// `values` is indexed like f's variables; entries for kept variables are ignored.
Msp substitute(const Msp& f, const std::vector<VarIndex>& keep, const NumVec<Rational>& values);

}  // namespace mspe
