#pragma once

#include <cstdint>

#include "mspe/ppda.hpp"

namespace mspe {

struct GenerateOptions {
  std::size_t n_states = 2;
  std::size_t n_symbols = 2;
  std::uint64_t seed = 1;
  /// Besides the pop rule(s), every (p, X) gets 1..max_rules rules that push
  /// one or two symbols.
  std::size_t max_rules = 3;
  /// Force a pop rule to every state from every (p, X).
  bool strict = false;
};

/// Random pPDA with small integer weights normalized to probabilities.
/// Every (p, X) gets a pop rule, so every stack symbol can be consumed.
/// Output depends only on the options (the draw does not go through
/// implementation-defined std distributions).
Ppda generate_ppda(const GenerateOptions& options);

}  // namespace mspe
