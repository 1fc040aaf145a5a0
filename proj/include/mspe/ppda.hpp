#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mspe/msp.hpp"

namespace mspe {

/// pX --prob--> q alpha, with |alpha| <= 2 (alpha empty means pop).
struct PpdaRule {
  std::string state;
  std::string symbol;
  Rational probability;
  std::string target;
  std::vector<std::string> push;
};

/// Probabilistic pushdown automaton. States and stack symbols are the names
/// mentioned by the rules, kept in lexicographic order.
class Ppda {
 public:
  /// Validates probabilities in (0, 1], |push| <= 2 and that the rules
  /// leaving every (p, X) sum to exactly 1.
  /// Throws ProbabilitySumViolation or InvalidModel.
  explicit Ppda(std::vector<PpdaRule> rules);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<PpdaRule>& rules() const { return rules_; }

 private:
  std::vector<PpdaRule> rules_;
  std::vector<std::string> states_;
  std::vector<std::string> symbols_;
};

/// One-state strict pPDA over web pages: pA -> p (prob b_A) and pA -> pBA (prob l_AB).
class BackButton {
 public:
  /// Throws InvalidModel unless b_A > 0 and b_A + sum_B l_AB = 1 for every page.
  BackButton(std::vector<std::string> pages, std::vector<Rational> back,
             std::map<std::pair<std::size_t, std::size_t>, Rational> links);

  const std::vector<std::string>& pages() const { return pages_; }
  const std::vector<Rational>& back() const { return back_; }
  /// (from page index, to page index) -> l_AB.
  const std::map<std::pair<std::size_t, std::size_t>, Rational>& links() const { return links_; }

 private:
  std::vector<std::string> pages_;
  std::vector<Rational> back_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> links_;
};

/// `rule STATE SYM -> coeff STATE SYM{0,2} ;` statements, `#` comments.
/// Throws ParseError, RhsTooLong, ProbabilitySumViolation.
Ppda parse_ppda(std::string_view text);

std::string format_ppda(const Ppda& ppda);

/// `page ID back coeff ;` and `link ID ID coeff ;` statements.
BackButton parse_backbutton(std::string_view text);

struct Triple {
  std::string state;
  std::string symbol;
  std::string target;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Variable name of a termination probability: "[p.X.q]".
std::string triple_name(const Triple& t);

struct TerminationMspe {
  Msp system;
  /// Triple of every variable of `system`, by index.
  std::vector<Triple> triples;
  /// Triples removed as unproductive.
  std::vector<Triple> removed;
};

/// Termination system of a pPDA: one variable per triple (p, X, q) in
/// lexicographic order, cleaned. Origin is strict_termination when the
/// pPDA is strict. Throws AllVariablesUnproductive.
TerminationMspe termination_mspe(const Ppda& ppda);

/// Every (p, X) with rules can pop to every state q with positive probability.
bool is_strict(const Ppda& ppda);

/// [pAp] = b_A + [pAp] * sum_B l_AB [pBp], pages in declaration order.
Msp backbutton_mspe(const BackButton& process);

Ppda to_ppda(const BackButton& process);

}  // namespace mspe
