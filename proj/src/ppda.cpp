#include "mspe/ppda.hpp"

#include <set>
#include <sstream>

#include "lexer.hpp"
#include "mspe/transforms.hpp"

namespace mspe {

namespace detail {
Rational parse_coefficient(TokenStream& in);
}

Ppda::Ppda(std::vector<PpdaRule> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) throw InvalidModel("a pPDA needs at least one rule");
  std::set<std::string> states;
  std::set<std::string> symbols;
  std::map<std::pair<std::string, std::string>, Rational> sums;
  for (const auto& r : rules_) {
    if (r.probability <= 0 || r.probability > 1) {
      throw InvalidModel("rule probability must lie in (0, 1]: " + to_plain_string(r.probability));
    }
    if (r.push.size() > 2) throw InvalidModel("rule pushes more than two stack symbols");
    states.insert(r.state);
    states.insert(r.target);
    symbols.insert(r.symbol);
    symbols.insert(r.push.begin(), r.push.end());
    sums[{r.state, r.symbol}] += r.probability;
  }
  for (const auto& [key, sum] : sums) {
    if (sum != 1) throw ProbabilitySumViolation(key.first, key.second, to_plain_string(sum));
  }
  states_.assign(states.begin(), states.end());
  symbols_.assign(symbols.begin(), symbols.end());
}

BackButton::BackButton(std::vector<std::string> pages, std::vector<Rational> back,
                       std::map<std::pair<std::size_t, std::size_t>, Rational> links)
    : pages_(std::move(pages)), back_(std::move(back)), links_(std::move(links)) {
  if (pages_.empty()) throw InvalidModel("a back-button process needs at least one page");
  if (back_.size() != pages_.size()) throw DimensionMismatch(pages_.size(), back_.size());
  std::vector<Rational> sums = back_;
  for (const auto& [edge, prob] : links_) {
    if (edge.first >= pages_.size() || edge.second >= pages_.size()) {
      throw InvalidModel("link refers to an unknown page");
    }
    if (prob <= 0) throw InvalidModel("link probabilities must be positive");
    sums[edge.first] += prob;
  }
  for (std::size_t a = 0; a < pages_.size(); ++a) {
    if (back_[a] <= 0) throw InvalidModel("page " + pages_[a] + " has back probability 0");
    if (sums[a] != 1) throw ProbabilitySumViolation("p", pages_[a], to_plain_string(sums[a]));
  }
}

namespace {

bool is_name(const detail::Token& t) {
  return t.kind == detail::TokenKind::identifier || t.kind == detail::TokenKind::number;
}

const detail::Token& expect_name(detail::TokenStream& in, const char* what) {
  if (!is_name(in.peek())) in.fail(std::string("expected ") + what);
  return in.next();
}

void expect_keyword(detail::TokenStream& in, const char* word) {
  if (in.peek().kind != detail::TokenKind::identifier || in.peek().text != word) {
    in.fail(std::string("expected '") + word + "'");
  }
  in.next();
}

}  // namespace

Ppda parse_ppda(std::string_view text) {
  detail::Lexed lexed = detail::tokenize(text);
  detail::TokenStream in(lexed.tokens);
  std::vector<PpdaRule> rules;
  while (!in.at_end()) {
    expect_keyword(in, "rule");
    PpdaRule rule;
    rule.state = expect_name(in, "a state").text;
    rule.symbol = expect_name(in, "a stack symbol").text;
    if (in.peek().kind != detail::TokenKind::arrow) in.fail("expected '->'");
    in.next();
    rule.probability = detail::parse_coefficient(in);
    rule.target = expect_name(in, "a target state").text;
    while (is_name(in.peek())) {
      const detail::Token& sym = in.next();
      if (rule.push.size() == 2) throw RhsTooLong(sym.line, sym.column);
      rule.push.push_back(sym.text);
    }
    in.expect_symbol(';');
    rules.push_back(std::move(rule));
  }
  if (rules.empty()) throw ParseError("no rules", 1, 1);
  return Ppda(std::move(rules));
}

std::string format_ppda(const Ppda& ppda) {
  std::ostringstream out;
  for (const auto& r : ppda.rules()) {
    out << "rule " << r.state << " " << r.symbol << " -> " << to_plain_string(r.probability) << " " << r.target;
    for (const auto& s : r.push) out << " " << s;
    out << ";\n";
  }
  return out.str();
}

BackButton parse_backbutton(std::string_view text) {
  detail::Lexed lexed = detail::tokenize(text);
  detail::TokenStream in(lexed.tokens);
  std::vector<std::string> pages;
  std::vector<Rational> back;
  std::map<std::string, std::size_t> index;
  struct PendingLink {
    std::string from;
    std::string to;
    Rational prob;
    std::size_t line;
    std::size_t column;
  };
  std::vector<PendingLink> pending;

  while (!in.at_end()) {
    const detail::Token& keyword = in.expect(detail::TokenKind::identifier, "'page' or 'link'");
    if (keyword.text == "page") {
      const detail::Token& id = expect_name(in, "a page id");
      if (!index.emplace(id.text, pages.size()).second) {
        throw ParseError("page '" + id.text + "' declared twice", id.line, id.column);
      }
      expect_keyword(in, "back");
      pages.push_back(id.text);
      back.push_back(detail::parse_coefficient(in));
    } else if (keyword.text == "link") {
      const detail::Token& from = expect_name(in, "a page id");
      const detail::Token& to = expect_name(in, "a page id");
      pending.push_back({from.text, to.text, detail::parse_coefficient(in), from.line, from.column});
    } else {
      throw ParseError("expected 'page' or 'link', found '" + keyword.text + "'", keyword.line, keyword.column);
    }
    in.expect_symbol(';');
  }

  std::map<std::pair<std::size_t, std::size_t>, Rational> links;
  for (const auto& l : pending) {
    auto a = index.find(l.from);
    auto b = index.find(l.to);
    if (a == index.end()) throw UndefinedVariable(l.from, l.line, l.column);
    if (b == index.end()) throw UndefinedVariable(l.to, l.line, l.column);
    if (!links.emplace(std::make_pair(a->second, b->second), l.prob).second) {
      throw ParseError("link " + l.from + " -> " + l.to + " declared twice", l.line, l.column);
    }
  }
  return BackButton(std::move(pages), std::move(back), std::move(links));
}

std::string triple_name(const Triple& t) { return "[" + t.state + "." + t.symbol + "." + t.target + "]"; }

TerminationMspe termination_mspe(const Ppda& ppda) {
  const auto& Q = ppda.states();
  const auto& G = ppda.symbols();
  std::map<std::string, std::size_t> qi;
  std::map<std::string, std::size_t> gi;
  for (std::size_t i = 0; i < Q.size(); ++i) qi[Q[i]] = i;
  for (std::size_t i = 0; i < G.size(); ++i) gi[G[i]] = i;
  // Triples are numbered in lexicographic order of (p, X, q).
  auto var = [&](std::size_t p, std::size_t x, std::size_t q) { return (p * G.size() + x) * Q.size() + q; };

  std::vector<std::string> names;
  std::vector<Triple> triples;
  for (const auto& p : Q) {
    for (const auto& x : G) {
      for (const auto& q : Q) {
        triples.push_back({p, x, q});
        names.push_back(triple_name(triples.back()));
      }
    }
  }

  std::vector<std::vector<std::pair<Rational, Exponents>>> terms(names.size());
  for (const auto& r : ppda.rules()) {
    const std::size_t p = qi.at(r.state);
    const std::size_t x = gi.at(r.symbol);
    const std::size_t target = qi.at(r.target);
    for (std::size_t q = 0; q < Q.size(); ++q) {
      auto& out = terms[var(p, x, q)];
      switch (r.push.size()) {
        case 0:
          if (target == q) out.emplace_back(r.probability, Exponents{});
          break;
        case 1:
          out.emplace_back(r.probability, Exponents{{var(target, gi.at(r.push[0]), q), 1}});
          break;
        default:
          for (std::size_t t = 0; t < Q.size(); ++t) {
            out.emplace_back(r.probability, canonical_exponents({{var(target, gi.at(r.push[0]), t), 1},
                                                                 {var(t, gi.at(r.push[1]), q), 1}}));
          }
      }
    }
  }

  std::vector<Polynomial> equations;
  equations.reserve(terms.size());
  for (auto& t : terms) equations.emplace_back(std::move(t));
  const Origin origin = is_strict(ppda) ? Origin::strict_termination : Origin::termination;
  CleanResult cleaned = clean(Msp(std::move(names), std::move(equations), origin));

  TerminationMspe result{std::move(cleaned.system), {}, {}};
  for (std::size_t i = 0; i < triples.size(); ++i) {
    (cleaned.index_map[i] ? result.triples : result.removed).push_back(triples[i]);
  }
  return result;
}

bool is_strict(const Ppda& ppda) {
  std::map<std::pair<std::string, std::string>, std::set<std::string>> pops;
  for (const auto& r : ppda.rules()) {
    auto& targets = pops[{r.state, r.symbol}];
    if (r.push.empty()) targets.insert(r.target);
  }
  for (const auto& [key, targets] : pops) {
    if (targets.size() != ppda.states().size()) return false;
  }
  return true;
}

Msp backbutton_mspe(const BackButton& process) {
  const std::size_t n = process.pages().size();
  std::vector<std::string> names;
  for (const auto& page : process.pages()) names.push_back(triple_name({"p", page, "p"}));
  std::vector<std::vector<std::pair<Rational, Exponents>>> terms(n);
  for (std::size_t a = 0; a < n; ++a) terms[a].emplace_back(process.back()[a], Exponents{});
  for (const auto& [edge, prob] : process.links()) {
    terms[edge.first].emplace_back(prob, canonical_exponents({{edge.first, 1}, {edge.second, 1}}));
  }
  std::vector<Polynomial> equations;
  for (auto& t : terms) equations.emplace_back(std::move(t));
  return Msp(std::move(names), std::move(equations), Origin::strict_termination);
}

Ppda to_ppda(const BackButton& process) {
  std::vector<PpdaRule> rules;
  for (std::size_t a = 0; a < process.pages().size(); ++a) {
    rules.push_back({"p", process.pages()[a], process.back()[a], "p", {}});
  }
  for (const auto& [edge, prob] : process.links()) {
    rules.push_back({"p", process.pages()[edge.first], prob, "p",
                     {process.pages()[edge.second], process.pages()[edge.first]}});
  }
  return Ppda(std::move(rules));
}

}  // namespace mspe
