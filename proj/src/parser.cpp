#include "mspe/parser.hpp"

#include <map>
#include <sstream>

#include "lexer.hpp"

namespace mspe {

namespace detail {

// Shared with the model parsers: reads INT | INT '/' INT | DECIMAL.
Rational parse_coefficient(TokenStream& in) {
  if (in.peek().kind == TokenKind::symbol && in.peek().text == "-") {
    const Token& minus = in.peek();
    throw NegativeCoefficient(minus.line, minus.column);
  }
  const Token& first = in.expect(TokenKind::number, "a coefficient");
  std::string text = first.text;
  if (in.accept_symbol('/')) {
    const Token& den = in.expect(TokenKind::number, "a denominator");
    if (first.text.find('.') != std::string::npos || den.text.find('.') != std::string::npos) {
      throw ParseError("fractions must use integer numerator and denominator", first.line, first.column);
    }
    text += "/" + den.text;
  }
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), first.line, first.column);
  }
}

Origin origin_from_pragmas(const std::vector<std::string>& pragmas) {
  Origin origin = Origin::generic;
  for (const auto& p : pragmas) {
    std::istringstream words(p);
    std::string key;
    std::string value;
    words >> key >> value;
    if (key != "origin") continue;
    if (value == "termination") {
      origin = Origin::termination;
    } else if (value == "strict-termination") {
      origin = Origin::strict_termination;
    } else if (value == "generic") {
      origin = Origin::generic;
    }
  }
  return origin;
}

}  // namespace detail

namespace {

struct RawFactor {
  std::string name;
  unsigned power;
  std::size_t line;
  std::size_t column;
};

struct RawTerm {
  Rational coefficient;
  std::vector<RawFactor> factors;
};

struct RawEquation {
  std::string lhs;
  std::size_t line;
  std::size_t column;
  std::vector<RawTerm> terms;
};

RawFactor parse_factor(detail::TokenStream& in) {
  const detail::Token& var = in.expect(detail::TokenKind::identifier, "a variable");
  RawFactor factor{var.text, 1, var.line, var.column};
  if (in.accept_symbol('^')) {
    const detail::Token& exp = in.expect(detail::TokenKind::number, "an integer exponent");
    if (exp.text.find('.') != std::string::npos || exp.text.size() > 6) {
      throw ParseError("exponent must be a small positive integer", exp.line, exp.column);
    }
    factor.power = static_cast<unsigned>(std::stoul(exp.text));
    if (factor.power == 0) throw ParseError("exponent must be positive", exp.line, exp.column);
  }
  return factor;
}

RawTerm parse_term(detail::TokenStream& in) {
  RawTerm term{Rational(1), {}};
  if (in.peek().kind == detail::TokenKind::identifier) {
    term.factors.push_back(parse_factor(in));
  } else {
    term.coefficient = detail::parse_coefficient(in);
  }
  while (in.accept_symbol('*')) {
    if (in.peek().kind == detail::TokenKind::symbol && in.peek().text == "-") {
      throw NegativeCoefficient(in.peek().line, in.peek().column);
    }
    term.factors.push_back(parse_factor(in));
  }
  return term;
}

}  // namespace

Msp parse_mspe(std::string_view text) {
  detail::Lexed lexed = detail::tokenize(text);
  detail::TokenStream in(lexed.tokens);

  std::vector<RawEquation> raw;
  do {
    const detail::Token& lhs = in.expect(detail::TokenKind::identifier, "a variable on the left-hand side");
    RawEquation eq{lhs.text, lhs.line, lhs.column, {}};
    in.expect_symbol('=');
    eq.terms.push_back(parse_term(in));
    while (in.accept_symbol('+')) eq.terms.push_back(parse_term(in));
    if (in.peek().kind == detail::TokenKind::symbol && in.peek().text == "-") {
      throw NegativeCoefficient(in.peek().line, in.peek().column);
    }
    in.expect_symbol(';');
    raw.push_back(std::move(eq));
  } while (!in.at_end());

  std::map<std::string, VarIndex> index;
  std::vector<std::string> names;
  for (const auto& eq : raw) {
    if (!index.emplace(eq.lhs, names.size()).second) {
      throw ParseError("variable '" + eq.lhs + "' has more than one equation", eq.line, eq.column);
    }
    names.push_back(eq.lhs);
  }

  std::vector<Polynomial> equations;
  equations.reserve(raw.size());
  for (const auto& eq : raw) {
    std::vector<std::pair<Rational, Exponents>> terms;
    for (const auto& term : eq.terms) {
      Exponents exps;
      for (const auto& factor : term.factors) {
        auto it = index.find(factor.name);
        if (it == index.end()) throw UndefinedVariable(factor.name, factor.line, factor.column);
        exps.emplace_back(it->second, factor.power);
      }
      terms.emplace_back(term.coefficient, std::move(exps));
    }
    equations.emplace_back(std::move(terms));
  }
  return Msp(std::move(names), std::move(equations), detail::origin_from_pragmas(lexed.pragmas));
}

std::string format_mspe(const Msp& f) {
  std::ostringstream out;
  if (f.origin() != Origin::generic) out << "#@origin " << to_string(f.origin()) << "\n";
  for (VarIndex i = 0; i < f.size(); ++i) {
    out << f.variable(i) << " = ";
    const auto& monomials = f.equation(i).monomials();
    if (monomials.empty()) out << "0";
    for (std::size_t t = 0; t < monomials.size(); ++t) {
      if (t > 0) out << " + ";
      out << to_plain_string(monomials[t].coefficient());
      for (const auto& [var, power] : monomials[t].exponents()) {
        out << "*" << f.variable(var);
        if (power > 1) out << "^" << power;
      }
    }
    out << ";\n";
  }
  return out.str();
}

}  // namespace mspe
