#include <doctest.h>

#include <cmath>

#include "mspe/generate.hpp"
#include "mspe/ppda.hpp"
#include "mspe/solvers.hpp"
#include "mspe/transforms.hpp"
#include "support.hpp"

using namespace mspe;
using support::q;

namespace {

// The three-page system written out term by term.
Msp worked_example() {
  return Msp({"X1", "X2", "X3"},
             {Polynomial({{q("2/5"), {{0, 1}, {1, 1}}}, {q("3/5"), {}}}),
              Polynomial({{q("3/10"), {{0, 1}, {1, 1}}}, {q("2/5"), {{1, 1}, {2, 1}}}, {q("3/10"), {}}}),
              Polynomial({{q("3/10"), {{0, 1}, {2, 1}}}, {q("7/10"), {}}})});
}

}  // namespace

TEST_SUITE("frontend") {
  TEST_CASE("single equation") {
    Msp f = parse_mspe("X = 1/2*X*X + 1/2;");
    REQUIRE(f.size() == 1);
    const auto& ms = f.equation(0).monomials();
    REQUIRE(ms.size() == 2);
    CHECK(ms[0].coefficient() == q("1/2"));
    CHECK(ms[0].exponents() == Exponents{{0, 2}});
    CHECK(ms[1].coefficient() == q("1/2"));
    CHECK(ms[1].exponents().empty());
    CHECK(f == parse_mspe("X = 1/2*X^2 + 0.5;"));
  }

  TEST_CASE("worked example fixture") {
    Msp f = support::load("backbutton3.mspe");
    CHECK(f == worked_example());
    CHECK(f.is_strict());
    CHECK(f.variables() == std::vector<std::string>{"X1", "X2", "X3"});
  }

  TEST_CASE("negative coefficients are rejected") {
    CHECK_THROWS_AS(parse_mspe("X = -1*X;"), NegativeCoefficient);
    CHECK_THROWS_AS(parse_mspe("X = 1/2*X + -1/2;"), NegativeCoefficient);
  }

  TEST_CASE("parse errors carry a location") {
    try {
      parse_mspe("X = 1/2*X + 1/2;\nY = 1/2 * * X;");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() >= 9);
    }
    try {
      parse_mspe("X = 1/2*Z + 1/2;");
      FAIL("expected an undefined variable");
    } catch (const UndefinedVariable& e) {
      CHECK(e.name() == "Z");
      CHECK(e.line() == 1);
      CHECK(e.column() == 9);
    }
    CHECK_THROWS_AS(parse_mspe("X = 1/2*X + 1/2"), ParseError);
    CHECK_THROWS_AS(parse_mspe(""), ParseError);
    CHECK_THROWS_AS(parse_mspe("X = 1/2; X = 1/3;"), ParseError);
    CHECK_THROWS_AS(parse_mspe("X = 1/2*X^0 + 1/2;"), ParseError);
  }

  TEST_CASE("comments, bracketed names and implicit coefficients") {
    Msp f = parse_mspe("# header\n[p.X.q] = [p.X.q]*Y + 1/4; # trailing\nY = 1/3;\n");
    CHECK(f.variables() == std::vector<std::string>{"[p.X.q]", "Y"});
    CHECK(f.equation(0).monomials()[0].coefficient() == 1);
  }

  TEST_CASE("format and parse round-trip") {
    for (const char* name : {"backbutton3.mspe", "chain2.mspe", "chain3.mspe", "diamond.mspe", "cubic.mspe",
                             "unclean.mspe", "halfsquare.mspe"}) {
      Msp f = support::load(name);
      Msp g = parse_mspe(format_mspe(f));
      CHECK(g == f);
      CHECK(g.origin() == f.origin());
      CHECK(format_mspe(g) == format_mspe(f));
    }
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      Msp f = support::random_msp(seed, 1 + seed % 7, 4);
      CHECK(parse_mspe(format_mspe(f)) == f);
    }
  }

  TEST_CASE("clean removes unproductive variables") {
    Msp f = parse_mspe("X1 = 1/2*X2 + 1/2; X2 = X2*X1;");
    CleanResult c = clean(f);
    CHECK(c.system == parse_mspe("X1 = 1/2;"));
    CHECK(c.removed == std::vector<std::string>{"X2"});
    CHECK(c.index_map[0] == VarIndex{0});
    CHECK_FALSE(c.index_map[1].has_value());

    Msp g = support::load("backbutton3.mspe");
    CleanResult same = clean(g);
    CHECK(same.system == g);
    CHECK(same.removed.empty());

    CHECK_THROWS_AS(clean(parse_mspe("X = X*Y; Y = Y;")), AllVariablesUnproductive);
  }

  TEST_CASE("clean is idempotent and agrees with Kleene") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const std::size_t n = 1 + seed % 7;
      Msp f = support::random_msp(seed, n);
      oracle::Vec k = oracle::kleene(f, n);
      std::size_t productive = 0;
      for (const auto& v : k) productive += v > 0 ? 1 : 0;
      if (productive == 0) {
        CHECK_THROWS_AS(clean(f), AllVariablesUnproductive);
        continue;
      }
      CleanResult c = clean(f);
      CHECK(c.system.size() == productive);
      CHECK(c.system.is_clean());
      for (std::size_t i = 0; i < n; ++i) CHECK(c.index_map[i].has_value() == (k[i] > 0));
      CHECK(clean(c.system).system == c.system);
    }
  }

  TEST_CASE("quadratize splits left to right") {
    QuadratizeResult r = quadratize(parse_mspe("X = 1/2*X*X*X + 1/2;"));
    CHECK(r.auxiliaries == 1);
    REQUIRE(r.system.size() == 2);
    CHECK(r.system.is_quadratic());
    CHECK(r.var_map == std::vector<VarIndex>{0});
    const auto& aux = r.system.equation(1).monomials();
    REQUIRE(aux.size() == 1);
    CHECK(aux[0].coefficient() == 1);
    CHECK(aux[0].exponents() == Exponents{{0, 2}});

    Msp quad = support::load("chain2.mspe");
    QuadratizeResult same = quadratize(quad);
    CHECK(same.system == quad);
    CHECK(same.auxiliaries == 0);

    QuadratizeResult four = quadratize(parse_mspe("X = 1/4*X^4 + 3/4;"));
    CHECK(four.auxiliaries == 2);
  }

  TEST_CASE("quadratize and clean preserve the least fixed point") {
    Float::set_default_precision(53);
    for (const char* text : {"X = 1/2*X*X*X + 1/2;", "X = 1/4*X^4 + 3/4;",
                             "X = 1/3*X^3 + 1/3*X*Y + 1/3; Y = 1/2*X^2*Y^2 + 1/2;",
                             "X = 1/5*X*Y*Z + 1/5*X + 1/2; Y = 1/4*X^2 + 1/2; Z = 1/3*Z*Y^3 + 1/3;"}) {
      Msp f = parse_mspe(text);
      QuadratizeResult r = quadratize(f);
      oracle::Vec a = oracle::newton_reference(f, 60);
      oracle::Vec b = oracle::newton_reference(r.system, 60);
      for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(abs(a[i] - b[r.var_map[i]]) <= a[i] * oracle::Q(1, 1000000000));
      }
    }
    // Linear system: X = 146/315, Y = 4/15, W = X/9 by hand; Z is unproductive.
    Msp lin = parse_mspe("X = 1/2*X + 1/3*Y + 1/7; Y = 1/4*Y + 1/5; Z = Z; W = 1/3*W*Z + 1/9*X;");
    CleanResult c = clean(lin);
    CHECK(c.removed == std::vector<std::string>{"Z"});
    IterationTrace<Rational> t = newton_solve<Rational>(c.system, StopRule::max_iterations(1));
    CHECK(t.final_iterate == NumVec<Rational>{q("146/315"), q("4/15"), q("146/2835")});
  }

  TEST_CASE("pPDA parsing") {
    Ppda p = parse_ppda("rule p X -> 1/2 p X X; rule p X -> 1/2 p;");
    CHECK(p.states() == std::vector<std::string>{"p"});
    CHECK(p.symbols() == std::vector<std::string>{"X"});
    CHECK(p.rules().size() == 2);
    CHECK_THROWS_AS(parse_ppda("rule p X -> 0.5 p X X; rule p X -> 0.4 p;"), ProbabilitySumViolation);
    CHECK_THROWS_AS(parse_ppda("rule p X -> 1 q X Y Z;"), RhsTooLong);
    CHECK_THROWS_AS(parse_ppda("rule p X 1 p;"), ParseError);
    CHECK(parse_ppda(format_ppda(p)).rules().size() == 2);
  }

  TEST_CASE("termination system of the one-state doubling pPDA") {
    TerminationMspe t = termination_mspe(parse_ppda("rule p X -> 1/2 p X X; rule p X -> 1/2 p;"));
    CHECK(t.system == parse_mspe("[p.X.p] = 1/2*[p.X.p]^2 + 1/2;"));
    CHECK(t.triples == std::vector<Triple>{{"p", "X", "p"}});
    CHECK(t.system.is_strict());
    CHECK(t.system.is_quadratic());
  }

  TEST_CASE("termination system drops unproductive triples") {
    TerminationMspe t = termination_mspe(parse_ppda("rule p X -> 1 q;"));
    CHECK(t.system == parse_mspe("[p.X.q] = 1;"));
    CHECK(std::find(t.removed.begin(), t.removed.end(), Triple{"p", "X", "p"}) != t.removed.end());
    CHECK(t.system.origin() == Origin::termination);
  }

  TEST_CASE("termination system instantiates every rule shape") {
    // pX -> rYZ contributes sum_t [rYt][tZq]; pX -> rY contributes [rYq].
    Ppda p = parse_ppda(
        "rule p X -> 1/4 p X Y; rule p X -> 1/4 q Y; rule p X -> 1/2 q;"
        "rule p Y -> 1 p; rule q Y -> 1/2 p; rule q Y -> 1/2 q;");
    TerminationMspe t = termination_mspe(p);
    Msp expected = parse_mspe(
        "[p.X.p] = 1/4*[p.X.p]*[p.Y.p] + 1/4*[p.X.q]*[q.Y.p] + 1/4*[q.Y.p];"
        "[p.X.q] = 1/4*[p.X.q]*[q.Y.q] + 1/4*[q.Y.q] + 1/2;"
        "[p.Y.p] = 1;"
        "[q.Y.p] = 1/2;"
        "[q.Y.q] = 1/2;");
    // [p.Y.q] is 0 and the q.X triples have no rules, so they vanish.
    CHECK(t.system == expected);
  }

  TEST_CASE("termination systems keep sub-distributions and sum_q mu <= 1") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      GenerateOptions o;
      o.seed = seed;
      o.n_states = 1 + seed % 3;
      o.n_symbols = 1 + seed % 2;
      Ppda p = generate_ppda(o);
      TerminationMspe t = termination_mspe(p);
      const Msp& f = t.system;
      // x = 1/|Q| everywhere sums to at most 1 over q for each (r, Y), and so
      // must f(x).
      oracle::Vec uniform(f.size(), oracle::Q(1, static_cast<unsigned long>(p.states().size())));
      oracle::Vec fx = oracle::eval(f, uniform);
      std::map<std::pair<std::string, std::string>, oracle::Q> image;
      for (std::size_t i = 0; i < f.size(); ++i) image[{t.triples[i].state, t.triples[i].symbol}] += fx[i];
      for (const auto& [key, sum] : image) CHECK(sum <= 1);
      oracle::Vec mu = oracle::newton_reference(f, 80, 200);
      std::map<std::pair<std::string, std::string>, oracle::Q> sums;
      for (std::size_t i = 0; i < f.size(); ++i) sums[{t.triples[i].state, t.triples[i].symbol}] += mu[i];
      for (const auto& [key, sum] : sums) CHECK(sum <= 1);
    }
  }

  TEST_CASE("strictness") {
    CHECK(is_strict(parse_ppda("rule p X -> 1/2 p X X; rule p X -> 1/2 p;")));
    CHECK_FALSE(is_strict(parse_ppda("rule p X -> 1 p X X;")));
    CHECK_FALSE(is_strict(parse_ppda("rule p X -> 1 q; rule q X -> 1 q;")));
    GenerateOptions o;
    o.strict = true;
    o.n_states = 3;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      o.seed = seed;
      CHECK(is_strict(generate_ppda(o)));
    }
  }

  TEST_CASE("back-button processes") {
    BackButton b = parse_backbutton(support::read_fixture("backbutton3.bb"));
    Msp f = backbutton_mspe(b);
    CHECK(format_mspe(f) == support::read_fixture("expected/backbutton3.bb.mspe"));
    // Same equations as the worked example, up to variable names.
    CHECK(f.equations() == worked_example().equations());
    CHECK(f.is_strict());
    CHECK(is_strict(to_ppda(b)));
    CHECK(termination_mspe(to_ppda(b)).system == f);

    Msp one = backbutton_mspe(parse_backbutton("page A back 1;"));
    CHECK(one == parse_mspe("[p.A.p] = 1;"));

    // Symmetric pages: x = b + (1 - b) x^2, least root b / (1 - b) = 1/2.
    Msp two = backbutton_mspe(parse_backbutton("page 1 back 1/3; page 2 back 1/3; link 1 2 2/3; link 2 1 2/3;"));
    oracle::Vec mu = oracle::newton_reference(two, 80);
    const double expected = 0.5;
    CHECK(std::abs(mu[0].get_d() - expected) < 1e-12);
    CHECK(std::abs(mu[1].get_d() - expected) < 1e-12);
    CHECK(mu[0] == mu[1]);

    CHECK_THROWS_AS(parse_backbutton("page 1 back 0.5;"), ProbabilitySumViolation);
    CHECK_THROWS_AS(parse_backbutton("page 1 back 0.5; link 1 9 0.5;"), UndefinedVariable);
    CHECK_THROWS_AS(parse_backbutton("page 1 back 0; page 2 back 1; link 1 2 1;"), InvalidModel);
  }

  TEST_CASE("back-button systems stay above their constant terms") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      std::mt19937_64 rng(seed);
      const std::size_t pages = 1 + seed % 4;
      std::string text;
      for (std::size_t a = 0; a < pages; ++a) {
        const long w_back = 1 + static_cast<long>(rng() % 5);
        const long w_link = static_cast<long>(rng() % 5);
        const long total = w_back + w_link * static_cast<long>(pages);
        text += "page " + std::to_string(a) + " back " + std::to_string(w_back) + "/" + std::to_string(total) + ";\n";
        for (std::size_t b = 0; b < pages && w_link > 0; ++b) {
          text += "link " + std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(w_link) + "/" +
                  std::to_string(total) + ";\n";
        }
      }
      Msp f = backbutton_mspe(parse_backbutton(text));
      oracle::Vec c = oracle::eval(f, oracle::Vec(f.size(), 0));
      for (const auto& v : c) CHECK(v > 0);
      CHECK(support::leq(c, oracle::newton_reference(f, 30, 128)));
    }
  }

  TEST_CASE("generator is reproducible") {
    GenerateOptions o;
    o.seed = 42;
    o.n_states = 2;
    o.n_symbols = 3;
    CHECK(format_ppda(generate_ppda(o)) == format_ppda(generate_ppda(o)));
    GenerateOptions other = o;
    other.seed = 43;
    CHECK(format_ppda(generate_ppda(o)) != format_ppda(generate_ppda(other)));
    for (const auto& r : generate_ppda(o).rules()) {
      CHECK(r.push.size() <= 2);
      CHECK(r.probability > 0);
    }
    CHECK_THROWS_AS(generate_ppda(GenerateOptions{0, 1, 1, 1, false}), std::invalid_argument);
  }
}
