#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mspe/generate.hpp"
#include "mspe/parser.hpp"
#include "mspe/ppda.hpp"
#include "oracle.hpp"

namespace support {

inline std::string fixture_path(const std::string& name) { return std::string(MSPE_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline mspe::Msp load(const std::string& name) { return mspe::parse_mspe(read_fixture(name)); }

inline mspe::Rational q(const std::string& text) { return mspe::parse_rational(text); }

inline oracle::Vec vec(std::initializer_list<const char*> values) {
  oracle::Vec out;
  for (const char* v : values) out.emplace_back(v);
  return out;
}

inline bool leq(const oracle::Vec& a, const oracle::Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

// Random system with n variables, up to `terms` monomials of degree <= 2
// per equation and small positive coefficients. Not necessarily clean.
inline mspe::Msp random_msp(std::uint64_t seed, std::size_t n, std::size_t terms = 3) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t b) { return static_cast<std::size_t>(rng() % b); };
  std::vector<std::string> names;
  std::vector<mspe::Polynomial> eqs;
  for (std::size_t i = 0; i < n; ++i) names.push_back("X" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<mspe::Rational, mspe::Exponents>> ts;
    const std::size_t count = 1 + below(terms);
    for (std::size_t t = 0; t < count; ++t) {
      mspe::Exponents e;
      const std::size_t degree = below(3);
      for (std::size_t d = 0; d < degree; ++d) e.push_back({below(n), 1});
      mspe::Rational c(mspe::Integer(static_cast<long>(1 + below(9))), mspe::Integer(static_cast<long>(4 * (1 + below(4)))));
      c.canonicalize();
      ts.push_back({c, mspe::canonical_exponents(e)});
    }
    eqs.emplace_back(ts);
  }
  return mspe::Msp(names, eqs);
}

// Strongly connected termination systems with at most max_n variables,
// drawn from generated pPDAs in seed order.
inline std::vector<mspe::Msp> sc_termination_systems(std::size_t count, std::size_t max_n, std::uint64_t seed = 1) {
  std::vector<mspe::Msp> out;
  for (; out.size() < count && seed < 100000; ++seed) {
    mspe::GenerateOptions o;
    o.n_states = 1 + seed % 2;
    o.n_symbols = 1 + (seed / 2) % 3;
    o.seed = seed;
    try {
      mspe::Msp f = mspe::termination_mspe(mspe::generate_ppda(o)).system;
      if (f.size() <= max_n && f.is_strongly_connected()) out.push_back(std::move(f));
    } catch (const mspe::AllVariablesUnproductive&) {
    }
  }
  return out;
}

}  // namespace support
