#include <doctest.h>

#include <functional>
#include <map>
#include <set>

#include "mspe/graph.hpp"
#include "support.hpp"

using namespace mspe;

namespace {

using BoolMat = std::vector<std::vector<bool>>;

BoolMat multiply(const BoolMat& a, const BoolMat& b) {
  const std::size_t n = a.size();
  BoolMat c(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] = c[i][j] || b[k][j];
    }
  }
  return c;
}

// Reflexive-transitive closure as (Id + A)^n, read straight off the monomials.
BoolMat closure(const Msp& f) {
  const std::size_t n = f.size();
  BoolMat step(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    step[i][i] = true;
    for (const auto& m : f.equation(i).monomials()) {
      for (const auto& [v, p] : m.exponents()) step[i][v] = true;
    }
  }
  BoolMat power = step;
  for (std::size_t k = 1; k < n; ++k) power = multiply(power, step);
  return power;
}

// Longest path from any top SCC down to `s`, by exhaustive search.
std::size_t brute_depth(const SccDag& dag, std::size_t s) {
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t at, std::size_t len) {
    if (at == s) best = std::max(best, len);
    for (std::size_t t : dag.edges[at]) walk(t, len + 1);
  };
  for (std::size_t top = 0; top < dag.size(); ++top) walk(top, 0);
  return best;
}

void check_invariants(const Msp& f, const SccDag& dag) {
  const std::size_t n = f.size();
  BoolMat reach = closure(f);
  std::vector<std::size_t> seen(n, 0);
  for (std::size_t s = 0; s < dag.size(); ++s) {
    for (VarIndex v : dag.sccs[s]) {
      ++seen[v];
      CHECK(dag.scc_of[v] == s);
    }
    if (s > 0) CHECK(dag.sccs[s - 1].front() < dag.sccs[s].front());
  }
  for (std::size_t v = 0; v < n; ++v) CHECK(seen[v] == 1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      CHECK((dag.scc_of[a] == dag.scc_of[b]) == (reach[a][b] && reach[b][a]));
    }
  }
  std::vector<bool> has_parent(dag.size(), false);
  for (std::size_t s = 0; s < dag.size(); ++s) {
    for (std::size_t t : dag.edges[s]) {
      CHECK(t != s);
      CHECK(dag.depth[t] >= dag.depth[s] + 1);
      has_parent[t] = true;
    }
  }
  std::size_t height = 0;
  std::map<std::size_t, std::size_t> per_depth;
  for (std::size_t s = 0; s < dag.size(); ++s) {
    CHECK((dag.depth[s] == 0) == !has_parent[s]);
    CHECK(dag.depth[s] == brute_depth(dag, s));
    height = std::max(height, dag.depth[s]);
    ++per_depth[dag.depth[s]];
  }
  std::size_t width = 0;
  for (const auto& [t, count] : per_depth) width = std::max(width, count);
  CHECK(dag.height == height);
  CHECK(dag.width == width);
  CHECK(dag.size() <= (dag.height + 1) * dag.width);
  CHECK(f.is_strongly_connected() == (dag.size() == 1));
  for (std::size_t t = 0; t <= dag.height; ++t) CHECK(dag.comp(t).size() == per_depth[t]);
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("self-loop") {
    Msp f = support::load("halfsquare.mspe");
    CHECK(dependence_graph(f) == std::vector<std::vector<VarIndex>>{{0}});
    auto dag = scc_decompose(f);
    CHECK(dag->size() == 1);
    CHECK(dag->height == 0);
    CHECK(dag->width == 1);
  }

  TEST_CASE("worked example is one SCC") {
    Msp f = support::load("backbutton3.mspe");
    CHECK(dependence_graph(f) == std::vector<std::vector<VarIndex>>{{0, 1}, {0, 1, 2}, {0, 2}});
    auto dag = scc_decompose(f);
    CHECK(dag->size() == 1);
    CHECK(dag->height == 0);
    CHECK(dag->width == 1);
    CHECK(f.is_strongly_connected());
  }

  TEST_CASE("single edge") {
    Msp f = parse_mspe("X1 = X2 + 1/3; X2 = 1/2;");
    CHECK(dependence_graph(f) == std::vector<std::vector<VarIndex>>{{1}, {}});
    auto dag = scc_decompose(f);
    CHECK(dag->size() == 2);
    CHECK(dag->edges[0] == std::vector<std::size_t>{1});
    CHECK(dag->depth == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("chain of three") {
    auto dag = scc_decompose(support::load("chain3.mspe"));
    CHECK(dag->depth == std::vector<std::size_t>{0, 1, 2});
    CHECK(dag->height == 2);
    CHECK(dag->width == 1);
  }

  TEST_CASE("diamond") {
    Msp f = support::load("diamond.mspe");
    auto dag = scc_decompose(f);
    CHECK(dag->depth == std::vector<std::size_t>{0, 1, 1, 2});
    CHECK(dag->height == 2);
    CHECK(dag->width == 2);
    CHECK(dag->comp(1) == std::vector<std::size_t>{1, 2});
    check_invariants(f, *dag);
  }

  TEST_CASE("longest path, not shortest") {
    // X1 reaches X4 directly and through X2 -> X3.
    Msp f = parse_mspe("X1 = 1/4*X2 + 1/4*X4 + 1/4; X2 = 1/2*X3 + 1/4; X3 = 1/2*X4 + 1/4; X4 = 1/2;");
    auto dag = scc_decompose(f);
    CHECK(dag->depth == std::vector<std::size_t>{0, 1, 2, 3});
    check_invariants(f, *dag);
  }

  TEST_CASE("layered fixtures have the advertised shape") {
    for (std::size_t h = 0; h <= 3; ++h) {
      for (std::size_t w = 1; w <= 3; ++w) {
        Msp f = support::load("dnm/dag_h" + std::to_string(h) + "_w" + std::to_string(w) + ".mspe");
        auto dag = scc_decompose(f);
        CHECK(dag->height == h);
        CHECK(dag->width == w);
        CHECK(dag->size() == (h + 1) * w);
        check_invariants(f, *dag);
      }
    }
  }

  TEST_CASE("random systems agree with the closure oracle") {
    for (std::uint64_t seed = 1; seed <= 150; ++seed) {
      const std::size_t n = 1 + seed % 7;
      Msp f = support::random_msp(seed, n, 1 + seed % 3);
      check_invariants(f, *scc_decompose(f));
    }
  }

  TEST_CASE("decomposition is cached") {
    Msp f = support::load("diamond.mspe");
    CHECK(scc_decompose(f).get() == scc_decompose(f).get());
    Msp copy = f;
    CHECK(scc_decompose(copy)->depth == scc_decompose(f)->depth);
  }
}
