#include "mspe/graph.hpp"

#include <algorithm>
#include <set>

namespace mspe {

std::vector<std::vector<VarIndex>> dependence_graph(const Msp& f) {
  std::vector<std::vector<VarIndex>> successors(f.size());
  for (VarIndex i = 0; i < f.size(); ++i) {
    std::set<VarIndex> targets;
    for (const auto& m : f.equation(i).monomials()) {
      for (const auto& [var, power] : m.exponents()) targets.insert(var);
    }
    successors[i].assign(targets.begin(), targets.end());
  }
  return successors;
}

std::vector<std::size_t> SccDag::comp(std::size_t t) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < sccs.size(); ++s) {
    if (depth[s] == t) out.push_back(s);
  }
  return out;
}

namespace {

constexpr std::size_t unvisited = static_cast<std::size_t>(-1);

// Iterative Tarjan. Components come out in reverse topological order
// (a component is closed only after everything it reaches).
std::vector<std::vector<VarIndex>> tarjan(const std::vector<std::vector<VarIndex>>& graph) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> index(n, unvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VarIndex> stack;
  std::vector<std::vector<VarIndex>> result;
  std::size_t counter = 0;

  struct Frame {
    VarIndex v;
    std::size_t next_edge;
  };
  std::vector<Frame> calls;

  for (VarIndex root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    calls.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!calls.empty()) {
      Frame& frame = calls.back();
      const VarIndex v = frame.v;
      if (frame.next_edge < graph[v].size()) {
        const VarIndex w = graph[v][frame.next_edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<VarIndex> component;
        VarIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
      }
      calls.pop_back();
      if (!calls.empty()) {
        const VarIndex parent = calls.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return result;
}

}  // namespace

std::shared_ptr<const SccDag> scc_decompose(const Msp& f) {
  if (auto cached = f.cached_scc_dag()) return cached;

  const auto graph = dependence_graph(f);
  std::vector<std::vector<VarIndex>> reverse_topo = tarjan(graph);

  // Renumber by smallest variable; remember the topological position.
  std::vector<std::size_t> order(reverse_topo.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return reverse_topo[a].front() < reverse_topo[b].front(); });

  auto dag = std::make_shared<SccDag>();
  dag->scc_of.assign(f.size(), 0);
  std::vector<std::size_t> new_id(order.size());
  for (std::size_t s = 0; s < order.size(); ++s) {
    new_id[order[s]] = s;
    dag->sccs.push_back(reverse_topo[order[s]]);
    for (VarIndex v : dag->sccs.back()) dag->scc_of[v] = s;
  }

  dag->edges.assign(dag->sccs.size(), {});
  for (std::size_t s = 0; s < dag->sccs.size(); ++s) {
    std::set<std::size_t> targets;
    for (VarIndex v : dag->sccs[s]) {
      for (VarIndex w : graph[v]) {
        if (dag->scc_of[w] != s) targets.insert(dag->scc_of[w]);
      }
    }
    dag->edges[s].assign(targets.begin(), targets.end());
  }

  // Longest path from the top, walking from sources (end of Tarjan's list) down.
  dag->depth.assign(dag->sccs.size(), 0);
  for (std::size_t k = reverse_topo.size(); k-- > 0;) {
    const std::size_t s = new_id[k];
    for (std::size_t t : dag->edges[s]) dag->depth[t] = std::max(dag->depth[t], dag->depth[s] + 1);
  }

  for (std::size_t d : dag->depth) dag->height = std::max(dag->height, d);
  std::vector<std::size_t> per_level(dag->height + 1, 0);
  for (std::size_t d : dag->depth) ++per_level[d];
  for (std::size_t c : per_level) dag->width = std::max(dag->width, c);

  f.cache_scc_dag(dag);
  return dag;
}

}  // namespace mspe
