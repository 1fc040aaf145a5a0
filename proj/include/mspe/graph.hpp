#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mspe/msp.hpp"

namespace mspe {

/// Adjacency lists: successors[i] holds every k such that f_i mentions X_k
/// (sorted, no duplicates).
std::vector<std::vector<VarIndex>> dependence_graph(const Msp& f);

/// Condensation of the dependence graph.
///
/// Depth is measured from the top: an SCC that no other SCC depends on has
/// depth 0, and if S depends on T then depth(T) >= depth(S) + 1. Bottom SCCs
/// (the ones DNM solves first) therefore have the largest depth.
struct SccDag {
  /// Variables of each SCC, sorted. SCCs are ordered by smallest variable.
  std::vector<std::vector<VarIndex>> sccs;
  std::vector<std::size_t> scc_of;
  /// edges[s] = SCCs that s depends on (excluding s), sorted.
  std::vector<std::vector<std::size_t>> edges;
  std::vector<std::size_t> depth;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return sccs.size(); }
  /// SCCs with depth t, in SCC order.
  std::vector<std::size_t> comp(std::size_t t) const;
};

/// Tarjan SCCs plus longest-path depths. Cached on f.
std::shared_ptr<const SccDag> scc_decompose(const Msp& f);

}  // namespace mspe
