#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/instance.hpp"
#include "bpo/solver.hpp"

namespace bpo {

// Reference maximizer: enumerates every assignment of the current nodes and
// returns the exact maximum. No pruning; the point is obvious correctness.
// Ties break toward the lexicographically smallest assignment (ascending
// node id, 0 before 1). Gray-code order keeps each step to one bit flip and
// an incremental objective update.
inline Solution brute_force_max(const Instance& inst, int node_limit = 20) {
  const Hypergraph& g = inst.graph();
  std::vector<NodeId> nodes = g.nodes();
  const int n = static_cast<int>(nodes.size());
  if (n > node_limit || n > 62)
    throw TooLargeError("brute_force_max: " + std::to_string(n) +
                        " nodes exceed the limit of " +
                        std::to_string(node_limit));

  PartialAssignment x(g.original_node_count(), -1);
  for (NodeId v : nodes) x[v] = 0;

  // zeros[e]: current members of e assigned 0; e contributes iff zero.
  std::vector<std::int32_t> zeros(g.original_edge_count(), 0);
  for (EdgeId e = 0; e < g.original_edge_count(); ++e)
    if (g.edge_alive(e)) zeros[e] = g.cardinality(e);

  auto lex_less = [&](const PartialAssignment& a, const PartialAssignment& b) {
    for (NodeId v : nodes) {
      if (a[v] != b[v]) return a[v] < b[v];
    }
    return false;
  };

  Profit obj = 0;
  Profit best_obj = 0;
  PartialAssignment best = x;

  const std::uint64_t total = 1ull << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    NodeId v = nodes[std::countr_zero(step)];
    if (x[v] == 0) {
      x[v] = 1;
      obj = checked_add(obj, inst.node_profit(v));
      for (EdgeId e : g.original_incident_edges(v)) {
        if (!g.edge_alive(e)) continue;
        if (--zeros[e] == 0) obj = checked_add(obj, inst.edge_profit(e));
      }
    } else {
      x[v] = 0;
      obj = checked_sub(obj, inst.node_profit(v));
      for (EdgeId e : g.original_incident_edges(v)) {
        if (!g.edge_alive(e)) continue;
        if (zeros[e]++ == 0) obj = checked_sub(obj, inst.edge_profit(e));
      }
    }
    if (obj > best_obj || (obj == best_obj && lex_less(x, best))) {
      best_obj = obj;
      best = x;
    }
  }
  return Solution{std::move(best), best_obj};
}

}  // namespace bpo
