#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/hypergraph.hpp"
#include "bpo/solver.hpp"

namespace bpo {

// Witness of the beta-acyclicity test: the elimination order empties the
// hypergraph exactly when it is beta-acyclic; otherwise stuck_nodes holds
// the nodes of the nest-point-free remainder.
struct BetaCertificate {
  bool acyclic = false;
  std::vector<NodeId> elimination_order;
  std::vector<NodeId> stuck_nodes;
};

// Repeatedly removes the lowest-id nest point. Shares the elimination
// engine with the solver, so recognition and solving exercise one code
// path.
inline BetaCertificate is_beta_acyclic(const Hypergraph& input) {
  Hypergraph g = input;
  SolveStats stats;
  detail::EliminationEngine engine(g, stats);
  BetaCertificate cert;
  while (auto found = engine.next()) {
    cert.elimination_order.push_back(found->first);
    g.remove_node(found->first);
  }
  cert.acyclic = g.num_nodes() == 0;
  if (!cert.acyclic) cert.stuck_nodes = g.nodes();
  return cert;
}

struct AlphaStep {
  enum class Kind : std::uint8_t { RemoveNode, RemoveEdge };
  Kind kind = Kind::RemoveNode;
  std::int32_t id = -1;

  bool operator==(const AlphaStep&) const = default;
};

struct AlphaResidual {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

struct AlphaCertificate {
  bool acyclic = false;
  std::vector<AlphaStep> reduction_log;
  AlphaResidual residual;  // the stuck hypergraph, when not acyclic
};

namespace detail {

// An edge may be deleted when another edge contains it; among parallel
// duplicates the higher id goes.
inline bool gyo_edge_removable(const Hypergraph& g, EdgeId e) {
  std::optional<NodeId> witness;
  for (NodeId v : g.original_edge_nodes(e)) {
    if (g.node_alive(v)) {
      witness = v;
      break;
    }
  }
  if (!witness) return false;
  for (EdgeId f : g.original_incident_edges(*witness)) {
    if (f == e || !g.edge_alive(f)) continue;
    if (g.cardinality(f) < g.cardinality(e)) continue;
    if (g.cardinality(f) == g.cardinality(e) && f > e) continue;
    if (g.edge_subset_of(e, f)) return true;
  }
  return false;
}

}  // namespace detail

// GYO reduction: delete any node in at most one edge, delete any edge
// contained in another, until the hypergraph is empty (alpha-acyclic) or no
// step applies. Deterministic policy: lowest applicable node first, else
// lowest applicable edge.
inline AlphaCertificate is_alpha_acyclic(const Hypergraph& input) {
  Hypergraph g = input;
  AlphaCertificate cert;
  for (;;) {
    std::optional<NodeId> node;
    for (NodeId v = 0; v < g.original_node_count(); ++v) {
      if (g.node_alive(v) && g.degree(v) <= 1) {
        node = v;
        break;
      }
    }
    if (node) {
      cert.reduction_log.push_back({AlphaStep::Kind::RemoveNode, *node});
      g.remove_node(*node);
      continue;
    }
    std::optional<EdgeId> edge;
    for (EdgeId e = 0; e < g.original_edge_count(); ++e) {
      if (g.edge_alive(e) && detail::gyo_edge_removable(g, e)) {
        edge = e;
        break;
      }
    }
    if (edge) {
      cert.reduction_log.push_back({AlphaStep::Kind::RemoveEdge, *edge});
      g.remove_edge(*edge);
      continue;
    }
    break;
  }
  cert.acyclic = g.num_nodes() == 0 && g.num_edges() == 0;
  if (!cert.acyclic) cert.residual = AlphaResidual{g.nodes(), g.edges()};
  return cert;
}

}  // namespace bpo
