#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/hypergraph.hpp"

namespace bpo {

// A binary polynomial optimization instance: a hypergraph plus one exact
// integer profit per node and per edge. The objective of an assignment
// x in {0,1}^V is  sum_v p_v x_v + sum_e p_e prod_{v in e} x_v.
class Instance {
 public:
  Instance() = default;

  Instance(Hypergraph graph, std::vector<Profit> node_profits,
           std::vector<Profit> edge_profits)
      : graph_(std::move(graph)),
        node_profit_(std::move(node_profits)),
        edge_profit_(std::move(edge_profits)) {
    if (node_profit_.size() !=
        static_cast<std::size_t>(graph_.original_node_count()))
      throw std::invalid_argument("node profit count mismatch");
    if (edge_profit_.size() !=
        static_cast<std::size_t>(graph_.original_edge_count()))
      throw std::invalid_argument("edge profit count mismatch");
  }

  const Hypergraph& graph() const { return graph_; }
  Hypergraph& graph() { return graph_; }

  Profit node_profit(NodeId u) const {
    if (!graph_.node_alive(u)) throw std::out_of_range("unknown or removed node");
    return node_profit_[u];
  }
  Profit edge_profit(EdgeId e) const {
    if (!graph_.edge_alive(e)) throw std::out_of_range("unknown or removed edge");
    return edge_profit_[e];
  }

  void set_edge_profit(EdgeId e, Profit p) {
    if (!graph_.edge_alive(e)) throw std::out_of_range("unknown or removed edge");
    edge_profit_[e] = p;
  }

  // Removes u from the hypergraph. Profits of surviving edges are untouched;
  // rewriting them is the elimination step's job.
  void remove_node(NodeId u) { graph_.remove_node(u); }

  NodeId original_node_count() const { return graph_.original_node_count(); }
  EdgeId original_edge_count() const { return graph_.original_edge_count(); }

 private:
  Hypergraph graph_;
  std::vector<Profit> node_profit_;
  std::vector<Profit> edge_profit_;
};

// Exact objective value of x on the current nodes and edges. x must assign
// 0 or 1 to every current node (entries for removed nodes are ignored).
inline Profit evaluate(const Instance& inst, const PartialAssignment& x) {
  const Hypergraph& g = inst.graph();
  if (x.size() != static_cast<std::size_t>(g.original_node_count()))
    throw std::invalid_argument("assignment size mismatch");
  Profit total = 0;
  for (NodeId v = 0; v < g.original_node_count(); ++v) {
    if (!g.node_alive(v)) continue;
    if (x[v] != 0 && x[v] != 1)
      throw std::invalid_argument("assignment must be 0/1 on current nodes");
    if (x[v] == 1) total = checked_add(total, inst.node_profit(v));
  }
  for (EdgeId e = 0; e < g.original_edge_count(); ++e) {
    if (!g.edge_alive(e)) continue;
    bool active = true;
    for (NodeId v : g.original_edge_nodes(e)) {
      if (g.node_alive(v) && x[v] != 1) {
        active = false;
        break;
      }
    }
    if (active) total = checked_add(total, inst.edge_profit(e));
  }
  return total;
}

}  // namespace bpo
