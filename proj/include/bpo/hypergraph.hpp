#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpo/common.hpp"

namespace bpo {

// Ordered edge chain of a nest point u: edges[i-1] holds chain position i,
// position 0 is the implicit singleton {u}. Node sets are non-decreasing
// under inclusion along the chain; parallel edges are ordered by ascending
// EdgeId.
struct EdgeChain {
  NodeId owner = -1;
  std::vector<EdgeId> edges;

  int length() const { return static_cast<int>(edges.size()); }
};

namespace detail {

// Immutable per-construction data shared by all copies of a hypergraph.
// Edge membership never grows, so the original pin lists stay valid for the
// whole lifetime; the mutable state (alive flags, cardinalities) lives in
// the Hypergraph itself.
struct HypergraphStorage {
  NodeId num_nodes = 0;
  EdgeId num_edges = 0;
  std::vector<std::size_t> edge_start;  // size m+1, pins sorted per edge
  std::vector<NodeId> edge_pins;
  std::vector<std::size_t> inc_start;  // size n+1, edge ids sorted per node
  std::vector<EdgeId> inc_pins;
  // Random 64-bit weight per node; nested-set differences are recognized by
  // their weight sums (collisions are re-verified against real membership).
  std::vector<std::uint64_t> node_weight;
  std::unordered_map<std::uint64_t, NodeId> weight_to_node;
};

}  // namespace detail

class Hypergraph {
 public:
  Hypergraph() : Hypergraph(0, {}) {}

  // Builds a hypergraph on nodes 0..num_nodes-1. Every edge must be a
  // non-empty list of distinct node ids; loops (singletons) and parallel
  // edges (equal node sets) are allowed.
  Hypergraph(NodeId num_nodes, std::vector<std::vector<NodeId>> edge_sets) {
    if (num_nodes < 0) throw std::invalid_argument("negative node count");
    auto storage = std::make_shared<detail::HypergraphStorage>();
    storage->num_nodes = num_nodes;
    storage->num_edges = static_cast<EdgeId>(edge_sets.size());

    std::size_t total_pins = 0;
    for (auto& nodes : edge_sets) {
      if (nodes.empty()) throw std::invalid_argument("empty edge");
      std::sort(nodes.begin(), nodes.end());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < 0 || nodes[i] >= num_nodes)
          throw std::invalid_argument("edge node out of range");
        if (i > 0 && nodes[i] == nodes[i - 1])
          throw std::invalid_argument("duplicate node within edge");
      }
      total_pins += nodes.size();
    }

    storage->node_weight.resize(num_nodes);
    storage->weight_to_node.reserve(static_cast<std::size_t>(num_nodes) * 2);
    for (NodeId v = 0; v < num_nodes; ++v) {
      std::uint64_t w = splitmix64(0x5bd1e995u ^ static_cast<std::uint64_t>(v));
      storage->node_weight[v] = w;
      storage->weight_to_node.emplace(w, v);
    }

    storage->edge_start.reserve(edge_sets.size() + 1);
    storage->edge_pins.reserve(total_pins);
    storage->edge_start.push_back(0);
    std::vector<std::size_t> inc_count(num_nodes + 1, 0);
    for (const auto& nodes : edge_sets) {
      for (NodeId v : nodes) {
        storage->edge_pins.push_back(v);
        ++inc_count[v + 1];
      }
      storage->edge_start.push_back(storage->edge_pins.size());
    }

    storage->inc_start.resize(num_nodes + 1);
    for (NodeId v = 0; v < num_nodes; ++v)
      inc_count[v + 1] += inc_count[v];
    storage->inc_start = inc_count;
    storage->inc_pins.resize(total_pins);
    std::vector<std::size_t> cursor(inc_count.begin(), inc_count.end() - 1);
    for (EdgeId e = 0; e < storage->num_edges; ++e) {
      for (std::size_t i = storage->edge_start[e];
           i < storage->edge_start[e + 1]; ++i) {
        storage->inc_pins[cursor[storage->edge_pins[i]]++] = e;
      }
    }

    storage_ = std::move(storage);
    node_alive_.assign(storage_->num_nodes, 1);
    edge_alive_.assign(storage_->num_edges, 1);
    alive_nodes_ = storage_->num_nodes;
    alive_edges_ = storage_->num_edges;
    edge_card_.resize(storage_->num_edges);
    edge_wsum_.resize(storage_->num_edges);
    for (EdgeId e = 0; e < storage_->num_edges; ++e) {
      auto pins = original_edge_nodes(e);
      edge_card_[e] = static_cast<std::int32_t>(pins.size());
      std::uint64_t w = 0;
      for (NodeId v : pins) w += storage_->node_weight[v];
      edge_wsum_[e] = w;
    }
    node_degree_.assign(storage_->num_nodes, 0);
    for (NodeId v = 0; v < storage_->num_nodes; ++v)
      node_degree_[v] = static_cast<std::int32_t>(original_incident_edges(v).size());
  }

  NodeId original_node_count() const { return storage_->num_nodes; }
  EdgeId original_edge_count() const { return storage_->num_edges; }
  NodeId num_nodes() const { return alive_nodes_; }
  EdgeId num_edges() const { return alive_edges_; }
  bool empty() const { return alive_nodes_ == 0; }

  bool node_alive(NodeId u) const {
    return u >= 0 && u < storage_->num_nodes && node_alive_[u];
  }
  bool edge_alive(EdgeId e) const {
    return e >= 0 && e < storage_->num_edges && edge_alive_[e];
  }

  // Number of alive edges containing u.
  std::int32_t degree(NodeId u) const {
    require_node(u);
    return node_degree_[u];
  }

  // Number of alive members of e.
  std::int32_t cardinality(EdgeId e) const {
    require_edge(e);
    return edge_card_[e];
  }

  // Current members of e, ascending.
  std::vector<NodeId> edge_nodes(EdgeId e) const {
    require_edge(e);
    std::vector<NodeId> out;
    out.reserve(edge_card_[e]);
    for (NodeId v : original_edge_nodes(e))
      if (node_alive_[v]) out.push_back(v);
    return out;
  }

  // Alive edges containing u, ascending by id.
  std::vector<EdgeId> incident_edges(NodeId u) const {
    require_node(u);
    std::vector<EdgeId> out;
    for (EdgeId e : original_incident_edges(u))
      if (edge_alive_[e]) out.push_back(e);
    return out;
  }

  bool edge_contains(EdgeId e, NodeId v) const {
    require_edge(e);
    if (!node_alive(v)) return false;
    auto pins = original_edge_nodes(e);
    return std::binary_search(pins.begin(), pins.end(), v);
  }

  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out;
    out.reserve(alive_nodes_);
    for (NodeId v = 0; v < storage_->num_nodes; ++v)
      if (node_alive_[v]) out.push_back(v);
    return out;
  }

  std::vector<EdgeId> edges() const {
    std::vector<EdgeId> out;
    out.reserve(alive_edges_);
    for (EdgeId e = 0; e < storage_->num_edges; ++e)
      if (edge_alive_[e]) out.push_back(e);
    return out;
  }

  // Removes u: every edge equal to {u} is deleted (its id retired), every
  // other incident edge has u stripped while keeping its id.
  void remove_node(NodeId u) {
    require_node(u);
    for (EdgeId e : original_incident_edges(u)) {
      if (!edge_alive_[e]) continue;
      if (edge_card_[e] == 1) {
        edge_alive_[e] = 0;
        --alive_edges_;
      } else {
        --edge_card_[e];
        edge_wsum_[e] -= storage_->node_weight[u];
      }
    }
    node_alive_[u] = 0;
    node_degree_[u] = 0;
    --alive_nodes_;
  }

  // Deletes an edge outright, leaving its members in place.
  void remove_edge(EdgeId e) {
    require_edge(e);
    for (NodeId v : original_edge_nodes(e))
      if (node_alive_[v]) --node_degree_[v];
    edge_alive_[e] = 0;
    --alive_edges_;
  }

  // True iff the alive edges containing u are totally ordered by inclusion
  // (vacuously true for degree <= 1).
  bool is_nest_point(NodeId u) const {
    require_node(u);
    if (node_degree_[u] <= 1) return true;
    std::vector<EdgeId> chain = incident_sorted_by_card(u);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (!edge_subset_of(chain[i], chain[i + 1])) return false;
    return true;
  }

  // Lowest-id nest point together with its inclusion-sorted chain, or
  // absent when no nest point exists.
  std::optional<std::pair<NodeId, EdgeChain>> find_nest_point() const {
    for (NodeId u = 0; u < storage_->num_nodes; ++u) {
      if (!node_alive_[u]) continue;
      if (is_nest_point(u)) return std::make_pair(u, chain_of(u));
    }
    return std::nullopt;
  }

  // Chain of a known nest point; sorted by (cardinality, id), which equals
  // inclusion order when the incident edges are totally ordered.
  EdgeChain chain_of(NodeId u) const {
    require_node(u);
    EdgeChain chain;
    chain.owner = u;
    chain.edges = incident_sorted_by_card(u);
    return chain;
  }

  // True iff every current member of e is a current member of f.
  bool edge_subset_of(EdgeId e, EdgeId f) const {
    auto e_pins = original_edge_nodes(e);
    auto f_pins = original_edge_nodes(f);
    for (NodeId v : e_pins) {
      if (!node_alive_[v]) continue;
      if (!std::binary_search(f_pins.begin(), f_pins.end(), v)) return false;
    }
    return true;
  }

  // Full recomputation of the derived counters; used by tests.
  bool check_invariants() const {
    NodeId nn = 0;
    for (NodeId v = 0; v < storage_->num_nodes; ++v)
      if (node_alive_[v]) ++nn;
    if (nn != alive_nodes_) return false;
    EdgeId ne = 0;
    for (EdgeId e = 0; e < storage_->num_edges; ++e) {
      if (!edge_alive_[e]) continue;
      ++ne;
      std::int32_t card = 0;
      std::uint64_t w = 0;
      for (NodeId v : original_edge_nodes(e)) {
        if (!node_alive_[v]) continue;
        ++card;
        w += storage_->node_weight[v];
      }
      if (card == 0 || card != edge_card_[e] || w != edge_wsum_[e])
        return false;
    }
    if (ne != alive_edges_) return false;
    for (NodeId v = 0; v < storage_->num_nodes; ++v) {
      std::int32_t deg = 0;
      for (EdgeId e : original_incident_edges(v))
        if (edge_alive_[e]) ++deg;
      if (node_alive_[v] && deg != node_degree_[v]) return false;
    }
    return true;
  }

  // --- low-level views used by the solver engine and by evaluate ---

  std::span<const NodeId> original_edge_nodes(EdgeId e) const {
    return {storage_->edge_pins.data() + storage_->edge_start[e],
            storage_->edge_pins.data() + storage_->edge_start[e + 1]};
  }

  std::span<const EdgeId> original_incident_edges(NodeId u) const {
    return {storage_->inc_pins.data() + storage_->inc_start[u],
            storage_->inc_pins.data() + storage_->inc_start[u + 1]};
  }

  std::uint64_t edge_weight_sum(EdgeId e) const { return edge_wsum_[e]; }
  std::uint64_t node_weight(NodeId v) const { return storage_->node_weight[v]; }

  // Looks up the node whose weight equals w, if any.
  std::optional<NodeId> node_from_weight(std::uint64_t w) const {
    auto it = storage_->weight_to_node.find(w);
    if (it == storage_->weight_to_node.end()) return std::nullopt;
    return it->second;
  }

  std::vector<EdgeId> incident_sorted_by_card(NodeId u) const {
    std::vector<EdgeId> chain = incident_edges(u);
    std::sort(chain.begin(), chain.end(), [&](EdgeId a, EdgeId b) {
      if (edge_card_[a] != edge_card_[b]) return edge_card_[a] < edge_card_[b];
      return a < b;
    });
    return chain;
  }

 private:
  void require_node(NodeId u) const {
    if (!node_alive(u)) throw std::out_of_range("unknown or removed node");
  }
  void require_edge(EdgeId e) const {
    if (!edge_alive(e)) throw std::out_of_range("unknown or removed edge");
  }

  std::shared_ptr<const detail::HypergraphStorage> storage_;
  std::vector<std::uint8_t> node_alive_;
  std::vector<std::uint8_t> edge_alive_;
  std::vector<std::int32_t> edge_card_;
  std::vector<std::int32_t> node_degree_;
  std::vector<std::uint64_t> edge_wsum_;
  NodeId alive_nodes_ = 0;
  EdgeId alive_edges_ = 0;
};

}  // namespace bpo
