#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/instance.hpp"
#include "bpo/solver.hpp"

namespace bpo {

// mt19937_64 plus rejection-based bounded sampling. Both are fully
// specified, so identical seeds give identical instances on every platform;
// the exact procedures are documented in the README.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    const std::uint64_t reject = (0 - n) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
      r = next();
    } while (r < reject);
    return r % n;
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) -
                               static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());  // full range
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) +
                                     below(span));
  }

 private:
  std::mt19937_64 gen_;
};

// Seeded parameters of the random hypergraph distribution: every edge draws
// a cardinality c from {2..n} with probability proportional to 2^{1-c},
// then c distinct nodes uniformly; edges equal as sets to an existing edge
// are resampled. Profits are uniform integers in [profit_min, profit_max].
struct RandomModel {
  NodeId num_nodes = 2;
  EdgeId num_edges = 0;
  std::uint64_t seed = 0;
  Profit profit_min = -10;
  Profit profit_max = 10;
};

namespace detail {

// P(c) proportional to 2^{1-c}: the count of trailing zeros of a uniform
// word is geometric; draws above n are rejected, which renormalizes the
// law over {2..n}.
inline int sample_cardinality(Rng& rng, NodeId n) {
  for (;;) {
    std::uint64_t r = rng.next();
    if (r == 0) continue;
    int c = 2 + std::countr_zero(r);
    if (c <= n) return c;
  }
}

}  // namespace detail

inline Instance generate(const RandomModel& model) {
  const NodeId n = model.num_nodes;
  const EdgeId m = model.num_edges;
  if (n < 2) throw std::invalid_argument("need at least 2 nodes");
  if (m < 0) throw std::invalid_argument("negative edge count");
  if (model.profit_min > model.profit_max)
    throw std::invalid_argument("empty profit range");
  if (n < 63) {
    std::uint64_t distinct = (1ull << n) - static_cast<std::uint64_t>(n) - 1;
    if (static_cast<std::uint64_t>(m) > distinct)
      throw std::invalid_argument("more edges than distinct node sets");
  }

  Rng rng(model.seed);
  std::set<std::vector<NodeId>> seen;
  std::vector<std::vector<NodeId>> edges;
  edges.reserve(m);
  std::vector<NodeId> perm(n);
  while (edges.size() < static_cast<std::size_t>(m)) {
    int c = detail::sample_cardinality(rng, n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < c; ++i) {
      std::uint64_t j = i + rng.below(n - i);
      std::swap(perm[i], perm[j]);
    }
    std::vector<NodeId> nodes(perm.begin(), perm.begin() + c);
    std::sort(nodes.begin(), nodes.end());
    if (!seen.insert(nodes).second) continue;  // parallel edge: resample
    edges.push_back(std::move(nodes));
  }

  std::vector<Profit> node_profits(n);
  for (NodeId v = 0; v < n; ++v)
    node_profits[v] = rng.range(model.profit_min, model.profit_max);
  std::vector<Profit> edge_profits(m);
  for (EdgeId e = 0; e < m; ++e)
    edge_profits[e] = rng.range(model.profit_min, model.profit_max);

  return Instance(Hypergraph(n, std::move(edges)), std::move(node_profits),
                  std::move(edge_profits));
}

// Simple graph with positive integer weights, the Max-Cut input.
struct WeightedGraph {
  struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    Profit w = 1;
  };
  NodeId num_nodes = 0;
  std::vector<Edge> edges;
};

inline void validate(const WeightedGraph& graph) {
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : graph.edges) {
    if (e.u < 0 || e.u >= graph.num_nodes || e.v < 0 || e.v >= graph.num_nodes)
      throw std::invalid_argument("graph edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("graph loops not allowed");
    if (e.w < 1) throw std::invalid_argument("graph weights must be >= 1");
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      throw std::invalid_argument("parallel graph edge");
  }
}

// Max-Cut as binary polynomial optimization: one pair edge {u,v} with
// profit -2 w_uv per graph edge, one edge over all nodes with profit 0, and
// node profits equal to the incident weight sums. Every binary vector gets
// the same objective in both problems, and the hypergraph is alpha-acyclic.
inline Instance from_maxcut(const WeightedGraph& graph) {
  validate(graph);
  const NodeId n = graph.num_nodes;
  std::vector<std::vector<NodeId>> edge_sets;
  std::vector<Profit> edge_profits;
  edge_sets.reserve(graph.edges.size() + 1);
  std::vector<Profit> node_profits(n, 0);
  for (const auto& e : graph.edges) {
    edge_sets.push_back({e.u, e.v});
    edge_profits.push_back(checked_neg(checked_add(e.w, e.w)));
    node_profits[e.u] = checked_add(node_profits[e.u], e.w);
    node_profits[e.v] = checked_add(node_profits[e.v], e.w);
  }
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);
  edge_sets.push_back(std::move(all));
  edge_profits.push_back(0);
  return Instance(Hypergraph(n, std::move(edge_sets)),
                  std::move(node_profits), std::move(edge_profits));
}

// Per-repetition seed, independent of execution order.
inline std::uint64_t derive_instance_seed(std::uint64_t master_seed, NodeId n,
                                          EdgeId m, int repetition) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(m));
  h = splitmix64(h ^ static_cast<std::uint64_t>(repetition));
  return h;
}

struct RemovalCell {
  NodeId num_nodes = 0;
  EdgeId num_edges = 0;
  double mean_removed_pct = 0.0;
};

// For each (n, m) cell: generate `reps` instances, reduce each, and average
// the removed-node percentage |trace| / n.
inline std::vector<RemovalCell> removal_experiment(
    const std::vector<std::pair<NodeId, EdgeId>>& grid, int reps,
    std::uint64_t master_seed) {
  if (reps <= 0) throw std::invalid_argument("need at least one repetition");
  std::vector<RemovalCell> table;
  table.reserve(grid.size());
  for (auto [n, m] : grid) {
    double sum = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      RandomModel model;
      model.num_nodes = n;
      model.num_edges = m;
      model.seed = derive_instance_seed(master_seed, n, m, rep);
      ReducedProblem reduced = reduce(generate(model));
      sum += static_cast<double>(reduced.trace.records.size()) /
             static_cast<double>(n);
    }
    table.push_back({n, m, 100.0 * sum / reps});
  }
  return table;
}

}  // namespace bpo
