#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/elimination.hpp"
#include "bpo/hypergraph.hpp"
#include "bpo/instance.hpp"

namespace bpo {

// Per-node elimination records in removal order, plus the accumulated
// constant offset (chain offsets and loop gains). Replaying the records
// forward reproduces the reduction; replaying them backward lifts any core
// solution to the original node set.
struct EliminationTrace {
  std::vector<EliminationRecord> records;
  Profit accumulated_offset = 0;

  bool operator==(const EliminationTrace&) const = default;
};

struct ReducedProblem {
  Instance core;  // same id space as the input, eliminated nodes removed
  EliminationTrace trace;
  NodeId original_node_count = 0;
};

struct Solution {
  PartialAssignment assignment;
  Profit objective = 0;
};

class NotBetaAcyclicError : public std::runtime_error {
 public:
  explicit NotBetaAcyclicError(ReducedProblem reduced)
      : std::runtime_error("instance is not beta-acyclic"),
        reduced_(std::make_shared<ReducedProblem>(std::move(reduced))) {}

  // The partial reduction, so callers can solve the core and lift.
  const ReducedProblem& reduced() const { return *reduced_; }

 private:
  std::shared_ptr<const ReducedProblem> reduced_;
};

// Instrumentation counters; arithmetic_ops counts profit additions,
// comparisons and membership probes performed by reduce/lift.
struct SolveStats {
  std::uint64_t elimination_steps = 0;
  std::uint64_t arithmetic_ops = 0;
};

namespace detail {

// Incremental lowest-id nest-point finder. Exploits two facts that hold
// under node removal: set inclusions between surviving edges are never
// destroyed, and a node that once was a nest point stays one. Verified
// inclusions and verified nest points are therefore cached across steps;
// failed candidates are re-examined only when an incident edge shrank
// (detected through the sum of incident cardinalities).
class EliminationEngine {
 public:
  EliminationEngine(Hypergraph& graph, SolveStats& stats)
      : g_(graph),
        stats_(stats),
        np_status_(graph.original_node_count(), kUnknown),
        fail_sig_(graph.original_node_count(), -1),
        edge_stamp_(graph.original_edge_count(), -1),
        scan_start_(0) {
    verified_pairs_.reserve(64);
  }

  // Lowest-id nest point and its inclusion-sorted chain, or absent.
  std::optional<std::pair<NodeId, std::vector<EdgeId>>> next() {
    const NodeId n = g_.original_node_count();
    while (scan_start_ < n && !g_.node_alive(scan_start_)) ++scan_start_;
    for (NodeId u = scan_start_; u < n; ++u) {
      if (!g_.node_alive(u)) continue;
      std::int32_t deg = g_.degree(u);
      if (deg <= 1) return std::make_pair(u, g_.incident_edges(u));
      if (np_status_[u] == kVerified)
        return std::make_pair(u, sorted_chain(u));

      std::int64_t sig = family_signature(u);
      if (np_status_[u] == kFailed && fail_sig_[u] == sig) continue;

      std::vector<EdgeId> chain = sorted_chain(u);
      if (verify_chain(chain)) {
        np_status_[u] = kVerified;
        ++stamp_counter_;
        for (EdgeId e : chain) edge_stamp_[e] = stamp_counter_;
        return std::make_pair(u, std::move(chain));
      }
      np_status_[u] = kFailed;
      fail_sig_[u] = sig;
    }
    return std::nullopt;
  }

 private:
  static constexpr std::uint8_t kUnknown = 0;
  static constexpr std::uint8_t kVerified = 1;
  static constexpr std::uint8_t kFailed = 2;

  std::int64_t family_signature(NodeId u) const {
    std::int64_t sig = 0;
    for (EdgeId e : g_.original_incident_edges(u))
      if (g_.edge_alive(e)) sig += g_.cardinality(e);
    return sig;
  }

  // Incident edges sorted by (cardinality, id). Counting sort over the card
  // range when it is dense, comparison sort otherwise.
  std::vector<EdgeId> sorted_chain(NodeId u) {
    std::vector<EdgeId> chain;
    std::int32_t min_card = std::numeric_limits<std::int32_t>::max();
    std::int32_t max_card = 0;
    for (EdgeId e : g_.original_incident_edges(u)) {
      if (!g_.edge_alive(e)) continue;
      chain.push_back(e);
      std::int32_t c = g_.cardinality(e);
      min_card = std::min(min_card, c);
      max_card = std::max(max_card, c);
    }
    stats_.arithmetic_ops += chain.size();
    if (chain.size() <= 1) return chain;

    std::int64_t range = static_cast<std::int64_t>(max_card) - min_card + 1;
    if (range > static_cast<std::int64_t>(4 * chain.size()) + 64) {
      std::sort(chain.begin(), chain.end(), [&](EdgeId a, EdgeId b) {
        std::int32_t ca = g_.cardinality(a), cb = g_.cardinality(b);
        if (ca != cb) return ca < cb;
        return a < b;
      });
      stats_.arithmetic_ops += chain.size();
      return chain;
    }
    count_buf_.assign(range + 1, 0);
    for (EdgeId e : chain) ++count_buf_[g_.cardinality(e) - min_card];
    std::int32_t acc = 0;
    for (std::int64_t i = 0; i <= range; ++i) {
      std::int32_t c = count_buf_[i];
      count_buf_[i] = acc;
      acc += c;
    }
    std::vector<EdgeId> out(chain.size());
    for (EdgeId e : chain) out[count_buf_[g_.cardinality(e) - min_card]++] = e;
    stats_.arithmetic_ops += chain.size() + range;
    return out;
  }

  static std::uint64_t pair_key(EdgeId sub, EdgeId super) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(sub)) << 32) |
           static_cast<std::uint32_t>(super);
  }

  bool verify_chain(const std::vector<EdgeId>& chain) {
    // A family whose edges were all part of one previously verified chain
    // is still totally ordered: inclusions survive node removal.
    std::int64_t stamp = edge_stamp_[chain.front()];
    bool same_stamp = stamp >= 0;
    for (EdgeId e : chain) {
      if (edge_stamp_[e] != stamp) {
        same_stamp = false;
        break;
      }
    }
    stats_.arithmetic_ops += chain.size();
    if (same_stamp) return true;

    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      EdgeId a = chain[i], b = chain[i + 1];
      ++stats_.arithmetic_ops;
      if (verified_pairs_.contains(pair_key(a, b))) continue;
      stats_.arithmetic_ops += g_.original_edge_nodes(a).size();
      if (!g_.edge_subset_of(a, b)) return false;
      verified_pairs_.insert(pair_key(a, b));
      if (g_.cardinality(a) == g_.cardinality(b))
        verified_pairs_.insert(pair_key(b, a));
    }
    return true;
  }

  Hypergraph& g_;
  SolveStats& stats_;
  std::vector<std::uint8_t> np_status_;
  std::vector<std::int64_t> fail_sig_;
  std::vector<std::int64_t> edge_stamp_;
  std::unordered_set<std::uint64_t> verified_pairs_;
  std::vector<std::int32_t> count_buf_;
  std::int64_t stamp_counter_ = 0;
  NodeId scan_start_ = 0;
};

// Stripped-set increments of a chain about to lose u. Every increment size
// is known from consecutive cardinalities; size-one increments are resolved
// through edge weight-sum differences (verified against real membership, so
// hash collisions only cost a fallback), the rest by binary search over the
// nested chain.
inline void extract_deltas(const Hypergraph& g, NodeId u,
                           const std::vector<EdgeId>& chain,
                           std::int32_t lambda, ChainRecord& rec,
                           SolveStats& stats,
                           std::vector<std::int32_t>& pos_buf) {
  const int k = static_cast<int>(chain.size());
  rec.delta_start.assign(k + 2, 0);
  rec.delta_nodes.clear();
  EdgeId top = chain.back();

  std::vector<NodeId> members;
  members.reserve(g.cardinality(top) - 1);
  for (NodeId v : g.original_edge_nodes(top))
    if (v != u && g.node_alive(v)) members.push_back(v);
  stats.arithmetic_ops += g.original_edge_nodes(top).size();
  if (members.empty()) return;

  if (static_cast<std::size_t>(g.original_node_count()) != pos_buf.size())
    pos_buf.assign(g.original_node_count(), 0);
  for (NodeId v : members) pos_buf[v] = 0;

  // Pass 1: positions whose increment is a single node.
  std::vector<std::int32_t> unresolved_pos;
  std::int32_t prev_card = 1;  // position lambda-1 is the loop {u}
  std::uint64_t prev_wsum = g.node_weight(u);
  std::size_t resolved = 0;
  for (std::int32_t i = lambda; i <= k; ++i) {
    EdgeId e = chain[i - 1];
    std::int32_t card = g.cardinality(e);
    std::uint64_t wsum = g.edge_weight_sum(e);
    std::int32_t d = card - prev_card;
    ++stats.arithmetic_ops;
    if (d == 1) {
      std::optional<NodeId> cand = g.node_from_weight(wsum - prev_wsum);
      ++stats.arithmetic_ops;
      bool ok = cand && g.node_alive(*cand) && *cand != u &&
                pos_buf[*cand] == 0 && g.edge_contains(e, *cand) &&
                (i == lambda || !g.edge_contains(chain[i - 2], *cand));
      if (ok) {
        pos_buf[*cand] = i;
        ++resolved;
      } else {
        unresolved_pos.push_back(i);
      }
    } else if (d > 1) {
      unresolved_pos.push_back(i);
    }
    prev_card = card;
    prev_wsum = wsum;
  }

  // Pass 2: remaining members enter at one of the unresolved positions;
  // membership along the nested chain is monotone, so binary search works.
  if (resolved < members.size()) {
    for (NodeId v : members) {
      if (pos_buf[v] != 0) continue;
      std::size_t lo = 0, hi = unresolved_pos.size();
      while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        ++stats.arithmetic_ops;
        if (g.edge_contains(chain[unresolved_pos[mid] - 1], v))
          hi = mid;
        else
          lo = mid + 1;
      }
      if (lo == unresolved_pos.size())
        throw std::logic_error("chain member without an entry position");
      pos_buf[v] = unresolved_pos[lo];
    }
  }

  // Bucket members by entry position, ascending node order within a bucket.
  for (NodeId v : members) ++rec.delta_start[pos_buf[v] + 1];
  for (int i = 1; i <= k + 1; ++i)
    rec.delta_start[i] += rec.delta_start[i - 1];
  rec.delta_nodes.resize(members.size());
  std::vector<std::uint32_t> cursor(rec.delta_start.begin(),
                                    rec.delta_start.end() - 1);
  for (NodeId v : members) rec.delta_nodes[cursor[pos_buf[v]]++] = v;
  stats.arithmetic_ops += 2 * members.size() + k;
}

}  // namespace detail

// Strips nest points (lowest id first) until none remains, recording per
// node everything needed to lift a core solution back. The returned core is
// empty exactly when the input is beta-acyclic.
inline ReducedProblem reduce(const Instance& input,
                             SolveStats* stats = nullptr) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;

  Instance work = input;
  Hypergraph& g = work.graph();
  EliminationTrace trace;
  detail::EliminationEngine engine(g, st);
  std::vector<std::int32_t> pos_buf;
  std::vector<Profit> profits;

  while (auto found = engine.next()) {
    auto& [u, chain_edges] = *found;
    ++st.elimination_steps;
    const int k = static_cast<int>(chain_edges.size());

    profits.clear();
    profits.push_back(work.node_profit(u));
    for (EdgeId e : chain_edges) profits.push_back(work.edge_profit(e));
    st.arithmetic_ops += k + 1;

    EliminationRecord rec;
    rec.node = u;
    if (k == 0 || g.cardinality(chain_edges.back()) == 1) {
      auto [bit, gain] = loop_only_decision(profits);
      rec.data = LoopOnlyRecord{bit, gain};
      trace.accumulated_offset = checked_add(trace.accumulated_offset, gain);
    } else {
      EdgeChain chain{u, chain_edges};
      FlipClassification cls = classify_flips(profits);
      cls.lambda = compute_lambda(chain, g);
      assert(cls.lambda.has_value());
      st.arithmetic_ops += 2 * (k + 1);
      const std::int32_t lambda = *cls.lambda;

      ChainRecord chain_rec;
      chain_rec.lambda = lambda;
      chain_rec.classes = cls.classes;
      FlipClass at_lambda = cls.classes[lambda];
      chain_rec.offset =
          (at_lambda == FlipClass::PN || at_lambda == FlipClass::N)
              ? cls.prefix_sums[lambda - 1]
              : 0;
      detail::extract_deltas(g, u, chain_edges, lambda, chain_rec, st,
                             pos_buf);

      for (auto& [e, p] : rewrite_profits(work, u, chain, cls))
        work.set_edge_profit(e, p);
      st.arithmetic_ops += k - lambda + 1;

      trace.accumulated_offset =
          checked_add(trace.accumulated_offset, chain_rec.offset);
      rec.data = std::move(chain_rec);
    }
    trace.records.push_back(std::move(rec));
    work.remove_node(u);
    st.arithmetic_ops += k;
  }

  NodeId original = input.original_node_count();
  return ReducedProblem{std::move(work), std::move(trace), original};
}

// Extends an assignment of the core nodes to all original nodes by
// replaying the trace backward: loop-only nodes take their recorded bit,
// chain nodes take phi of the assignment built so far.
inline PartialAssignment lift(const ReducedProblem& reduced,
                              const PartialAssignment& core_solution,
                              SolveStats* stats = nullptr) {
  SolveStats local;
  SolveStats& st = stats ? *stats : local;

  const Hypergraph& core_graph = reduced.core.graph();
  if (core_solution.size() !=
      static_cast<std::size_t>(core_graph.original_node_count()))
    throw std::invalid_argument("core solution size mismatch");
  PartialAssignment x = core_solution;
  for (NodeId v = 0; v < core_graph.original_node_count(); ++v) {
    if (core_graph.node_alive(v)) {
      if (x[v] != 0 && x[v] != 1)
        throw std::invalid_argument("core solution must assign every core node");
    } else {
      x[v] = -1;
    }
  }

  for (auto it = reduced.trace.records.rbegin();
       it != reduced.trace.records.rend(); ++it) {
    if (it->is_loop_only()) {
      x[it->node] = static_cast<std::int8_t>(it->loop_only().decided_bit);
    } else {
      const ChainRecord& rec = it->chain();
      x[it->node] = static_cast<std::int8_t>(phi(rec, x));
      st.arithmetic_ops += rec.delta_nodes.size() + 1;
    }
  }
  return x;
}

// True iff evaluating the lifted assignment on the original instance equals
// the core objective plus the trace's accumulated offset. Holds for every
// core assignment, optimal or not; solve uses it as a self-audit.
inline bool offset_identity_holds(const Instance& original,
                                  const ReducedProblem& reduced,
                                  const PartialAssignment& core_solution) {
  PartialAssignment lifted = lift(reduced, core_solution);
  Profit lhs = evaluate(original, lifted);
  Profit rhs = checked_add(evaluate(reduced.core, core_solution),
                           reduced.trace.accumulated_offset);
  return lhs == rhs;
}

// Exact maximizer for beta-acyclic instances. Throws NotBetaAcyclicError
// (carrying the partial reduction) when the core is non-empty.
inline Solution solve(const Instance& instance, SolveStats* stats = nullptr) {
  ReducedProblem reduced = reduce(instance, stats);
  if (!reduced.core.graph().empty())
    throw NotBetaAcyclicError(std::move(reduced));

  PartialAssignment empty_core(instance.original_node_count(), -1);
  PartialAssignment lifted = lift(reduced, empty_core, stats);
  Profit objective = evaluate(instance, lifted);
  // The reduction promises obj = core objective (0, empty) + offset; a
  // mismatch means a bug, not bad input.
  if (objective != reduced.trace.accumulated_offset)
    throw std::logic_error("objective does not match accumulated offset");
  return Solution{std::move(lifted), objective};
}

}  // namespace bpo
