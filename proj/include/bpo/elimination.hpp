#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "bpo/common.hpp"
#include "bpo/hypergraph.hpp"
#include "bpo/instance.hpp"

namespace bpo {

// Index classes of a nest point's chain positions 0..k, derived from the
// sign sequence of the prefix sums S_i = p_{e_0} + ... + p_{e_i}. P marks a
// positive flip, N a negative flip; NP and PN fill the runs in between.
enum class FlipClass : std::uint8_t { NP, P, PN, N };

inline const char* to_string(FlipClass c) {
  switch (c) {
    case FlipClass::NP: return "NP";
    case FlipClass::P: return "P";
    case FlipClass::PN: return "PN";
    case FlipClass::N: return "N";
  }
  return "?";
}

struct FlipClassification {
  std::vector<Profit> prefix_sums;      // S_0..S_k
  std::vector<FlipClass> classes;       // one class per position 0..k
  std::optional<std::int32_t> lambda;   // filled by compute_lambda

  int k() const { return static_cast<int>(classes.size()) - 1; }
};

// Classifies chain positions from the profit sequence [p_{e_0}, ..., p_{e_k}].
// Position i >= 1 is a positive flip when S_i > 0 and the last non-zero
// value among S_0..S_{i-1} is negative or absent, a negative flip when
// S_i < 0 and that value is positive or absent. ("Absent" covers an all-zero
// prefix; treating it as a flip keeps the one-step objective identity, see
// the tests.) Non-flip positions fill NP/PN runs; with no flip at all, every
// position is NP when S_0 <= 0 and PN otherwise.
inline FlipClassification classify_flips(std::span<const Profit> chain_profits) {
  if (chain_profits.empty())
    throw std::invalid_argument("chain profits must include position 0");
  const int k = static_cast<int>(chain_profits.size()) - 1;

  FlipClassification out;
  out.prefix_sums.resize(k + 1);
  out.classes.assign(k + 1, FlipClass::NP);

  Profit running = 0;
  int last_nonzero_sign = 0;  // sign of the last non-zero S_j seen so far
  std::vector<std::pair<int, bool>> flips;  // (position, is_positive)
  for (int i = 0; i <= k; ++i) {
    running = checked_add(running, chain_profits[i]);
    out.prefix_sums[i] = running;
    if (i >= 1) {
      if (running > 0 && last_nonzero_sign <= 0)
        flips.emplace_back(i, true);
      else if (running < 0 && last_nonzero_sign >= 0)
        flips.emplace_back(i, false);
    }
    if (running != 0) last_nonzero_sign = running > 0 ? 1 : -1;
  }

  if (flips.empty()) {
    FlipClass fill = out.prefix_sums[0] > 0 ? FlipClass::PN : FlipClass::NP;
    out.classes.assign(k + 1, fill);
    return out;
  }

  // Runs: before the first flip, between consecutive flips, after the last.
  int pos = 0;
  for (std::size_t f = 0; f < flips.size(); ++f) {
    auto [fpos, positive] = flips[f];
    FlipClass run = positive ? FlipClass::NP : FlipClass::PN;
    for (; pos < fpos; ++pos) out.classes[pos] = run;
    out.classes[pos++] = positive ? FlipClass::P : FlipClass::N;
  }
  FlipClass tail =
      flips.back().second ? FlipClass::PN : FlipClass::NP;
  for (; pos <= k; ++pos) out.classes[pos] = tail;
  return out;
}

// Checks the cycling structure NP -> P -> PN -> N -> NP (runs may repeat,
// flips may not), with position 0 in NP or PN.
inline bool is_valid_class_cycle(std::span<const FlipClass> classes) {
  if (classes.empty()) return false;
  if (classes[0] != FlipClass::NP && classes[0] != FlipClass::PN) return false;
  for (std::size_t i = 1; i < classes.size(); ++i) {
    FlipClass a = classes[i - 1], b = classes[i];
    bool ok = false;
    switch (a) {
      case FlipClass::NP: ok = b == FlipClass::NP || b == FlipClass::P; break;
      case FlipClass::P: ok = b == FlipClass::PN || b == FlipClass::N; break;
      case FlipClass::PN: ok = b == FlipClass::PN || b == FlipClass::N; break;
      case FlipClass::N: ok = b == FlipClass::NP || b == FlipClass::P; break;
    }
    if (!ok) return false;
  }
  return true;
}

// Smallest chain position whose edge is not the loop {u}; absent when every
// incident edge is {u} or the chain is empty. The chain is sorted by
// cardinality, so the loops form a prefix and binary search applies.
inline std::optional<std::int32_t> compute_lambda(const EdgeChain& chain,
                                                  const Hypergraph& g) {
  int lo = 0, hi = chain.length();  // first chain index with cardinality >= 2
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (g.cardinality(chain.edges[mid]) >= 2)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == chain.length()) return std::nullopt;
  return lo + 1;  // positions are 1-based along the chain
}

// New profits for the chain edges at positions lambda..k:
//   NP -> 0,  P -> S_i,  PN -> unchanged,  N -> -S_{i-1}.
// Profits of everything else are untouched.
inline std::vector<std::pair<EdgeId, Profit>> rewrite_profits(
    const Instance& inst, NodeId u, const EdgeChain& chain,
    const FlipClassification& cls) {
  (void)u;
  if (!cls.lambda) throw std::invalid_argument("lambda required for rewrite");
  const int lambda = *cls.lambda;
  std::vector<std::pair<EdgeId, Profit>> out;
  out.reserve(cls.k() - lambda + 1);
  for (int i = lambda; i <= cls.k(); ++i) {
    EdgeId e = chain.edges[i - 1];
    Profit p = 0;
    switch (cls.classes[i]) {
      case FlipClass::NP: p = 0; break;
      case FlipClass::P: p = cls.prefix_sums[i]; break;
      case FlipClass::PN: p = inst.edge_profit(e); break;
      case FlipClass::N: p = checked_neg(cls.prefix_sums[i - 1]); break;
    }
    out.emplace_back(e, p);
  }
  return out;
}

// Decision for a nest point whose incident edges are all loops {u} (or that
// has no incident edges): set the bit to 1 iff S_k >= 0; the gain is the
// constant contribution max(0, S_k) of u and its loops.
inline std::pair<int, Profit> loop_only_decision(
    std::span<const Profit> chain_profits) {
  Profit total = 0;
  for (Profit p : chain_profits) total = checked_add(total, p);
  return {total >= 0 ? 1 : 0, total > 0 ? total : 0};
}

// Record of everything needed to lift a reduced solution over one
// eliminated node.
struct LoopOnlyRecord {
  int decided_bit = 0;
  Profit gain = 0;
};

struct ChainRecord {
  std::int32_t lambda = 1;
  std::vector<FlipClass> classes;  // positions 0..k
  Profit offset = 0;               // S_{lambda-1} if class[lambda] in {PN,N}

  // Stripped node sets e_i \ {u} at elimination time, for positions 0..k.
  // The sets are nested, so they are stored as per-position increments:
  // position i contributes delta_nodes[delta_start[i]..delta_start[i+1]),
  // and stripped_set(i) is the union of the increments up to i.
  std::vector<std::uint32_t> delta_start;  // size k+2
  std::vector<NodeId> delta_nodes;

  int k() const { return static_cast<int>(classes.size()) - 1; }

  std::span<const NodeId> delta(int i) const {
    return {delta_nodes.data() + delta_start[i],
            delta_nodes.data() + delta_start[i + 1]};
  }

  std::vector<NodeId> stripped_set(int i) const {
    std::vector<NodeId> out(delta_nodes.begin(),
                            delta_nodes.begin() + delta_start[i + 1]);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const ChainRecord&) const = default;
};

struct EliminationRecord {
  NodeId node = -1;
  std::variant<LoopOnlyRecord, ChainRecord> data;

  bool is_loop_only() const {
    return std::holds_alternative<LoopOnlyRecord>(data);
  }
  const LoopOnlyRecord& loop_only() const {
    return std::get<LoopOnlyRecord>(data);
  }
  const ChainRecord& chain() const { return std::get<ChainRecord>(data); }
};

inline bool operator==(const LoopOnlyRecord& a, const LoopOnlyRecord& b) {
  return a.decided_bit == b.decided_bit && a.gain == b.gain;
}

inline bool operator==(const EliminationRecord& a, const EliminationRecord& b) {
  return a.node == b.node && a.data == b.data;
}

// Largest position i such that x assigns 1 to every node of stripped_set(i).
// The sets are nested, so the first position whose increment contains a zero
// bounds the answer. Always well defined: stripped_set(0) is empty.
inline int mu(const ChainRecord& rec, const PartialAssignment& x) {
  const int k = rec.k();
  for (int i = 1; i <= k; ++i) {
    for (NodeId v : rec.delta(i)) {
      std::int8_t bit = x[v];
      if (bit < 0) throw std::invalid_argument("unassigned node in mu");
      if (bit == 0) {
        assert(i - 1 >= rec.lambda - 1);
        return i - 1;
      }
    }
  }
  return k;
}

// Lifted bit for the eliminated node: 1 iff mu lands in P or PN.
inline int phi(const ChainRecord& rec, const PartialAssignment& x) {
  FlipClass c = rec.classes[mu(rec, x)];
  return (c == FlipClass::P || c == FlipClass::PN) ? 1 : 0;
}

}  // namespace bpo
