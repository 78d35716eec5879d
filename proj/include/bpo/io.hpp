#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bpo/common.hpp"
#include "bpo/elimination.hpp"
#include "bpo/instance.hpp"
#include "bpo/instances.hpp"
#include "bpo/solver.hpp"

namespace bpo {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

using json = nlohmann::json;

inline const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

inline std::int64_t int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer())
    throw ParseError(std::string("field '") + name + "' must be an integer");
  return v.get<std::int64_t>();
}

inline std::vector<Profit> profit_array(const json& j, const char* name,
                                        std::size_t expected) {
  const json& arr = field(j, name);
  if (!arr.is_array())
    throw ParseError(std::string("field '") + name + "' must be an array");
  if (arr.size() != expected)
    throw ParseError(std::string("field '") + name + "' has wrong length");
  std::vector<Profit> out;
  out.reserve(arr.size());
  for (const json& v : arr) {
    if (!v.is_number_integer())
      throw ParseError(std::string("non-integer entry in '") + name + "'");
    out.push_back(v.get<Profit>());
  }
  return out;
}

}  // namespace detail

// Instance document:
//   {"num_nodes": n, "node_profits": [n integers],
//    "edges": [{"nodes": [distinct 0-based ids], "profit": integer}, ...]}
inline Instance parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance document must be an object");
  std::int64_t n = detail::int_field(j, "num_nodes");
  if (n < 0) throw ParseError("num_nodes must be non-negative");
  std::vector<Profit> node_profits =
      detail::profit_array(j, "node_profits", static_cast<std::size_t>(n));

  const auto& edges = detail::field(j, "edges");
  if (!edges.is_array()) throw ParseError("'edges' must be an array");
  std::vector<std::vector<NodeId>> edge_sets;
  std::vector<Profit> edge_profits;
  edge_sets.reserve(edges.size());
  for (const auto& ej : edges) {
    if (!ej.is_object()) throw ParseError("edge entry must be an object");
    const auto& nodes = detail::field(ej, "nodes");
    if (!nodes.is_array() || nodes.empty())
      throw ParseError("edge 'nodes' must be a non-empty array");
    std::vector<NodeId> set;
    set.reserve(nodes.size());
    for (const auto& v : nodes) {
      if (!v.is_number_integer())
        throw ParseError("edge node index must be an integer");
      std::int64_t id = v.get<std::int64_t>();
      if (id < 0 || id >= n) throw ParseError("edge node index out of range");
      set.push_back(static_cast<NodeId>(id));
    }
    std::vector<NodeId> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParseError("duplicate node within edge");
    edge_sets.push_back(std::move(set));
    edge_profits.push_back(detail::int_field(ej, "profit"));
  }
  return Instance(Hypergraph(static_cast<NodeId>(n), std::move(edge_sets)),
                  std::move(node_profits), std::move(edge_profits));
}

inline Instance parse_instance_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON");
  return parse_instance(j);
}

// Prints the current view: surviving nodes are renumbered densely in
// ascending order of their original ids (the identity for a freshly built
// instance). Surviving edges keep ascending id order.
inline nlohmann::json instance_to_json(const Instance& inst) {
  const Hypergraph& g = inst.graph();
  std::vector<NodeId> alive = g.nodes();
  std::vector<NodeId> dense(g.original_node_count(), -1);
  for (std::size_t i = 0; i < alive.size(); ++i) dense[alive[i]] = i;

  nlohmann::json j;
  j["num_nodes"] = alive.size();
  nlohmann::json profits = nlohmann::json::array();
  for (NodeId v : alive) profits.push_back(inst.node_profit(v));
  j["node_profits"] = std::move(profits);
  nlohmann::json edges = nlohmann::json::array();
  for (EdgeId e : g.edges()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId v : g.edge_nodes(e)) nodes.push_back(dense[v]);
    edges.push_back({{"nodes", std::move(nodes)}, {"profit", inst.edge_profit(e)}});
  }
  j["edges"] = std::move(edges);
  return j;
}

// Trace document:
//   {"original_node_count": n, "accumulated_offset": o, "records": [...]}
// with one record per eliminated node, either
//   {"node": u, "kind": "loop_only", "decided_bit": b, "gain": g}   or
//   {"node": u, "kind": "chain", "stripped_sets": [[...], ...],
//    "class": ["PN", ...], "offset": o}
// where stripped_sets[i] and class[i] describe chain position i.
inline nlohmann::json trace_to_json(const EliminationTrace& trace,
                                    NodeId original_node_count) {
  nlohmann::json records = nlohmann::json::array();
  for (const EliminationRecord& rec : trace.records) {
    nlohmann::json rj;
    rj["node"] = rec.node;
    if (rec.is_loop_only()) {
      rj["kind"] = "loop_only";
      rj["decided_bit"] = rec.loop_only().decided_bit;
      rj["gain"] = rec.loop_only().gain;
    } else {
      const ChainRecord& cr = rec.chain();
      rj["kind"] = "chain";
      nlohmann::json sets = nlohmann::json::array();
      nlohmann::json classes = nlohmann::json::array();
      for (int i = 0; i <= cr.k(); ++i) {
        sets.push_back(cr.stripped_set(i));
        classes.push_back(to_string(cr.classes[i]));
      }
      rj["stripped_sets"] = std::move(sets);
      rj["class"] = std::move(classes);
      rj["offset"] = cr.offset;
    }
    records.push_back(std::move(rj));
  }
  return {{"original_node_count", original_node_count},
          {"accumulated_offset", trace.accumulated_offset},
          {"records", std::move(records)}};
}

inline FlipClass parse_flip_class(const std::string& s) {
  if (s == "NP") return FlipClass::NP;
  if (s == "P") return FlipClass::P;
  if (s == "PN") return FlipClass::PN;
  if (s == "N") return FlipClass::N;
  throw ParseError("unknown class token '" + s + "'");
}

struct ParsedTrace {
  EliminationTrace trace;
  NodeId original_node_count = 0;
};

inline ParsedTrace parse_trace(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("trace document must be an object");
  ParsedTrace out;
  std::int64_t n = detail::int_field(j, "original_node_count");
  if (n < 0) throw ParseError("original_node_count must be non-negative");
  out.original_node_count = static_cast<NodeId>(n);
  out.trace.accumulated_offset = detail::int_field(j, "accumulated_offset");

  const auto& records = detail::field(j, "records");
  if (!records.is_array()) throw ParseError("'records' must be an array");
  std::set<NodeId> seen;
  for (const auto& rj : records) {
    std::int64_t node = detail::int_field(rj, "node");
    if (node < 0 || node >= n) throw ParseError("record node out of range");
    if (!seen.insert(static_cast<NodeId>(node)).second)
      throw ParseError("node eliminated twice");
    EliminationRecord rec;
    rec.node = static_cast<NodeId>(node);

    const auto& kind = detail::field(rj, "kind");
    if (kind == "loop_only") {
      LoopOnlyRecord lr;
      std::int64_t bit = detail::int_field(rj, "decided_bit");
      if (bit != 0 && bit != 1) throw ParseError("decided_bit must be 0 or 1");
      lr.decided_bit = static_cast<int>(bit);
      lr.gain = detail::int_field(rj, "gain");
      rec.data = lr;
    } else if (kind == "chain") {
      const auto& sets = detail::field(rj, "stripped_sets");
      const auto& classes = detail::field(rj, "class");
      if (!sets.is_array() || !classes.is_array() || sets.empty() ||
          sets.size() != classes.size())
        throw ParseError("chain record arrays malformed");
      ChainRecord cr;
      const int k = static_cast<int>(sets.size()) - 1;
      cr.offset = detail::int_field(rj, "offset");
      cr.classes.reserve(k + 1);
      for (const auto& c : classes) {
        if (!c.is_string()) throw ParseError("class entry must be a string");
        cr.classes.push_back(parse_flip_class(c.get<std::string>()));
      }
      cr.delta_start.assign(k + 2, 0);
      std::vector<NodeId> prev;
      std::int32_t lambda = 0;
      for (int i = 0; i <= k; ++i) {
        const auto& sj = sets[i];
        if (!sj.is_array()) throw ParseError("stripped set must be an array");
        std::vector<NodeId> cur;
        cur.reserve(sj.size());
        for (const auto& v : sj) {
          if (!v.is_number_integer())
            throw ParseError("stripped set entry must be an integer");
          std::int64_t id = v.get<std::int64_t>();
          if (id < 0 || id >= n)
            throw ParseError("stripped set node out of range");
          cur.push_back(static_cast<NodeId>(id));
        }
        std::sort(cur.begin(), cur.end());
        if (std::adjacent_find(cur.begin(), cur.end()) != cur.end())
          throw ParseError("duplicate node in stripped set");
        if (i == 0 && !cur.empty())
          throw ParseError("stripped set at position 0 must be empty");
        if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
          throw ParseError("stripped sets must be nested");
        if (lambda == 0 && i >= 1 && !cur.empty()) lambda = i;
        std::vector<NodeId> delta;
        std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(),
                            std::back_inserter(delta));
        for (NodeId v : delta) cr.delta_nodes.push_back(v);
        cr.delta_start[i + 1] = static_cast<std::uint32_t>(cr.delta_nodes.size());
        prev = std::move(cur);
      }
      if (lambda == 0)
        throw ParseError("chain record without a non-loop position");
      cr.lambda = lambda;
      rec.data = std::move(cr);
    } else {
      throw ParseError("unknown record kind");
    }
    out.trace.records.push_back(std::move(rec));
  }
  return out;
}

// Weighted graph document:
//   {"num_nodes": n, "edges": [{"u": a, "v": b, "w": weight}, ...]}
inline WeightedGraph parse_graph(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("graph document must be an object");
  WeightedGraph g;
  std::int64_t n = detail::int_field(j, "num_nodes");
  if (n < 0) throw ParseError("num_nodes must be non-negative");
  g.num_nodes = static_cast<NodeId>(n);
  const auto& edges = detail::field(j, "edges");
  if (!edges.is_array()) throw ParseError("'edges' must be an array");
  for (const auto& ej : edges) {
    WeightedGraph::Edge e;
    e.u = static_cast<NodeId>(detail::int_field(ej, "u"));
    e.v = static_cast<NodeId>(detail::int_field(ej, "v"));
    e.w = detail::int_field(ej, "w");
    g.edges.push_back(e);
  }
  try {
    validate(g);
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
  return g;
}

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"u", e.u}, {"v", e.v}, {"w", e.w}});
  return {{"num_nodes", g.num_nodes}, {"edges", std::move(edges)}};
}

// Solution document: {"assignment": [bits], "objective": integer}.
inline nlohmann::json solution_to_json(const Solution& sol,
                                       const std::vector<NodeId>& nodes) {
  nlohmann::json bits = nlohmann::json::array();
  for (NodeId v : nodes) {
    if (sol.assignment[v] < 0)
      throw std::invalid_argument("solution leaves a node unassigned");
    bits.push_back(static_cast<int>(sol.assignment[v]));
  }
  return {{"assignment", std::move(bits)}, {"objective", sol.objective}};
}

struct ParsedSolution {
  std::vector<std::int8_t> bits;
  Profit objective = 0;
  bool has_objective = false;
};

inline ParsedSolution parse_solution(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("solution document must be an object");
  const auto& arr = detail::field(j, "assignment");
  if (!arr.is_array()) throw ParseError("'assignment' must be an array");
  ParsedSolution out;
  for (const auto& v : arr) {
    if (!v.is_number_integer())
      throw ParseError("assignment entry must be an integer");
    std::int64_t bit = v.get<std::int64_t>();
    if (bit != 0 && bit != 1) throw ParseError("assignment bits must be 0/1");
    out.bits.push_back(static_cast<std::int8_t>(bit));
  }
  if (j.contains("objective")) {
    out.objective = detail::int_field(j, "objective");
    out.has_objective = true;
  }
  return out;
}

}  // namespace bpo
