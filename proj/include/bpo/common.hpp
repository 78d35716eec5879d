#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpo {

// Nodes and edges are identified by dense non-negative indices assigned at
// construction time. Identities are stable: a removed node keeps its id in
// traces and solutions, and an edge keeps its id while nodes are stripped
// from it. Retired ids are never reassigned.
using NodeId = std::int32_t;
using EdgeId = std::int32_t;

// All profit arithmetic is exact 64-bit with overflow detection; a sum that
// does not fit raises OverflowError instead of wrapping.
using Profit = std::int64_t;

// Assignment over node ids: 0, 1, or -1 for "unassigned".
using PartialAssignment = std::vector<std::int8_t>;

class OverflowError : public std::runtime_error {
 public:
  OverflowError() : std::runtime_error("profit arithmetic overflow") {}
};

class TooLargeError : public std::runtime_error {
 public:
  explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

inline Profit checked_add(Profit a, Profit b) {
  Profit r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError();
  return r;
}

inline Profit checked_sub(Profit a, Profit b) {
  Profit r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError();
  return r;
}

inline Profit checked_neg(Profit a) { return checked_sub(0, a); }

// splitmix64: used to derive per-repetition seeds and per-node hash weights.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace bpo
