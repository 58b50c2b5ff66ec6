#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>

#include "ccstream/random.h"
#include "ccstream/similarity.h"

namespace ccstream {

// Rank key of a node. Smaller key = higher rank (smaller pi value). The node
// id breaks hash ties, so the order is total and injective.
struct RankKey {
  std::uint64_t hash = 0;
  NodeId node = 0;

  auto operator<=>(const RankKey&) const = default;
};

// Seeded keyed-hash total order standing in for a uniformly random
// permutation pi. Never materialized: comparisons hash on demand.
class RankFunction {
 public:
  RankFunction(std::uint64_t seed, std::size_t n)
      : seed_(seed), salt_(Mix64(seed ^ 0x5bd1e9955bd1e995ULL)), n_(n) {}

  RankKey key(NodeId u) const { return {Mix64(salt_ + u), u}; }

  // True iff u has a higher rank than v.
  bool Less(NodeId u, NodeId v) const { return key(u) < key(v); }

  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return n_; }

 private:
  std::uint64_t seed_;
  std::uint64_t salt_;
  std::size_t n_;
};

inline bool RankLess(NodeId u, NodeId v, const RankFunction& rf) {
  return rf.Less(u, v);
}

}  // namespace ccstream
