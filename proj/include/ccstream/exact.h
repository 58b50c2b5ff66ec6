#pragma once

#include <cstdint>
#include <vector>

#include "ccstream/errors.h"
#include "ccstream/pivot.h"
#include "ccstream/similarity.h"

namespace ccstream {

// Disjoint blocks covering [0, n). Canonical form: each block sorted, blocks
// ordered by their minimum element.
struct Partition {
  std::vector<std::vector<NodeId>> blocks;

  void Canonicalize();
  bool operator==(const Partition&) const = default;
};

Partition PartitionFromClustering(const Clustering& clustering);

// Similar pairs that are separated plus dissimilar pairs that share a block.
// Throws std::invalid_argument if the partition is not a partition of [0, n).
std::uint64_t ClusteringCost(const SimilarityOracle& oracle,
                             const Partition& partition);

inline constexpr std::size_t kOptNodeLimit = 13;

struct OptResult {
  std::uint64_t cost = 0;
  Partition partition;
};

// Minimum cost over all set partitions (restricted-growth strings with
// incremental cost and branch-and-bound). Throws CapacityError above
// kOptNodeLimit nodes.
OptResult OptCost(const SimilarityOracle& oracle);

}  // namespace ccstream
