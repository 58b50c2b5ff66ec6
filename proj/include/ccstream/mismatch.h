#pragma once

#include <cstdint>
#include <vector>

#include "ccstream/errors.h"
#include "ccstream/pivot.h"

namespace ccstream {

// A similar pair split across clusters, or a dissimilar pair sharing one.
// Throws std::invalid_argument when u == v.
bool IsMismatch(NodeId u, NodeId v, const Clustering& clustering,
                const SimilarityOracle& oracle);

// A = nodes whose pivot FindPivot can determine from R; B = the rest.
struct ABPartition {
  std::vector<bool> in_a;

  bool InA(NodeId u) const { return in_a[u]; }
  bool InB(NodeId u) const { return !in_a[u]; }
  std::vector<NodeId> A() const;
  std::vector<NodeId> B() const;
};

ABPartition PartitionAB(const RankFunction& rf, const ReferenceSet& reference,
                        int k, const SimilarityOracle& oracle);

// Clu(u): u and the neighbours whose pivot is u, when u is a pivot; empty
// otherwise. Sorted ascending.
std::vector<NodeId> Clu(NodeId u, const Clustering& clustering,
                        const SimilarityOracle& oracle);

struct MismatchCounts {
  std::uint64_t total = 0;
  std::uint64_t in_a = 0;  // at least one endpoint in A
  std::uint64_t in_b = 0;  // both endpoints in B
};

inline constexpr std::size_t kExactPairLimit = 5000;

// Exhaustive pair scan under the PrunedPivot(k) clustering, split by the
// (A, B) partition of R. Throws CapacityError above kExactPairLimit nodes.
MismatchCounts ExactMismatchCounts(const SimilarityOracle& oracle,
                                   const RankFunction& rf,
                                   const ReferenceSet& reference, int k);

}  // namespace ccstream
