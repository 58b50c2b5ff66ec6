#include "ccstream/mismatch.h"

#include <stdexcept>
#include <string>

namespace ccstream {

bool IsMismatch(NodeId u, NodeId v, const Clustering& clustering,
                const SimilarityOracle& oracle) {
  if (u == v) {
    throw std::invalid_argument("mismatch test needs two distinct nodes");
  }
  const bool similar = oracle.Similar(u, v);
  const bool together = clustering[u] == clustering[v];
  return similar != together;
}

std::vector<NodeId> ABPartition::A() const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < in_a.size(); ++u) {
    if (in_a[u]) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> ABPartition::B() const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < in_a.size(); ++u) {
    if (!in_a[u]) out.push_back(u);
  }
  return out;
}

ABPartition PartitionAB(const RankFunction& rf, const ReferenceSet& reference,
                        int k, const SimilarityOracle& oracle) {
  ABPartition p{std::vector<bool>(oracle.size())};
  for (NodeId u = 0; u < oracle.size(); ++u) {
    p.in_a[u] = FindPivot(u, rf, reference, k, oracle).has_value();
  }
  return p;
}

std::vector<NodeId> Clu(NodeId u, const Clustering& clustering,
                        const SimilarityOracle& oracle) {
  if (clustering[u] != u) return {};
  std::vector<NodeId> out;
  bool placed_u = false;
  for (NodeId v : oracle.Neighbors(u)) {
    if (!placed_u && v > u) {
      out.push_back(u);
      placed_u = true;
    }
    if (clustering[v] == u) out.push_back(v);
  }
  if (!placed_u) out.push_back(u);
  return out;
}

MismatchCounts ExactMismatchCounts(const SimilarityOracle& oracle,
                                   const RankFunction& rf,
                                   const ReferenceSet& reference, int k) {
  const std::size_t n = oracle.size();
  if (n > kExactPairLimit) {
    throw CapacityError("exact mismatch counting is limited to " +
                        std::to_string(kExactPairLimit) + " nodes, got " +
                        std::to_string(n));
  }
  const Clustering pivots = PrunedPivotClustering(oracle, rf, k);
  const ABPartition ab = PartitionAB(rf, reference, k, oracle);
  MismatchCounts counts;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const bool similar = oracle.Similar(u, v);
      const bool together = pivots[u] == pivots[v];
      if (similar == together) continue;
      ++counts.total;
      if (ab.in_a[u] || ab.in_a[v]) {
        ++counts.in_a;
      } else {
        ++counts.in_b;
      }
    }
  }
  return counts;
}

}  // namespace ccstream
