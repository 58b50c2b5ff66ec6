#include "ccstream/exact.h"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace ccstream {

void Partition::Canonicalize() {
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                              [](const auto& b) { return b.empty(); }),
               blocks.end());
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition PartitionFromClustering(const Clustering& clustering) {
  std::map<NodeId, std::vector<NodeId>> by_pivot;
  for (NodeId u = 0; u < clustering.size(); ++u) {
    by_pivot[clustering[u]].push_back(u);
  }
  Partition p;
  for (auto& [pivot, block] : by_pivot) p.blocks.push_back(std::move(block));
  p.Canonicalize();
  return p;
}

std::uint64_t ClusteringCost(const SimilarityOracle& oracle,
                             const Partition& partition) {
  const std::size_t n = oracle.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> block_of(n, kNone);
  for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
    for (NodeId u : partition.blocks[b]) {
      if (u >= n) {
        throw std::invalid_argument("partition mentions node " +
                                    std::to_string(u) + " outside [0, " +
                                    std::to_string(n) + ")");
      }
      if (block_of[u] != kNone) {
        throw std::invalid_argument("node " + std::to_string(u) +
                                    " appears in two blocks");
      }
      block_of[u] = b;
    }
  }
  for (NodeId u = 0; u < n; ++u) {
    if (block_of[u] == kNone) {
      throw std::invalid_argument("partition does not cover node " +
                                  std::to_string(u));
    }
  }
  std::uint64_t cost = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (oracle.Similar(u, v) != (block_of[u] == block_of[v])) ++cost;
    }
  }
  return cost;
}

namespace {

class OptSearch {
 public:
  explicit OptSearch(const SimilarityOracle& oracle) : n_(oracle.size()) {
    adj_.assign(n_, 0);
    for (NodeId u = 0; u < n_; ++u) {
      for (NodeId v = 0; v < u; ++v) {
        if (oracle.Similar(u, v)) {
          adj_[u] |= 1u << v;
          adj_[v] |= 1u << u;
        }
      }
    }
    block_of_.assign(n_, 0);
    masks_.assign(n_, 0);
  }

  OptResult Run() {
    best_ = std::numeric_limits<std::uint64_t>::max();
    if (n_ == 0) return {0, {}};
    Place(0, 0, 0);
    OptResult out{best_, {}};
    out.partition.blocks.resize(
        *std::max_element(best_block_of_.begin(), best_block_of_.end()) + 1);
    for (NodeId u = 0; u < n_; ++u) {
      out.partition.blocks[best_block_of_[u]].push_back(u);
    }
    out.partition.Canonicalize();
    return out;
  }

 private:
  // Assign node i given `blocks` blocks used so far by nodes < i.
  void Place(std::size_t i, std::size_t blocks, std::uint64_t cost) {
    if (cost >= best_) return;
    if (i == n_) {
      best_ = cost;
      best_block_of_ = block_of_;
      return;
    }
    const std::uint32_t earlier = (1u << i) - 1;
    const std::uint32_t similar = adj_[i] & earlier;
    const int similar_total = std::popcount(similar);
    for (std::size_t b = 0; b <= blocks && b < n_; ++b) {
      const std::uint32_t inside = masks_[b];
      // Similar pairs left outside block b, dissimilar pairs inside it.
      const int cut = similar_total - std::popcount(similar & inside);
      const int kept = std::popcount(~adj_[i] & inside);
      block_of_[i] = b;
      masks_[b] |= 1u << i;
      Place(i + 1, std::max(blocks, b + 1), cost + cut + kept);
      masks_[b] &= ~(1u << i);
    }
  }

  std::size_t n_;
  std::vector<std::uint32_t> adj_;
  std::vector<std::size_t> block_of_;
  std::vector<std::size_t> best_block_of_;
  std::vector<std::uint32_t> masks_;
  std::uint64_t best_ = 0;
};

}  // namespace

OptResult OptCost(const SimilarityOracle& oracle) {
  if (oracle.size() > kOptNodeLimit) {
    throw CapacityError("exhaustive optimum is limited to " +
                        std::to_string(kOptNodeLimit) + " nodes, got " +
                        std::to_string(oracle.size()));
  }
  return OptSearch(oracle).Run();
}

}  // namespace ccstream
