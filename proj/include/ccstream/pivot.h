#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccstream/rank.h"
#include "ccstream/similarity.h"
#include "ccstream/stream.h"

namespace ccstream {

struct RankedNode {
  RankKey key;
  NodeId node() const { return key.node; }
};

// The highest-ranked nodes R, kept in rank order. Because R is always a rank
// prefix, membership is a single key comparison against the worst member.
class ReferenceSet {
 public:
  ReferenceSet() = default;

  // Offline construction: the min(r, n) highest-ranked nodes of [0, n).
  static ReferenceSet TopRanked(const RankFunction& rf, std::size_t r);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const RankedNode> members() const { return members_; }
  bool Contains(const RankKey& key) const {
    return !members_.empty() && key <= members_.back().key;
  }
  // Two words per member: node id and rank key.
  std::int64_t words() const {
    return 2 * static_cast<std::int64_t>(members_.size());
  }

 private:
  friend class ReferenceSetBuilder;
  explicit ReferenceSet(std::vector<RankedNode> sorted)
      : members_(std::move(sorted)) {}

  std::vector<RankedNode> members_;
};

// One pass: keeps the r smallest keys seen so far in a bounded max-heap.
class ReferenceSetBuilder final : public PassConsumer {
 public:
  ReferenceSetBuilder(const RankFunction& rf, std::size_t r,
                      WordCensus& census);

  std::string_view name() const override { return "reference_set"; }
  int declared_passes() const override { return 1; }
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  // Available after the pass. The builder keeps R's words in the census for
  // as long as it lives.
  const ReferenceSet& result() const { return result_; }

 private:
  const RankFunction& rf_;
  std::size_t r_;
  std::vector<RankedNode> heap_;
  ReferenceSet result_;
  TrackedWords words_;
};

// Streams once over `stream` to collect R.
ReferenceSet BuildReferenceSet(const NodeStream& stream, const RankFunction& rf,
                               std::size_t r, RunContext& ctx,
                               Accounting* accounting = nullptr);

// pivot_of[u] for every node; pivots map to themselves.
struct Clustering {
  std::vector<NodeId> pivot_of;

  std::size_t size() const { return pivot_of.size(); }
  NodeId operator[](NodeId u) const { return pivot_of[u]; }
};

// Classic Pivot: nodes in rank order, an unassigned node becomes a pivot and
// claims its unassigned neighbours. Offline (uses neighbour enumeration).
Clustering PivotOffline(const SimilarityOracle& oracle, const RankFunction& rf);

// Recursive PrunedPivot with one global budget of k recursive calls. On
// timeout the query node is its own (singleton) pivot. Offline reference.
NodeId PrunedPivotOffline(const SimilarityOracle& oracle,
                          const RankFunction& rf, int k, NodeId u);

Clustering PrunedPivotClustering(const SimilarityOracle& oracle,
                                 const RankFunction& rf, int k);

struct FindPivotOutcome {
  // nullopt: the pivot cannot be determined from R alone.
  std::optional<NodeId> pivot;
  bool timed_out = false;
};

// PrunedPivot restricted to R: only nodes of R are ever queried, and only
// through the oracle (no stream access).
FindPivotOutcome FindPivotDetailed(NodeId u, const RankFunction& rf,
                                   const ReferenceSet& reference, int k,
                                   const SimilarityOracle& oracle);

inline std::optional<NodeId> FindPivot(NodeId u, const RankFunction& rf,
                                       const ReferenceSet& reference, int k,
                                       const SimilarityOracle& oracle) {
  return FindPivotDetailed(u, rf, reference, k, oracle).pivot;
}

// Streaming PrunedPivot for one query node. Keeps the query path as a list
// of (x_i, y_i) entries, where y_i is the best-ranked neighbour of x_i ranked
// strictly between x_{i+1} and x_i. Uses at most k passes and O(k) words;
// finishes as soon as the pivot is known.
class StreamingPrunedPivot final : public PassConsumer {
 public:
  StreamingPrunedPivot(NodeId u, const RankFunction& rf, int k,
                       const SimilarityOracle& oracle, WordCensus& census);

  std::string_view name() const override { return "pruned_pivot"; }
  int declared_passes() const override { return k_; }
  bool finished() const override { return result_.has_value(); }
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  NodeId query() const { return u_; }
  std::optional<NodeId> result() const { return result_; }
  int passes_consumed() const { return passes_; }

 private:
  struct Entry {
    NodeId x;
    NodeId y;
  };
  void Resolve(NodeId pivot);

  NodeId u_;
  const RankFunction& rf_;
  int k_;
  const SimilarityOracle& oracle_;
  std::vector<Entry> path_;
  std::optional<NodeId> result_;
  int passes_ = 0;
  TrackedWords words_;
};

struct StreamPivotResult {
  NodeId pivot;
  Accounting accounting;
};

StreamPivotResult PrunedPivotStream(const NodeStream& stream, NodeId u,
                                    const RankFunction& rf, int k,
                                    const SimilarityOracle& oracle);

}  // namespace ccstream
