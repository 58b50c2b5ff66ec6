#include "ccstream/pivot.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ccstream {

namespace {

void CheckBudget(int k) {
  if (k < 1) {
    throw std::invalid_argument("recursion budget k must be >= 1, got " +
                                std::to_string(k));
  }
}

std::vector<NodeId> RankOrder(const RankFunction& rf) {
  std::vector<NodeId> order(rf.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return rf.Less(a, b); });
  return order;
}

// Reference recursion over the full neighbourhood. nullopt means timeout.
class PrunedPivotRecursion {
 public:
  PrunedPivotRecursion(const SimilarityOracle& oracle, const RankFunction& rf,
                       int k)
      : oracle_(oracle), rf_(rf), k_(k) {}

  std::optional<NodeId> Call(NodeId u) {
    if (calls_ >= k_) return std::nullopt;
    std::vector<NodeId> higher;
    for (NodeId v : oracle_.Neighbors(u)) {
      if (rf_.Less(v, u)) higher.push_back(v);
    }
    std::sort(higher.begin(), higher.end(),
              [&](NodeId a, NodeId b) { return rf_.Less(a, b); });
    for (NodeId v : higher) {
      ++calls_;
      const std::optional<NodeId> p = Call(v);
      if (!p || *p == v) return p;
    }
    return u;
  }

 private:
  const SimilarityOracle& oracle_;
  const RankFunction& rf_;
  int k_;
  int calls_ = 0;
};

enum class Outcome { kPivot, kNull, kTimeout };

struct RecResult {
  Outcome outcome;
  NodeId node = 0;
};

class FindPivotRecursion {
 public:
  FindPivotRecursion(const RankFunction& rf, const ReferenceSet& reference,
                     int k, const SimilarityOracle& oracle)
      : rf_(rf), reference_(reference), k_(k), oracle_(oracle) {}

  RecResult Call(NodeId u, const RankKey& key_u) {
    if (calls_ >= k_) return {Outcome::kTimeout};
    // Q(u): members of R ranked at or above u, best first.
    for (const RankedNode& member : reference_.members()) {
      if (member.key > key_u) break;
      const NodeId v = member.node();
      if (v == u) return {Outcome::kPivot, u};
      if (!oracle_.Similar(u, v)) continue;
      ++calls_;
      const RecResult p = Call(v, member.key);
      if (p.outcome == Outcome::kTimeout || p.node == v) return p;
    }
    return {Outcome::kNull};
  }

 private:
  const RankFunction& rf_;
  const ReferenceSet& reference_;
  int k_;
  const SimilarityOracle& oracle_;
  int calls_ = 0;
};

}  // namespace

ReferenceSet ReferenceSet::TopRanked(const RankFunction& rf, std::size_t r) {
  std::vector<RankedNode> members;
  for (NodeId u : RankOrder(rf)) {
    if (members.size() >= r) break;
    members.push_back({rf.key(u)});
  }
  return ReferenceSet(std::move(members));
}

ReferenceSetBuilder::ReferenceSetBuilder(const RankFunction& rf, std::size_t r,
                                         WordCensus& census)
    : rf_(rf), r_(r), words_(census) {
  if (r == 0) throw std::invalid_argument("reference set size must be >= 1");
}

namespace {
bool HeapLess(const RankedNode& a, const RankedNode& b) { return a.key < b.key; }
}  // namespace

void ReferenceSetBuilder::OnItem(NodeId item) {
  const RankedNode node{rf_.key(item)};
  if (heap_.size() < r_) {
    heap_.push_back(node);
    std::push_heap(heap_.begin(), heap_.end(), HeapLess);
    words_.Set(2 * static_cast<std::int64_t>(heap_.size()));
  } else if (node.key < heap_.front().key) {
    std::pop_heap(heap_.begin(), heap_.end(), HeapLess);
    heap_.back() = node;
    std::push_heap(heap_.begin(), heap_.end(), HeapLess);
  }
}

void ReferenceSetBuilder::EndPass(int /*pass*/) {
  std::sort_heap(heap_.begin(), heap_.end(), HeapLess);
  result_ = ReferenceSet(std::move(heap_));
  heap_.clear();
  words_.Set(result_.words());
}

ReferenceSet BuildReferenceSet(const NodeStream& stream, const RankFunction& rf,
                               std::size_t r, RunContext& ctx,
                               Accounting* accounting) {
  ReferenceSetBuilder builder(rf, r, ctx.census());
  PassConsumer* consumers[] = {&builder};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx);
  if (accounting != nullptr) *accounting = acc;
  return builder.result();
}

Clustering PivotOffline(const SimilarityOracle& oracle,
                        const RankFunction& rf) {
  const std::size_t n = oracle.size();
  constexpr NodeId kUnassigned = ~NodeId{0};
  Clustering c{std::vector<NodeId>(n, kUnassigned)};
  for (NodeId u : RankOrder(rf)) {
    if (c.pivot_of[u] != kUnassigned) continue;
    c.pivot_of[u] = u;
    for (NodeId v : oracle.Neighbors(u)) {
      if (c.pivot_of[v] == kUnassigned) c.pivot_of[v] = u;
    }
  }
  return c;
}

NodeId PrunedPivotOffline(const SimilarityOracle& oracle,
                          const RankFunction& rf, int k, NodeId u) {
  CheckBudget(k);
  PrunedPivotRecursion rec(oracle, rf, k);
  return rec.Call(u).value_or(u);
}

Clustering PrunedPivotClustering(const SimilarityOracle& oracle,
                                 const RankFunction& rf, int k) {
  Clustering c{std::vector<NodeId>(oracle.size())};
  for (NodeId u = 0; u < oracle.size(); ++u) {
    c.pivot_of[u] = PrunedPivotOffline(oracle, rf, k, u);
  }
  return c;
}

FindPivotOutcome FindPivotDetailed(NodeId u, const RankFunction& rf,
                                   const ReferenceSet& reference, int k,
                                   const SimilarityOracle& oracle) {
  CheckBudget(k);
  FindPivotRecursion rec(rf, reference, k, oracle);
  const RecResult p = rec.Call(u, rf.key(u));
  switch (p.outcome) {
    case Outcome::kTimeout:
      return {u, true};
    case Outcome::kNull:
      return {std::nullopt, false};
    case Outcome::kPivot:
      break;
  }
  return {p.node, false};
}

StreamingPrunedPivot::StreamingPrunedPivot(NodeId u, const RankFunction& rf,
                                           int k,
                                           const SimilarityOracle& oracle,
                                           WordCensus& census)
    : u_(u), rf_(rf), k_(k), oracle_(oracle), words_(census) {
  CheckBudget(k);
  if (u >= oracle.size()) {
    throw std::out_of_range("query node " + std::to_string(u) +
                            " out of range");
  }
  path_.push_back({u, u});
  words_.Set(2);
}

void StreamingPrunedPivot::OnItem(NodeId item) {
  const RankKey key = rf_.key(item);
  const std::size_t len = path_.size();
  for (std::size_t i = 0; i < len; ++i) {
    Entry& e = path_[i];
    // Candidate must rank strictly below x_{i+1} (vacuous for the last
    // entry) and strictly above the current y_i.
    if (i + 1 < len && !(rf_.key(path_[i + 1].x) < key)) continue;
    if (!(key < rf_.key(e.y))) continue;
    if (oracle_.Similar(e.x, item)) e.y = item;
  }
}

void StreamingPrunedPivot::EndPass(int pass) {
  passes_ = pass;
  while (path_.back().x == path_.back().y) {
    if (path_.size() <= 2) {
      Resolve(path_.back().x);
      return;
    }
    path_.pop_back();
    path_.pop_back();
  }
  const Entry last = path_.back();
  path_.back() = {last.x, last.x};
  path_.push_back({last.y, last.y});
  words_.Set(2 * static_cast<std::int64_t>(path_.size()));
  if (pass >= k_) Resolve(u_);
}

void StreamingPrunedPivot::Resolve(NodeId pivot) {
  result_ = pivot;
  path_.clear();
  path_.shrink_to_fit();
  words_.Set(1);
}

StreamPivotResult PrunedPivotStream(const NodeStream& stream, NodeId u,
                                    const RankFunction& rf, int k,
                                    const SimilarityOracle& oracle) {
  RunContext ctx(oracle);
  StreamingPrunedPivot pivot(u, rf, k, ctx.oracle(), ctx.census());
  PassConsumer* consumers[] = {&pivot};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx);
  return {*pivot.result(), acc};
}

}  // namespace ccstream
