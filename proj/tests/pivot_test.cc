#include "ccstream/pivot.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "test_util.h"

namespace ccstream {
namespace {

using testing::PathGraph;
using testing::RandomGraph;
using testing::RankOrder;
using testing::RefFindPivot;
using testing::RefPrunedPivot;
using testing::SeedWithPrefix;

std::vector<bool> TopFlags(const RankFunction& rf, std::size_t r) {
  std::vector<bool> in_r(rf.size(), false);
  const auto order = RankOrder(rf);
  for (std::size_t i = 0; i < std::min(r, order.size()); ++i) {
    in_r[order[i]] = true;
  }
  return in_r;
}

TEST(PivotOfflineTest, PathWithZeroOnTop) {
  const auto g = PathGraph(3);
  const RankFunction rf(SeedWithPrefix(3, {0, 1, 2}), 3);
  const Clustering c = PivotOffline(g, rf);
  EXPECT_EQ(c.pivot_of, (std::vector<NodeId>{0, 0, 2}));
}

TEST(PivotOfflineTest, EmptyAndComplete) {
  const ExplicitGraphOracle empty(5, {});
  const RankFunction rf(3, 5);
  const Clustering singletons = PivotOffline(empty, rf);
  for (NodeId u = 0; u < 5; ++u) EXPECT_EQ(singletons[u], u);

  std::vector<Edge> edges;
  for (NodeId u = 0; u < 5; ++u) {
    for (NodeId v = u + 1; v < 5; ++v) edges.emplace_back(u, v);
  }
  const ExplicitGraphOracle complete(5, edges);
  const NodeId top = RankOrder(rf)[0];
  for (NodeId p : PivotOffline(complete, rf).pivot_of) EXPECT_EQ(p, top);
}

TEST(PrunedPivotOfflineTest, PathWithTwoOnTop) {
  // 2 is the top pivot and takes 1; 0 is left as a singleton.
  const auto g = PathGraph(3);
  const RankFunction rf(SeedWithPrefix(3, {2, 1, 0}), 3);
  for (int k : {2, 3, 5}) EXPECT_EQ(PrunedPivotOffline(g, rf, k, 0), 0u);
  EXPECT_EQ(PrunedPivotOffline(g, rf, 3, 1), 2u);
  // With k = 1 the first descent exhausts the budget.
  EXPECT_EQ(PrunedPivotOffline(g, rf, 1, 0), 0u);
  EXPECT_EQ(PrunedPivotOffline(g, rf, 1, 1), 1u);
  EXPECT_EQ(PrunedPivotStream(NodeStream(3), 0, rf, 2, g).pivot, 0u);
}

TEST(PrunedPivotOfflineTest, TopNodeIsItsOwnPivot) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = RandomGraph(10, 0.5, seed);
    const RankFunction rf(seed, 10);
    const NodeId top = RankOrder(rf)[0];
    EXPECT_EQ(PrunedPivotOffline(g, rf, 1, top), top);
    const auto run = PrunedPivotStream(NodeStream(10), top, rf, 3, g);
    EXPECT_EQ(run.pivot, top);
    EXPECT_EQ(run.accounting.passes_used, 1);
  }
}

TEST(PrunedPivotOfflineTest, MatchesReferenceTranscription) {
  for (std::uint64_t gs = 0; gs < 60; ++gs) {
    const auto g = RandomGraph(9, 0.4, 100 + gs);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const RankFunction rf(seed, 9);
      for (int k : {1, 2, 3, 8}) {
        const auto want = RefPrunedPivot(g, rf, k);
        for (NodeId u = 0; u < 9; ++u) {
          ASSERT_EQ(PrunedPivotOffline(g, rf, k, u), want[u])
              << "graph " << gs << " seed " << seed << " k " << k;
        }
      }
    }
  }
}

TEST(PrunedPivotOfflineTest, LargeBudgetEqualsPivot) {
  // The budget is shared by the whole call tree, which revisits nodes, so
  // k = n is not always enough; 2^n bounds the number of descending paths.
  for (std::uint64_t gs = 0; gs < 100; ++gs) {
    const std::size_t n = 4 + gs % 7;
    const auto g = RandomGraph(n, 0.45, gs);
    const RankFunction rf(gs * 7 + 1, n);
    const Clustering pivot = PivotOffline(g, rf);
    const Clustering pruned =
        PrunedPivotClustering(g, rf, 1 << n);
    EXPECT_EQ(pivot.pivot_of, pruned.pivot_of) << "graph " << gs;
  }
}

TEST(PrunedPivotOfflineTest, BudgetOfNCanStillTimeOut) {
  int differing = 0;
  for (std::uint64_t gs = 0; gs < 100; ++gs) {
    const std::size_t n = 4 + gs % 7;
    const auto g = RandomGraph(n, 0.45, gs);
    const RankFunction rf(gs * 7 + 1, n);
    differing += PivotOffline(g, rf).pivot_of !=
                 PrunedPivotClustering(g, rf, static_cast<int>(n)).pivot_of;
  }
  EXPECT_GT(differing, 0);
}

TEST(PrunedPivotOfflineTest, PivotsAreSelfPivoting) {
  for (std::uint64_t gs = 0; gs < 100; ++gs) {
    const auto g = RandomGraph(12, 0.3, gs);
    const RankFunction rf(gs, 12);
    for (int k : {1, 2, 4}) {
      const Clustering c = PrunedPivotClustering(g, rf, k);
      for (NodeId u = 0; u < 12; ++u) {
        if (c[u] != u) {
          EXPECT_EQ(c[c[u]], c[u]);
          EXPECT_TRUE(g.Similar(u, c[u]));
        }
      }
    }
  }
}

TEST(ReferenceSetTest, BuilderMatchesOfflineTopR) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ExplicitGraphOracle g(50, {});
    const RankFunction rf(seed, 50);
    Rng rng(seed);
    std::vector<NodeId> order(50);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.Below(i + 1)]);
    }
    RunContext ctx(g);
    Accounting acc;
    const ReferenceSet built =
        BuildReferenceSet(NodeStream(order), rf, 5, ctx, &acc);
    const auto top = RankOrder(rf);
    ASSERT_EQ(built.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(built.members()[i].node(), top[i]);
    }
    EXPECT_LE(acc.peak_words, 10);
    EXPECT_EQ(acc.passes_used, 1);
  }
}

TEST(ReferenceSetTest, EdgeSizes) {
  const ExplicitGraphOracle g(8, {});
  const RankFunction rf(4, 8);
  RunContext ctx(g);
  EXPECT_EQ(BuildReferenceSet(NodeStream(8), rf, 20, ctx).size(), 8u);
  const ReferenceSet one = BuildReferenceSet(NodeStream(8), rf, 1, ctx);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.members()[0].node(), RankOrder(rf)[0]);
  const ReferenceSet top3 = ReferenceSet::TopRanked(rf, 3);
  const auto order = RankOrder(rf);
  for (NodeId u = 0; u < 8; ++u) {
    const bool member =
        std::find(order.begin(), order.begin() + 3, u) != order.begin() + 3;
    EXPECT_EQ(top3.Contains(rf.key(u)), member);
  }
}

TEST(FindPivotTest, FullReferenceEqualsPrunedPivot) {
  for (std::uint64_t gs = 0; gs < 80; ++gs) {
    const auto g = RandomGraph(10, 0.35, 500 + gs);
    const RankFunction rf(gs, 10);
    const ReferenceSet all = ReferenceSet::TopRanked(rf, 10);
    for (int k : {1, 2, 3, 8}) {
      for (NodeId u = 0; u < 10; ++u) {
        ASSERT_EQ(FindPivot(u, rf, all, k, g),
                  PrunedPivotOffline(g, rf, k, u));
      }
    }
  }
}

TEST(FindPivotTest, MatchesReferenceForPartialR) {
  for (std::uint64_t gs = 0; gs < 80; ++gs) {
    const auto g = RandomGraph(10, 0.35, 900 + gs);
    const RankFunction rf(gs + 3, 10);
    for (std::size_t r : {0u, 1u, 3u, 6u}) {
      const ReferenceSet R = ReferenceSet::TopRanked(rf, r);
      for (int k : {1, 2, 4}) {
        RefFindPivot ref(g, rf, TopFlags(rf, r), k);
        for (NodeId u = 0; u < 10; ++u) {
          const auto got = FindPivotDetailed(u, rf, R, k, g);
          const auto want = ref(u);
          ASSERT_EQ(got.pivot, want.pivot) << "r " << r << " k " << k;
          ASSERT_EQ(got.timed_out, want.timed_out);
        }
      }
    }
  }
}

TEST(FindPivotTest, NoNeighbourInRIsNull) {
  const auto g = PathGraph(4);
  const RankFunction rf(SeedWithPrefix(4, {0}), 4);
  const ReferenceSet R = ReferenceSet::TopRanked(rf, 1);
  EXPECT_EQ(FindPivot(0, rf, R, 3, g), std::optional<NodeId>(0));
  EXPECT_EQ(FindPivot(3, rf, R, 3, g), std::nullopt);
  EXPECT_EQ(FindPivot(1, rf, R, 3, g), std::optional<NodeId>(0));
  EXPECT_EQ(FindPivot(2, rf, ReferenceSet(), 3, g), std::nullopt);
}

TEST(FindPivotTest, DeterminedPivotsAgreeAcrossReferenceSizes) {
  for (std::uint64_t gs = 0; gs < 60; ++gs) {
    const auto g = RandomGraph(12, 0.3, 2000 + gs);
    const RankFunction rf(gs, 12);
    for (int k : {2, 3, 6}) {
      for (NodeId u = 0; u < 12; ++u) {
        const NodeId truth = PrunedPivotOffline(g, rf, k, u);
        for (std::size_t r = 1; r <= 12; ++r) {
          const auto out =
              FindPivotDetailed(u, rf, ReferenceSet::TopRanked(rf, r), k, g);
          if (out.pivot && !out.timed_out) EXPECT_EQ(*out.pivot, truth);
        }
      }
    }
  }
}

TEST(PrunedPivotStreamTest, EquivalenceSweep) {
  // 200 graphs x 20 seeds x k in {1, 2, 3, 8}, every node.
  for (std::uint64_t gs = 0; gs < 200; ++gs) {
    const auto g = RandomGraph(8, 0.4, 7000 + gs);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const RankFunction rf(seed * 131 + gs, 8);
      Rng rng(seed);
      std::vector<NodeId> order(8);
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = 7; i > 0; --i) {
        std::swap(order[i], order[rng.Below(i + 1)]);
      }
      const NodeStream stream(order);
      for (int k : {1, 2, 3, 8}) {
        for (NodeId u = 0; u < 8; ++u) {
          const auto run = PrunedPivotStream(stream, u, rf, k, g);
          ASSERT_EQ(run.pivot, PrunedPivotOffline(g, rf, k, u))
              << "graph " << gs << " seed " << seed << " k " << k;
          ASSERT_LE(run.accounting.passes_used, k);
          ASSERT_LE(run.accounting.peak_words, 2 * (k + 1) + 2);
        }
      }
    }
  }
}

TEST(PrunedPivotStreamTest, QueriesOnlyTouchThePath) {
  const auto g = RandomGraph(30, 0.2, 1);
  const RankFunction rf(2, 30);
  for (NodeId u = 0; u < 30; ++u) {
    const auto run = PrunedPivotStream(NodeStream(30), u, rf, 4, g);
    // Each pass compares each item with at most k + 1 stored path nodes.
    EXPECT_LE(run.accounting.oracle_calls,
              static_cast<std::uint64_t>(run.accounting.passes_used) * 30 * 5);
  }
}

}  // namespace
}  // namespace ccstream
