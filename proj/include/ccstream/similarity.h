#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ccstream {

// Arrival position of a node in the stream: sigma_{id + 1}.
using NodeId = std::uint32_t;

using Edge = std::pair<NodeId, NodeId>;

// The only channel through which algorithms observe edges. Answers are
// symmetric and reflexive (sim(u, u) is always true). Every call to Similar()
// is counted, self-queries included.
//
// Implementations are immutable after construction apart from the counter,
// which is atomic so one oracle can back several concurrent runs.
class SimilarityOracle {
 public:
  explicit SimilarityOracle(std::size_t n) : n_(n) {}
  virtual ~SimilarityOracle() = default;

  SimilarityOracle(const SimilarityOracle&) = delete;
  SimilarityOracle& operator=(const SimilarityOracle&) = delete;
  SimilarityOracle(SimilarityOracle&& other) noexcept
      : n_(other.n_), queries_(other.queries_.load()) {}

  std::size_t size() const { return n_; }

  // Throws std::out_of_range for ids outside [0, size()).
  bool Similar(NodeId u, NodeId v) const;

  std::uint64_t query_count() const {
    return queries_.load(std::memory_order_relaxed);
  }
  void ResetQueryCount() { queries_.store(0, std::memory_order_relaxed); }

  // All v != u with sim(u, v), ascending. Not counted; meant for offline
  // reference algorithms and tests, never for streaming code.
  virtual std::vector<NodeId> Neighbors(NodeId u) const;

 protected:
  // Called with u != v, both in range.
  virtual bool SimilarDistinct(NodeId u, NodeId v) const = 0;

  void CheckNode(NodeId u) const;

 private:
  std::size_t n_;
  mutable std::atomic<std::uint64_t> queries_{0};
};

// |{v != u : sim(u, v)}|. Test-only.
std::size_t Degree(const SimilarityOracle& oracle, NodeId u);

// Explicit undirected graph. Self-loops and duplicate edges are dropped.
class ExplicitGraphOracle final : public SimilarityOracle {
 public:
  ExplicitGraphOracle(std::size_t n, std::span<const Edge> edges);
  ExplicitGraphOracle(ExplicitGraphOracle&&) noexcept = default;

  std::vector<NodeId> Neighbors(NodeId u) const override;
  std::span<const NodeId> adjacency(NodeId u) const { return adjacency_[u]; }
  std::size_t edge_count() const { return edge_count_; }
  std::vector<Edge> Edges() const;

 protected:
  bool SimilarDistinct(NodeId u, NodeId v) const override;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  // Dense n x n bit matrix for small graphs, empty otherwise.
  std::vector<std::uint64_t> bits_;
  std::size_t row_words_ = 0;
  std::size_t edge_count_ = 0;
};

// sim(u, v) iff cosine(vec_u, vec_v) > theta. A zero vector has cosine -1
// with everything.
class EmbeddingOracle final : public SimilarityOracle {
 public:
  // `rows` holds n * dim floats, row-major.
  EmbeddingOracle(std::size_t n, std::size_t dim, std::vector<float> rows,
                  double theta);
  EmbeddingOracle(EmbeddingOracle&&) noexcept = default;

  std::size_t dim() const { return dim_; }
  double theta() const { return theta_; }
  double Cosine(NodeId u, NodeId v) const;
  std::span<const float> row(NodeId u) const;

  // Same vectors, different threshold.
  EmbeddingOracle WithTheta(double theta) const;

 protected:
  bool SimilarDistinct(NodeId u, NodeId v) const override;

 private:
  std::size_t dim_;
  std::vector<float> rows_;
  std::vector<double> norms_;
  double theta_;
};

struct SparseEntry {
  std::uint32_t index;
  double value;
};

// Sorted by index, no zero values.
using SparsePoint = std::vector<SparseEntry>;

SparsePoint MakeSparsePoint(std::vector<SparseEntry> entries);

double L1Distance(const SparsePoint& p, const SparsePoint& q);

// sim(p, q) iff l1(p, q) <= 1. Coordinates that are integers (or integers
// plus/minus one) are represented exactly, so the boundary case l1 == 1 is
// decided without rounding error.
class L1ThresholdOracle final : public SimilarityOracle {
 public:
  explicit L1ThresholdOracle(std::vector<SparsePoint> points);
  L1ThresholdOracle(L1ThresholdOracle&&) noexcept = default;

  const SparsePoint& point(NodeId u) const { return points_[u]; }
  std::span<const SparsePoint> points() const { return points_; }

 protected:
  bool SimilarDistinct(NodeId u, NodeId v) const override;

 private:
  std::vector<SparsePoint> points_;
};

// Per-run view over a shared oracle: counts its own queries and forwards to
// the shared one (which keeps the global count).
class CountingOracle final : public SimilarityOracle {
 public:
  explicit CountingOracle(const SimilarityOracle& base)
      : SimilarityOracle(base.size()), base_(&base) {}

  std::vector<NodeId> Neighbors(NodeId u) const override {
    return base_->Neighbors(u);
  }
  const SimilarityOracle& base() const { return *base_; }

 protected:
  bool SimilarDistinct(NodeId u, NodeId v) const override {
    return base_->Similar(u, v);
  }

 private:
  const SimilarityOracle* base_;
};

}  // namespace ccstream
