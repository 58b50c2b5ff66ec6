#include "ccstream/similarity.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccstream {

namespace {

constexpr std::size_t kDenseLimit = 8192;

}  // namespace

bool SimilarityOracle::Similar(NodeId u, NodeId v) const {
  CheckNode(u);
  CheckNode(v);
  queries_.fetch_add(1, std::memory_order_relaxed);
  if (u == v) return true;
  return SimilarDistinct(u, v);
}

void SimilarityOracle::CheckNode(NodeId u) const {
  if (u >= n_) {
    throw std::out_of_range("node id " + std::to_string(u) +
                            " out of range for n = " + std::to_string(n_));
  }
}

std::vector<NodeId> SimilarityOracle::Neighbors(NodeId u) const {
  CheckNode(u);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n_; ++v) {
    if (v != u && SimilarDistinct(u, v)) out.push_back(v);
  }
  return out;
}

std::size_t Degree(const SimilarityOracle& oracle, NodeId u) {
  return oracle.Neighbors(u).size();
}

ExplicitGraphOracle::ExplicitGraphOracle(std::size_t n,
                                         std::span<const Edge> edges)
    : SimilarityOracle(n), adjacency_(n) {
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::out_of_range("edge (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") out of range for n = " +
                              std::to_string(n));
    }
    if (u == v) continue;
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    edge_count_ += list.size();
  }
  edge_count_ /= 2;

  if (n <= kDenseLimit) {
    row_words_ = (n + 63) / 64;
    bits_.assign(n * row_words_, 0);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : adjacency_[u]) {
        bits_[u * row_words_ + v / 64] |= std::uint64_t{1} << (v % 64);
      }
    }
  }
}

std::vector<NodeId> ExplicitGraphOracle::Neighbors(NodeId u) const {
  CheckNode(u);
  return adjacency_[u];
}

std::vector<Edge> ExplicitGraphOracle::Edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool ExplicitGraphOracle::SimilarDistinct(NodeId u, NodeId v) const {
  if (!bits_.empty()) {
    return (bits_[u * row_words_ + v / 64] >> (v % 64)) & 1;
  }
  const auto& list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), v);
}

EmbeddingOracle::EmbeddingOracle(std::size_t n, std::size_t dim,
                                 std::vector<float> rows, double theta)
    : SimilarityOracle(n), dim_(dim), rows_(std::move(rows)), theta_(theta) {
  if (rows_.size() != n * dim) {
    throw std::invalid_argument(
        "embedding rows hold " + std::to_string(rows_.size()) +
        " values, expected n * dim = " + std::to_string(n * dim));
  }
  norms_.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    double sq = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double x = rows_[u * dim + d];
      sq += x * x;
    }
    norms_[u] = std::sqrt(sq);
  }
}

std::span<const float> EmbeddingOracle::row(NodeId u) const {
  CheckNode(u);
  return std::span<const float>(rows_).subspan(u * dim_, dim_);
}

double EmbeddingOracle::Cosine(NodeId u, NodeId v) const {
  CheckNode(u);
  CheckNode(v);
  if (norms_[u] == 0.0 || norms_[v] == 0.0) return -1.0;
  const float* a = rows_.data() + u * dim_;
  const float* b = rows_.data() + v * dim_;
  double dot = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    dot += static_cast<double>(a[d]) * static_cast<double>(b[d]);
  }
  return std::clamp(dot / (norms_[u] * norms_[v]), -1.0, 1.0);
}

EmbeddingOracle EmbeddingOracle::WithTheta(double theta) const {
  return EmbeddingOracle(size(), dim_, rows_, theta);
}

bool EmbeddingOracle::SimilarDistinct(NodeId u, NodeId v) const {
  return Cosine(u, v) > theta_;
}

SparsePoint MakeSparsePoint(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) {
              return a.index < b.index;
            });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].index == entries[i - 1].index) {
      throw std::invalid_argument("duplicate coordinate index " +
                                  std::to_string(entries[i].index));
    }
  }
  SparsePoint out;
  for (const auto& e : entries) {
    if (e.value != 0.0) out.push_back(e);
  }
  return out;
}

double L1Distance(const SparsePoint& p, const SparsePoint& q) {
  double sum = 0.0;
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->index < b->index)) {
      sum += std::abs(a->value);
      ++a;
    } else if (a == p.end() || b->index < a->index) {
      sum += std::abs(b->value);
      ++b;
    } else {
      sum += std::abs(a->value - b->value);
      ++a;
      ++b;
    }
  }
  return sum;
}

L1ThresholdOracle::L1ThresholdOracle(std::vector<SparsePoint> points)
    : SimilarityOracle(points.size()), points_(std::move(points)) {}

bool L1ThresholdOracle::SimilarDistinct(NodeId u, NodeId v) const {
  return L1Distance(points_[u], points_[v]) <= 1.0;
}

}  // namespace ccstream
