#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "ccstream/errors.h"
#include "ccstream/similarity.h"
#include "ccstream/stream.h"

namespace ccstream {

struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

// Edge list: one "u v" pair per line, optional "n <count>" header before the
// first edge, '#' comments and blank lines ignored. Self-loops and duplicate
// edges are dropped by the oracle. Without a header n = max id + 1.
// Throws ParseError naming `source` and the line on malformed input.
Graph ReadEdgeList(std::istream& in, const std::string& source = "<input>");
Graph ReadEdgeListFile(const std::string& path);
// Writes the header and each edge once (u < v), sorted.
void WriteEdgeList(std::ostream& out, const ExplicitGraphOracle& graph);

// Binary embeddings: little-endian u64 n, u64 dim, then n * dim float32
// row-major. Throws FormatError when the payload size disagrees.
struct Embeddings {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<float> rows;
};
Embeddings ReadEmbeddings(std::istream& in,
                          const std::string& source = "<input>");
Embeddings ReadEmbeddingsFile(const std::string& path);
void WriteEmbeddings(std::ostream& out, const Embeddings& e);

// Sparse points, one per line as "index:value" tokens (blank line for the
// origin).
void WritePoints(std::ostream& out, const L1ThresholdOracle& oracle);

enum class InputFormat { kEdgeList, kEmbeddings };

struct Dataset {
  NodeStream stream{0};
  std::unique_ptr<SimilarityOracle> oracle;
};

// Stream order is file order (node ids 0..n-1).
Dataset Ingest(const std::string& path, InputFormat format, double theta = 0);

// Synthetic graphs; deterministic in the seed.
struct SyntheticSpec {
  enum class Kind { kGnp, kPlanted };
  Kind kind = Kind::kGnp;
  std::size_t n = 0;
  double p = 0.0;             // gnp
  std::size_t clusters = 1;   // planted: node i is in cluster i % clusters
  double p_in = 1.0;          // planted
  double p_out = 0.0;         // planted
  std::uint64_t seed = 0;

  // Throws std::invalid_argument for probabilities outside [0, 1] or
  // clusters == 0.
  void Validate() const;
};

Graph Generate(const SyntheticSpec& spec);
ExplicitGraphOracle MakeOracle(const Graph& g);

}  // namespace ccstream
