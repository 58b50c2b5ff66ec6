#include "ccstream/io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "ccstream/random.h"

namespace ccstream {

namespace {

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool ParseUnsigned(std::string_view s, std::uint64_t& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void Fail(const std::string& source, std::size_t line,
                       const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

std::ifstream OpenOrThrow(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw ParseError(path + ": cannot open file");
  return in;
}

std::uint64_t ReadU64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void WriteU64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

}  // namespace

Graph ReadEdgeList(std::istream& in, const std::string& source) {
  Graph g;
  bool have_header = false;
  bool seen_edge = false;
  std::uint64_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  constexpr std::uint64_t kMaxNodes = std::uint64_t{1} << 32;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto tokens = Tokens(view);
    if (tokens.empty()) continue;
    if (tokens[0] == "n") {
      if (have_header || seen_edge) {
        Fail(source, line_no, "header must come once, before any edge");
      }
      std::uint64_t n = 0;
      if (tokens.size() != 2 || !ParseUnsigned(tokens[1], n) || n > kMaxNodes) {
        Fail(source, line_no, "expected 'n <count>'");
      }
      g.n = n;
      have_header = true;
      continue;
    }
    std::uint64_t u = 0;
    std::uint64_t v = 0;
    if (tokens.size() != 2 || !ParseUnsigned(tokens[0], u) ||
        !ParseUnsigned(tokens[1], v)) {
      Fail(source, line_no, "expected two non-negative node ids");
    }
    if (u >= kMaxNodes - 1 || v >= kMaxNodes - 1) {
      Fail(source, line_no, "node id too large");
    }
    if (have_header && (u >= g.n || v >= g.n)) {
      Fail(source, line_no,
           "node id outside the declared n = " + std::to_string(g.n));
    }
    seen_edge = true;
    max_id = std::max({max_id, u, v});
    g.edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  if (!have_header) g.n = seen_edge ? max_id + 1 : 0;
  return g;
}

Graph ReadEdgeListFile(const std::string& path) {
  auto in = OpenOrThrow(path, std::ios::in);
  return ReadEdgeList(in, path);
}

void WriteEdgeList(std::ostream& out, const ExplicitGraphOracle& graph) {
  out << "n " << graph.size() << '\n';
  for (const auto& [u, v] : graph.Edges()) out << u << ' ' << v << '\n';
}

Embeddings ReadEmbeddings(std::istream& in, const std::string& source) {
  Embeddings e;
  const std::uint64_t n = ReadU64(in);
  const std::uint64_t dim = ReadU64(in);
  if (!in) throw FormatError(source + ": truncated embedding header");
  if (dim == 0 || n > (std::uint64_t{1} << 32) ||
      dim > (std::uint64_t{1} << 24)) {
    throw FormatError(source + ": implausible shape n = " + std::to_string(n) +
                      ", dim = " + std::to_string(dim));
  }
  e.n = n;
  e.dim = dim;
  e.rows.resize(n * dim);
  for (float& x : e.rows) {
    std::uint32_t bits = 0;
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) {
      throw FormatError(source + ": payload shorter than n * dim = " +
                        std::to_string(n * dim) + " floats");
    }
    bits = static_cast<std::uint32_t>(b[0]) |
           static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 |
           static_cast<std::uint32_t>(b[3]) << 24;
    x = std::bit_cast<float>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(source + ": trailing bytes after n * dim = " +
                      std::to_string(n * dim) + " floats");
  }
  return e;
}

Embeddings ReadEmbeddingsFile(const std::string& path) {
  auto in = OpenOrThrow(path, std::ios::in | std::ios::binary);
  return ReadEmbeddings(in, path);
}

void WriteEmbeddings(std::ostream& out, const Embeddings& e) {
  if (e.rows.size() != e.n * e.dim) {
    throw std::invalid_argument("embedding rows do not match n * dim");
  }
  WriteU64(out, e.n);
  WriteU64(out, e.dim);
  for (float x : e.rows) {
    const auto bits = std::bit_cast<std::uint32_t>(x);
    char b[4];
    for (int i = 0; i < 4; ++i) {
      b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    }
    out.write(b, 4);
  }
}

void WritePoints(std::ostream& out, const L1ThresholdOracle& oracle) {
  for (const SparsePoint& p : oracle.points()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i > 0) out << ' ';
      out << p[i].index << ':' << p[i].value;
    }
    out << '\n';
  }
}

Dataset Ingest(const std::string& path, InputFormat format, double theta) {
  Dataset d;
  if (format == InputFormat::kEdgeList) {
    const Graph g = ReadEdgeListFile(path);
    d.oracle = std::make_unique<ExplicitGraphOracle>(g.n, g.edges);
  } else {
    Embeddings e = ReadEmbeddingsFile(path);
    d.oracle = std::make_unique<EmbeddingOracle>(e.n, e.dim,
                                                 std::move(e.rows), theta);
  }
  d.stream = NodeStream(d.oracle->size());
  return d;
}

void SyntheticSpec::Validate() const {
  auto check = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
  };
  if (kind == Kind::kGnp) {
    check(p, "p");
  } else {
    check(p_in, "p_in");
    check(p_out, "p_out");
    if (clusters == 0) throw std::invalid_argument("clusters must be >= 1");
  }
}

Graph Generate(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(DeriveSeed(spec.seed, seed_tag::kGraph));
  Graph g;
  g.n = spec.n;
  for (NodeId u = 0; u < spec.n; ++u) {
    for (NodeId v = u + 1; v < spec.n; ++v) {
      double p = spec.p;
      if (spec.kind == SyntheticSpec::Kind::kPlanted) {
        p = (u % spec.clusters == v % spec.clusters) ? spec.p_in : spec.p_out;
      }
      if (rng.Bernoulli(p)) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

ExplicitGraphOracle MakeOracle(const Graph& g) {
  return ExplicitGraphOracle(g.n, g.edges);
}

}  // namespace ccstream
