// Command-line front end: ingestion, generators, single runs, sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccstream/estimators.h"
#include "ccstream/exact.h"
#include "ccstream/experiment.h"
#include "ccstream/gadgets.h"
#include "ccstream/io.h"
#include "ccstream/pivot.h"

namespace {

using namespace ccstream;

struct InputOptions {
  std::string path;
  std::string input_format = "edgelist";
  double theta = 0.5;
  std::string planted;  // "n,clusters,p_in,p_out"
  std::string gnp;      // "n,p"
  std::uint64_t graph_seed = 1;
};

struct ParamOptions {
  int k = 15;
  double alpha = 0.5;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string space = "theory";
  bool normalize = false;
  bool count_pass = false;
  int reps = 1;
  int workers = 1;
  bool timing = false;
  int boost = 1;
  std::uint64_t pairs = 0;
  std::string format = "text";
  std::string out;
};

std::vector<double> SplitNumbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) {
      throw std::invalid_argument("not a number: '" + item + "'");
    }
    out.push_back(x);
  }
  return out;
}

std::vector<bool> ParseBits(const std::string& text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may only contain 0 and 1: '" +
                                  text + "'");
    }
    bits.push_back(c == '1');
  }
  return bits;
}

SpaceConfig ParseSpace(const std::string& text) {
  SpaceConfig s;
  if (text == "theory") return s;
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("--space expects theory, budget=F or test=C");
  }
  const std::string mode = text.substr(0, eq);
  s.param = std::stod(text.substr(eq + 1));
  if (mode == "budget") {
    s.mode = SpaceMode::kBudget;
  } else if (mode == "test") {
    s.mode = SpaceMode::kTest;
  } else {
    throw std::invalid_argument("unknown space mode '" + mode + "'");
  }
  return s;
}

EstimatorParams ToParams(const ParamOptions& o) {
  EstimatorParams p;
  p.k = o.k;
  p.alpha = o.alpha;
  p.epsilon = o.epsilon;
  p.seed = o.seed;
  p.space = ParseSpace(o.space);
  p.normalize_output = o.normalize;
  p.Validate();
  return p;
}

SyntheticSpec ToSpec(const InputOptions& in) {
  SyntheticSpec spec;
  spec.seed = in.graph_seed;
  if (!in.planted.empty()) {
    const auto v = SplitNumbers(in.planted);
    if (v.size() != 4) {
      throw std::invalid_argument("--planted expects n,clusters,p_in,p_out");
    }
    spec.kind = SyntheticSpec::Kind::kPlanted;
    spec.n = static_cast<std::size_t>(v[0]);
    spec.clusters = static_cast<std::size_t>(v[1]);
    spec.p_in = v[2];
    spec.p_out = v[3];
  } else {
    const auto v = SplitNumbers(in.gnp);
    if (v.size() != 2) throw std::invalid_argument("--gnp expects n,p");
    spec.kind = SyntheticSpec::Kind::kGnp;
    spec.n = static_cast<std::size_t>(v[0]);
    spec.p = v[1];
  }
  return spec;
}

std::unique_ptr<SimilarityOracle> LoadOracle(const InputOptions& in) {
  const int sources = !in.path.empty() + !in.planted.empty() + !in.gnp.empty();
  if (sources != 1) {
    throw std::invalid_argument(
        "give exactly one of --input, --planted, --gnp");
  }
  if (!in.path.empty()) {
    InputFormat format;
    if (in.input_format == "edgelist") {
      format = InputFormat::kEdgeList;
    } else if (in.input_format == "embeddings") {
      format = InputFormat::kEmbeddings;
    } else {
      throw std::invalid_argument("unknown input format '" + in.input_format +
                                  "'");
    }
    return std::move(Ingest(in.path, format, in.theta).oracle);
  }
  return std::make_unique<ExplicitGraphOracle>(MakeOracle(Generate(ToSpec(in))));
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void AddInputOptions(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.path, "Input file");
  cmd->add_option("--input-format", in.input_format,
                  "edgelist or embeddings")
      ->check(CLI::IsMember({"edgelist", "embeddings"}));
  cmd->add_option("--theta", in.theta, "Cosine threshold for embeddings");
  cmd->add_option("--planted", in.planted,
                  "Synthetic planted partition: n,clusters,p_in,p_out");
  cmd->add_option("--gnp", in.gnp, "Synthetic G(n, p): n,p");
  cmd->add_option("--graph-seed", in.graph_seed, "Seed of the synthetic graph");
}

void AddParamOptions(CLI::App* cmd, ParamOptions& p) {
  cmd->add_option("--k", p.k, "Recursion budget")->capture_default_str();
  cmd->add_option("--alpha", p.alpha, "Space/error trade-off in [0, 1)")
      ->capture_default_str();
  cmd->add_option("--epsilon", p.epsilon, "Accuracy in (0, 1)")
      ->capture_default_str();
  cmd->add_option("--seed", p.seed, "Master seed")->capture_default_str();
  cmd->add_option("--space", p.space, "theory, budget=F or test=C")
      ->capture_default_str();
  cmd->add_flag("--normalize", p.normalize, "Apply the normalized output");
  cmd->add_flag("--count-pass", p.count_pass,
                "Prepend a counting pass (headerless input)");
  cmd->add_option("--reps", p.reps, "Repetitions (seeds seed..seed+reps-1)")
      ->capture_default_str();
  cmd->add_option("--workers", p.workers, "Worker threads")
      ->capture_default_str();
  cmd->add_flag("--timing", p.timing, "Fill the wall_ms column");
  cmd->add_option("--format", p.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", p.out, "Output file (default stdout)");
}

ExperimentConfig BaseConfig(const ParamOptions& o) {
  ExperimentConfig c;
  c.params = ToParams(o);
  c.master_seed = o.seed;
  c.reps = o.reps;
  c.workers = o.workers;
  c.timing = o.timing;
  c.boost = o.boost;
  c.pairs = o.pairs;
  c.count_pass = o.count_pass;
  return c;
}

void PrintRows(std::ostream& out, const std::vector<RunRecord>& rows,
               const ParamOptions& o) {
  if (o.format == "csv") {
    WriteCsv(out, rows);
    return;
  }
  for (const RunRecord& r : rows) {
    if (o.reps > 1 && (r.seed == "mean" || r.seed == "sd")) {
      out << r.algorithm << " " << r.seed << ": estimate "
          << FormatNumber(r.estimate) << ", rel_error "
          << (r.rel_error ? FormatNumber(*r.rel_error) : "-") << '\n';
    } else if (r.seed != "mean" && r.seed != "sd") {
      out << r.algorithm << " seed " << r.seed << ": estimate "
          << (r.error.empty() ? FormatNumber(r.estimate) : r.error)
          << ", pivot " << FormatNumber(r.baseline.value_or(0)) << ", passes "
          << FormatNumber(r.passes) << ", peak_words "
          << FormatNumber(r.peak_words) << ", oracle_calls "
          << FormatNumber(r.oracle_calls) << '\n';
    }
  }
}

int RunAlgorithm(Algorithm algo, const InputOptions& in,
                 const ParamOptions& o) {
  const auto oracle = LoadOracle(in);
  ExperimentConfig c = BaseConfig(o);
  c.algorithms = {algo};
  const auto rows = RunExperiment(c, *oracle);
  Output out(o.out);
  PrintRows(out.stream(), rows, o);
  if (algo == Algorithm::kC4Approx && o.reps == 1 && o.format == "text") {
    const RunRecord& r = rows.front();
    if (r.error.empty()) {
      // Details of the single run, replayed for its diagnostics.
      const auto run = c.boost > 1
                           ? RunC4ApproxMedian(NodeStream(oracle->size()),
                                               c.params, c.boost, *oracle)
                           : RunC4Approx(NodeStream(oracle->size()), c.params,
                                         *oracle);
      const auto& res = run.result;
      out.stream() << "m_A " << FormatNumber(res.m_a) << ", m_B "
                   << FormatNumber(res.m_b) << ", |B| " << res.b_count
                   << ", sizes r=" << res.sizes.r << " t1=" << res.sizes.t1
                   << " t2=" << res.sizes.t2 << " t=" << res.sizes.t << '\n';
      if (res.degree_cap_violations > 0) {
        std::cerr << "warning: " << res.degree_cap_violations
                  << " sampled B clusters exceeded the degree cap\n";
      }
    }
  }
  return 0;
}

int RunExact(const InputOptions& in, const ParamOptions& o) {
  const auto oracle = LoadOracle(in);
  const OptResult opt = OptCost(*oracle);
  Output out(o.out);
  out.stream() << "opt_cost " << opt.cost << '\n';
  for (const auto& block : opt.partition.blocks) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      out.stream() << (i ? " " : "") << block[i];
    }
    out.stream() << '\n';
  }
  return 0;
}

int RunStreamingPivot(const InputOptions& in, const ParamOptions& o,
                      NodeId node) {
  const auto oracle = LoadOracle(in);
  const RankFunction rf = RankFor(o.seed, oracle->size());
  const auto r = PrunedPivotStream(NodeStream(oracle->size()), node, rf, o.k,
                                   *oracle);
  Output out(o.out);
  out.stream() << "pivot " << r.pivot << ", passes "
               << r.accounting.passes_used << ", peak_words "
               << r.accounting.peak_words << ", oracle_calls "
               << r.accounting.oracle_calls << '\n';
  return 0;
}

int RunGadget(const std::string& kind, const std::string& x,
              const std::string& y, std::size_t b, bool solve,
              const std::string& out_path) {
  const Gadget g = kind == "index" ? IndexGadget(ParseBits(x), b)
                                   : DisjGadget(ParseBits(x), ParseBits(y));
  Output out(out_path);
  out.stream() << "# " << kind << " gadget, " << g.oracle.size()
               << " points, expected_opt " << g.expected_opt << '\n';
  if (solve) out.stream() << "# opt_cost " << OptCost(g.oracle).cost << '\n';
  WritePoints(out.stream(), g.oracle);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation clustering cost estimation in node-arrival streams"};
  app.require_subcommand(1);

  InputOptions in;
  ParamOptions po;

  auto* exact = app.add_subcommand("exact", "Brute-force optimum (n <= 13)");
  AddInputOptions(exact, in);
  exact->add_option("--out", po.out, "Output file");

  auto* pivot = app.add_subcommand("pivot", "Pivot clustering cost");
  AddInputOptions(pivot, in);
  AddParamOptions(pivot, po);

  NodeId node = 0;
  bool stream_node = false;
  auto* pruned = app.add_subcommand(
      "pruned-pivot", "PrunedPivot cost, or one node's streaming pivot");
  AddInputOptions(pruned, in);
  AddParamOptions(pruned, po);
  pruned->add_option("--node", node, "Resolve this node in streaming mode")
      ->each([&](const std::string&) { stream_node = true; });

  auto* c4 = app.add_subcommand("c4approx", "Streaming cost estimate");
  AddInputOptions(c4, in);
  AddParamOptions(c4, po);
  c4->add_option("--boost", po.boost, "Median of this many instances")
      ->capture_default_str();

  auto* ss = app.add_subcommand("simple-sampling", "Pair-sampling baseline");
  AddInputOptions(ss, in);
  AddParamOptions(ss, po);
  ss->add_option("--pairs", po.pairs,
                 "Pairs to sample (default: 2fn under budget=f, else n)");

  std::string gadget_kind;
  std::string bits_x;
  std::string bits_y;
  std::size_t query_b = 1;
  bool solve = false;
  auto* gadget = app.add_subcommand("gadget", "Lower-bound point sets");
  gadget->add_option("kind", gadget_kind, "index or disj")
      ->required()
      ->check(CLI::IsMember({"index", "disj"}));
  gadget->add_option("--x", bits_x, "Alice's bits, e.g. 0110")->required();
  gadget->add_option("--y", bits_y, "Bob's bits (disj)");
  gadget->add_option("--b", query_b, "Bob's index, 1-based (index)");
  gadget->add_flag("--solve", solve, "Also print the brute-force optimum");
  gadget->add_option("--out", po.out, "Output file");

  std::string sweep = "none";
  std::string values;
  std::string algorithms = "c4approx";
  auto* experiment = app.add_subcommand("experiment", "Seeded sweeps to CSV");
  AddInputOptions(experiment, in);
  AddParamOptions(experiment, po);
  experiment->add_option("--sweep", sweep, "none, space, k or theta")
      ->check(CLI::IsMember({"none", "space", "k", "theta"}))
      ->capture_default_str();
  experiment->add_option("--values", values,
                         "Comma-separated sweep values (fractions, k, theta)");
  experiment->add_option("--algorithms", algorithms,
                         "Comma-separated: c4approx, simple_sampling, pivot, "
                         "pruned_pivot")
      ->capture_default_str();
  experiment->add_option("--boost", po.boost, "Median of this many instances");
  experiment->add_option("--pairs", po.pairs, "Pairs for simple_sampling");

  auto* generate = app.add_subcommand("generate", "Write a synthetic graph");
  AddInputOptions(generate, in);
  generate->add_option("--out", po.out, "Output edge list (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exact) return RunExact(in, po);
    if (*pivot) return RunAlgorithm(Algorithm::kPivot, in, po);
    if (*pruned) {
      return stream_node ? RunStreamingPivot(in, po, node)
                         : RunAlgorithm(Algorithm::kPrunedPivot, in, po);
    }
    if (*c4) return RunAlgorithm(Algorithm::kC4Approx, in, po);
    if (*ss) return RunAlgorithm(Algorithm::kSimpleSampling, in, po);
    if (*gadget) {
      return RunGadget(gadget_kind, bits_x, bits_y, query_b, solve, po.out);
    }
    if (*generate) {
      if (!in.path.empty()) {
        throw std::invalid_argument("generate takes --planted or --gnp");
      }
      const auto oracle = LoadOracle(in);
      Output out(po.out);
      WriteEdgeList(out.stream(),
                    dynamic_cast<const ExplicitGraphOracle&>(*oracle));
      return 0;
    }
    if (*experiment) {
      const auto oracle = LoadOracle(in);
      ExperimentConfig c = BaseConfig(po);
      if (sweep == "space") c.axis = SweepAxis::kSpace;
      if (sweep == "k") c.axis = SweepAxis::kK;
      if (sweep == "theta") c.axis = SweepAxis::kTheta;
      if (c.axis != SweepAxis::kNone) c.values = SplitNumbers(values);
      c.algorithms.clear();
      std::stringstream names(algorithms);
      std::string name;
      while (std::getline(names, name, ',')) {
        c.algorithms.push_back(ParseAlgorithm(name));
      }
      Output out(po.out);
      WriteCsv(out.stream(), RunExperiment(c, *oracle));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
