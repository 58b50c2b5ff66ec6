#include "ccstream/experiment.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ccstream/errors.h"

namespace ccstream {

std::string AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kC4Approx:
      return "c4approx";
    case Algorithm::kSimpleSampling:
      return "simple_sampling";
    case Algorithm::kPivot:
      return "pivot";
    case Algorithm::kPrunedPivot:
      return "pruned_pivot";
  }
  return "unknown";
}

Algorithm ParseAlgorithm(const std::string& name) {
  if (name == "c4approx") return Algorithm::kC4Approx;
  if (name == "simple_sampling" || name == "simple-sampling") {
    return Algorithm::kSimpleSampling;
  }
  if (name == "pivot") return Algorithm::kPivot;
  if (name == "pruned_pivot" || name == "pruned-pivot") {
    return Algorithm::kPrunedPivot;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string SpaceModeName(SpaceMode mode) {
  switch (mode) {
    case SpaceMode::kTheory:
      return "theory";
    case SpaceMode::kTest:
      return "test";
    case SpaceMode::kBudget:
      return "budget";
    case SpaceMode::kFixed:
      return "fixed";
  }
  return "unknown";
}

std::uint64_t ClusteringCostFast(const SimilarityOracle& oracle,
                                 const Clustering& clustering) {
  std::map<NodeId, std::uint64_t> sizes;
  std::uint64_t edges = 0;
  std::uint64_t intra_edges = 0;
  for (NodeId u = 0; u < oracle.size(); ++u) {
    ++sizes[clustering[u]];
    for (NodeId v : oracle.Neighbors(u)) {
      if (v <= u) continue;
      ++edges;
      if (clustering[u] == clustering[v]) ++intra_edges;
    }
  }
  std::uint64_t intra_pairs = 0;
  for (const auto& [pivot, s] : sizes) intra_pairs += s * (s - 1) / 2;
  return (edges - intra_edges) + (intra_pairs - intra_edges);
}

std::uint64_t PivotBaseline(const SimilarityOracle& oracle,
                            std::uint64_t seed) {
  return ClusteringCostFast(oracle,
                            PivotOffline(oracle, RankFor(seed, oracle.size())));
}

namespace {

void ParallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t)>& body) {
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(workers, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string ErrorCode(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e)) return "error:parameter";
  if (dynamic_cast<const CapacityError*>(&e)) return "error:capacity";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "error:argument";
  return "error:runtime";
}

double Mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double SampleSd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = Mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct Job {
  std::size_t value_index;
  std::size_t algorithm_index;
  int rep;
};

}  // namespace

std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const SimilarityOracle& oracle) {
  config.params.Validate();
  if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (config.algorithms.empty()) {
    throw std::invalid_argument("no algorithms selected");
  }
  std::vector<double> values = config.values;
  if (config.axis == SweepAxis::kNone) values = {0.0};
  if (values.empty()) throw std::invalid_argument("sweep has no values");

  // One oracle per sweep value; only a theta sweep changes it.
  std::vector<std::unique_ptr<EmbeddingOracle>> owned;
  std::vector<const SimilarityOracle*> oracles(values.size(), &oracle);
  if (config.axis == SweepAxis::kTheta) {
    const auto* emb = dynamic_cast<const EmbeddingOracle*>(&oracle);
    if (emb == nullptr) {
      throw std::invalid_argument("theta sweep needs embedding input");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      owned.push_back(
          std::make_unique<EmbeddingOracle>(emb->WithTheta(values[i])));
      oracles[i] = owned.back().get();
    }
  }
  const std::size_t baseline_sets =
      config.axis == SweepAxis::kTheta ? values.size() : 1;
  const auto reps = static_cast<std::size_t>(config.reps);
  std::vector<double> baselines(baseline_sets * reps);
  ParallelFor(baselines.size(), config.workers, [&](std::size_t i) {
    const SimilarityOracle& o = *oracles[i / reps];
    baselines[i] = static_cast<double>(
        PivotBaseline(o, RepSeed(config.master_seed, static_cast<int>(i % reps))));
  });

  std::vector<Job> jobs;
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      for (int r = 0; r < config.reps; ++r) jobs.push_back({v, a, r});
    }
  }
  std::vector<RunRecord> rows(jobs.size());
  ParallelFor(jobs.size(), config.workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const double value = values[job.value_index];
    const SimilarityOracle& o = *oracles[job.value_index];
    const Algorithm algo = config.algorithms[job.algorithm_index];
    const std::uint64_t seed = RepSeed(config.master_seed, job.rep);
    EstimatorParams params = config.params;
    params.seed = seed;
    if (config.axis == SweepAxis::kSpace) {
      params.space.mode = SpaceMode::kBudget;
      params.space.param = value;
    } else if (config.axis == SweepAxis::kK) {
      params.k = static_cast<int>(value);
    }

    RunRecord row;
    row.algorithm = AlgorithmName(algo);
    row.k = params.k;
    row.alpha = params.alpha;
    row.epsilon = params.epsilon;
    row.space_mode = SpaceModeName(params.space.mode);
    row.space_param =
        params.space.mode == SpaceMode::kTheory ? 0.0 : params.space.param;
    row.seed = std::to_string(seed);
    const double baseline =
        baselines[(baseline_sets == 1 ? 0 : job.value_index) * reps + job.rep];
    row.baseline = baseline;

    const auto start = std::chrono::steady_clock::now();
    try {
      const NodeStream stream(o.size());
      const RunOptions options{config.count_pass};
      switch (algo) {
        case Algorithm::kC4Approx: {
          const C4Run run =
              config.boost > 1
                  ? RunC4ApproxMedian(stream, params, config.boost, o, options)
                  : RunC4Approx(stream, params, o, options);
          row.estimate = run.result.estimate;
          row.passes = run.accounting.passes_used;
          row.peak_words = static_cast<double>(run.accounting.peak_words);
          row.oracle_calls = static_cast<double>(run.accounting.oracle_calls);
          break;
        }
        case Algorithm::kSimpleSampling: {
          std::uint64_t q = config.pairs;
          if (q == 0) {
            q = params.space.mode == SpaceMode::kBudget
                    ? PairsForBudget(params.space.param, o.size())
                    : o.size();
          }
          const EstimateRun run =
              RunSimpleSampling(stream, q, params.k, seed, o, options);
          row.estimate = run.estimate;
          row.passes = run.accounting.passes_used;
          row.peak_words = static_cast<double>(run.accounting.peak_words);
          row.oracle_calls = static_cast<double>(run.accounting.oracle_calls);
          break;
        }
        case Algorithm::kPivot:
          row.estimate = baseline;
          break;
        case Algorithm::kPrunedPivot:
          row.estimate = static_cast<double>(ClusteringCostFast(
              o, PrunedPivotClustering(o, RankFor(seed, o.size()), params.k)));
          break;
      }
      if (baseline > 0) {
        row.rel_error = std::abs(row.estimate - baseline) / baseline;
      }
    } catch (const std::exception& e) {
      row.error = ErrorCode(e);
    }
    if (config.timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
    rows[j] = std::move(row);
  });

  // Summary rows per (value, algorithm) group; jobs are contiguous per group.
  std::vector<RunRecord> out = rows;
  for (std::size_t g = 0; g < rows.size(); g += reps) {
    std::vector<double> est, base, rel, signed_rel, passes, words, calls, ms;
    for (std::size_t i = g; i < g + reps; ++i) {
      const RunRecord& r = rows[i];
      if (!r.error.empty()) continue;
      est.push_back(r.estimate);
      base.push_back(*r.baseline);
      passes.push_back(r.passes);
      words.push_back(r.peak_words);
      calls.push_back(r.oracle_calls);
      if (r.rel_error) {
        rel.push_back(*r.rel_error);
        signed_rel.push_back((r.estimate - *r.baseline) / *r.baseline);
      }
      if (r.wall_ms) ms.push_back(*r.wall_ms);
    }
    RunRecord mean = rows[g];
    mean.error.clear();
    RunRecord sd = mean;
    mean.seed = "mean";
    sd.seed = "sd";
    mean.estimate = Mean(est);
    sd.estimate = SampleSd(est);
    mean.baseline = Mean(base);
    sd.baseline = SampleSd(base);
    mean.rel_error = rel.empty() ? std::nullopt : std::optional(Mean(rel));
    sd.rel_error =
        signed_rel.empty() ? std::nullopt : std::optional(SampleSd(signed_rel));
    mean.passes = Mean(passes);
    sd.passes = SampleSd(passes);
    mean.peak_words = Mean(words);
    sd.peak_words = SampleSd(words);
    mean.oracle_calls = Mean(calls);
    sd.oracle_calls = SampleSd(calls);
    if (config.timing) {
      mean.wall_ms = Mean(ms);
      sd.wall_ms = SampleSd(ms);
    } else {
      mean.wall_ms.reset();
      sd.wall_ms.reset();
    }
    out.push_back(mean);
    out.push_back(sd);
  }
  return out;
}

std::string FormatNumber(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void WriteCsv(std::ostream& out, const std::vector<RunRecord>& rows) {
  auto opt = [](const std::optional<double>& x) {
    return x ? FormatNumber(*x) : std::string();
  };
  out << kCsvHeader << '\n';
  for (const RunRecord& r : rows) {
    out << r.algorithm << ',' << r.k << ',' << FormatNumber(r.alpha) << ','
        << FormatNumber(r.epsilon) << ',' << r.space_mode << ','
        << FormatNumber(r.space_param) << ',' << r.seed << ','
        << (r.error.empty() ? FormatNumber(r.estimate) : r.error) << ','
        << opt(r.baseline) << ',' << opt(r.rel_error) << ','
        << FormatNumber(r.passes) << ',' << FormatNumber(r.peak_words) << ','
        << FormatNumber(r.oracle_calls) << ',' << opt(r.wall_ms) << '\n';
  }
}

}  // namespace ccstream
