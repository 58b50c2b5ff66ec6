#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccstream/estimators.h"
#include "ccstream/pivot.h"
#include "ccstream/similarity.h"

namespace ccstream {

enum class Algorithm { kC4Approx, kSimpleSampling, kPivot, kPrunedPivot };

std::string AlgorithmName(Algorithm a);
// Accepts "c4approx", "simple_sampling" (or "simple-sampling"), "pivot",
// "pruned_pivot" (or "pruned-pivot"). Throws std::invalid_argument.
Algorithm ParseAlgorithm(const std::string& name);

std::string SpaceModeName(SpaceMode mode);

// One CSV row. Summary rows carry "mean" or "sd" in `seed`.
struct RunRecord {
  std::string algorithm;
  int k = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::string space_mode;
  double space_param = 0.0;
  std::string seed;
  double estimate = 0.0;
  std::optional<double> baseline;
  std::optional<double> rel_error;
  double passes = 0.0;
  double peak_words = 0.0;
  double oracle_calls = 0.0;
  std::optional<double> wall_ms;
  // Non-empty when the run failed; written in place of the estimate.
  std::string error;
};

enum class SweepAxis { kNone, kSpace, kK, kTheta };

struct ExperimentConfig {
  SweepAxis axis = SweepAxis::kNone;
  // Budget fractions, k values, or thetas; ignored for kNone.
  std::vector<double> values;
  std::vector<Algorithm> algorithms = {Algorithm::kC4Approx};
  EstimatorParams params;
  std::uint64_t master_seed = 0;
  int reps = 1;
  int workers = 1;
  bool timing = false;
  // Median of this many independent C4Approx instances per row.
  int boost = 1;
  // Pairs drawn by SimpleSampling; 0 derives it from the budget (n when the
  // space mode is not a budget).
  std::uint64_t pairs = 0;
  bool count_pass = false;
};

// Seed of repetition `rep`.
inline std::uint64_t RepSeed(std::uint64_t master, int rep) {
  return master + static_cast<std::uint64_t>(rep);
}

// Cost of a clustering through uncounted neighbour lists.
std::uint64_t ClusteringCostFast(const SimilarityOracle& oracle,
                                 const Clustering& clustering);

// Same-seed Pivot cost (the rank function C4Approx uses for that seed).
std::uint64_t PivotBaseline(const SimilarityOracle& oracle,
                            std::uint64_t seed);

// Runs every (sweep value, algorithm, repetition) and returns the rows in
// that order, followed by one mean and one sd row per (value, algorithm).
// For SweepAxis::kTheta the oracle must be an EmbeddingOracle.
std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const SimilarityOracle& oracle);

inline constexpr const char* kCsvHeader =
    "algorithm,k,alpha,epsilon,space_mode,space_param,seed,estimate,baseline,"
    "rel_error,passes,peak_words,oracle_calls,wall_ms";

void WriteCsv(std::ostream& out, const std::vector<RunRecord>& rows);
std::string FormatNumber(double x);

}  // namespace ccstream
