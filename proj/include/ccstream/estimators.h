#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccstream/errors.h"
#include "ccstream/pivot.h"
#include "ccstream/random.h"
#include "ccstream/stream.h"

namespace ccstream {

// How sample sizes are chosen.
//   kTheory  the analysis formulas with their constants (48, 12, 32, 8);
//   kTest    the same formulas with every constant multiplied by `param`;
//   kBudget  each structure holds `param` * n nodes, scaled by BudgetSplit;
//   kFixed   explicit sizes (tests and ablations).
// Every size is clamped to [1, n].
enum class SpaceMode { kTheory, kTest, kBudget, kFixed };

struct SampleSizes {
  std::size_t r = 0;   // reference set
  std::size_t t1 = 0;  // Est-EA first sample
  std::size_t t2 = 0;  // Est-EA low-degree sample
  std::size_t t = 0;   // Est-EB sample over B

  bool operator==(const SampleSizes&) const = default;
};

// Budget mode sizes every sample structure from the same fraction f of the
// stream: r = f n * reference, t1 = f n * s1, t2 = f n * s2, t = f n * eb.
// Peak words are measured, not budgeted; they include R, the samples, the
// cached pivots, the Gamma lists and the streaming pivot paths.
struct BudgetSplit {
  double reference = 1.0;
  double s1 = 1.0;
  double s2 = 1.0;
  double eb = 1.0;
};

struct SpaceConfig {
  SpaceMode mode = SpaceMode::kTheory;
  double param = 1.0;  // budget fraction (kBudget) or constant scale (kTest)
  SampleSizes fixed;   // kFixed only
};

struct EstimatorParams {
  int k = 15;
  double alpha = 0.5;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  SpaceConfig space;
  BudgetSplit split;
  bool normalize_output = false;
  // Est-EB flags a sampled cluster whose neighbourhood exceeds
  // degree_cap_slack * n^beta + 1 nodes.
  double degree_cap_slack = 2.0;

  double beta() const { return (1.0 - alpha) / 4.0; }
  // Throws ParameterError for k < 1, alpha outside [0, 1), epsilon outside
  // (0, 1), or a non-positive space parameter.
  void Validate() const;
};

// Sizes for an n-node stream; `sub_epsilon` is the accuracy handed to Est-EA
// and Est-EB (epsilon / 8 inside C4Approx). Throws ParameterError when a
// formula is not a positive finite number.
SampleSizes PlanSampleSizes(const EstimatorParams& params, std::size_t n,
                            double sub_epsilon);

// Algorithm R reservoir: the first `capacity` offers fill the slots, offer
// number c > capacity replaces slot Below(c) when that index is < capacity.
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed)
      : capacity_(capacity), rng_(seed) {}

  void Offer(NodeId item) {
    ++offered_;
    if (slots_.size() < capacity_) {
      slots_.push_back(item);
      return;
    }
    const std::uint64_t i = rng_.Below(offered_);
    if (i < capacity_) slots_[i] = item;
  }

  std::span<const NodeId> items() const { return slots_; }
  std::size_t size() const { return slots_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t offered() const { return offered_; }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<NodeId> slots_;
  std::uint64_t offered_ = 0;
};

// Whether (u, v) is a mismatch pair with at least one endpoint in A, decided
// from R and the oracle alone. Throws std::invalid_argument when u == v.
bool InEA(NodeId u, NodeId v, const RankFunction& rf,
          const ReferenceSet& reference, int k, const SimilarityOracle& oracle);

// Same test with both FindPivot results already known.
bool InEAWithPivots(NodeId u, std::optional<NodeId> pivot_u, NodeId v,
                    std::optional<NodeId> pivot_v,
                    const SimilarityOracle& oracle);

// Three passes: sample S1; split nodes into high/low mismatch degree by their
// hits in S1, rescaling the high ones and sampling S2 from the low ones; count
// exact degrees of S2. Estimates |E_mis_A|.
class EstEA final : public PassConsumer {
 public:
  EstEA(const EstimatorParams& params, std::size_t t1, std::size_t t2,
        const RankFunction& rf, const ReferenceSet& reference,
        RunContext& ctx);

  std::string_view name() const override { return "est_ea"; }
  int declared_passes() const override { return 3; }
  void OnItem(NodeId item) override;
  void BeginPass(int pass) override { pass_ = pass; }
  void EndPass(int pass) override;

  std::optional<double> estimate() const { return estimate_; }
  // Diagnostics.
  double high_threshold() const { return threshold_; }
  std::uint64_t low_count() const { return low_count_; }
  std::span<const NodeId> s1() const { return s1_.items(); }
  std::span<const NodeId> s2() const { return s2_.items(); }
  double high_sum() const { return high_sum_; }
  // (node, X_j) for every stream item in pass 2; recorded only when enabled.
  void RecordClassification(bool on) { record_ = on; }
  const std::vector<std::pair<NodeId, std::uint64_t>>& classified() const {
    return classified_;
  }

 private:
  void UpdateWords();

  const RankFunction& rf_;
  const ReferenceSet& reference_;
  int k_;
  std::size_t n_;
  const SimilarityOracle& oracle_;
  int pass_ = 0;
  double threshold_;
  Reservoir s1_;
  Reservoir s2_;
  std::vector<std::optional<NodeId>> s1_pivots_;
  std::vector<std::optional<NodeId>> s2_pivots_;
  std::vector<std::uint64_t> degrees_;
  std::uint64_t low_count_ = 0;
  double high_sum_ = 0.0;
  std::optional<double> estimate_;
  bool record_ = false;
  std::vector<std::pair<NodeId, std::uint64_t>> classified_;
  TrackedWords words_;
};

// k + 3 passes: sample S from B; collect Gamma[i] = N(S[i]) + S[i]; resolve
// every pivot in the Gammas with streaming PrunedPivot (passes 3..k+2) and
// keep only nodes whose pivot is S[i], leaving Clu(S[i]); count similar pairs
// from each cluster to the rest of B; dissimilar pairs inside are counted
// offline. Estimates |E_mis_B|.
class EstEB final : public PassConsumer {
 public:
  EstEB(const EstimatorParams& params, std::size_t t, const RankFunction& rf,
        const ReferenceSet& reference, RunContext& ctx);

  std::string_view name() const override { return "est_eb"; }
  int declared_passes() const override { return k_ + 3; }
  void BeginPass(int pass) override;
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  std::optional<double> estimate() const { return estimate_; }
  std::uint64_t b_count() const { return b_count_; }
  std::span<const NodeId> sample() const { return sample_.items(); }
  // Clusters after pruning, aligned with sample().
  const std::vector<std::vector<NodeId>>& clusters() const { return gamma_; }
  std::uint64_t degree_cap_violations() const { return cap_violations_; }

 private:
  void UpdateWords();

  const RankFunction& rf_;
  const ReferenceSet& reference_;
  int k_;
  std::size_t n_;
  const SimilarityOracle& oracle_;
  WordCensus& census_;
  double degree_cap_;
  int pass_ = 0;
  Reservoir sample_;
  std::uint64_t b_count_ = 0;
  std::vector<std::vector<NodeId>> gamma_;
  std::vector<std::uint64_t> n_in_;
  std::vector<std::uint64_t> n_out_;
  std::unique_ptr<PassGroup> pivots_;
  std::vector<std::pair<NodeId, StreamingPrunedPivot*>> pivot_of_node_;
  std::uint64_t cap_violations_ = 0;
  std::optional<double> estimate_;
  TrackedWords words_;
};

struct C4Result {
  double estimate = 0.0;
  double m_a = 0.0;
  double m_b = 0.0;
  SampleSizes sizes;
  std::uint64_t b_count = 0;
  std::uint64_t degree_cap_violations = 0;
};

// Pass 1 builds R; passes 2..k+4 run Est-EA and Est-EB (both with
// epsilon / 8) over shared passes. Output is m_A + m_B, or the normalized
// (m_A + m_B + 3/8 eps n^(1-alpha)) / (1 - eps/8) when normalize_output.
class C4Approx final : public PassConsumer {
 public:
  C4Approx(const EstimatorParams& params, RunContext& ctx);
  ~C4Approx() override;

  std::string_view name() const override { return "c4approx"; }
  int declared_passes() const override { return params_.k + 4; }
  void BeginPass(int pass) override;
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  const RankFunction& rank() const { return rf_; }
  const ReferenceSet& reference() const { return builder_->result(); }
  std::optional<C4Result> result() const { return result_; }

 private:
  EstimatorParams params_;
  RunContext& ctx_;
  RankFunction rf_;
  SampleSizes sizes_;
  int pass_ = 0;
  std::unique_ptr<ReferenceSetBuilder> builder_;
  std::unique_ptr<PassGroup> inner_;
  std::unique_ptr<EstEA> ea_;
  std::unique_ptr<EstEB> eb_;
  std::optional<C4Result> result_;
};

// Samples q uniform node pairs (all pairs once when q >= n(n-1)/2), resolves
// each endpoint's pivot with streaming PrunedPivot, and scales the observed
// mismatch fraction to n(n-1)/2. At most k passes.
class SimpleSampling final : public PassConsumer {
 public:
  SimpleSampling(std::uint64_t q, int k, const RankFunction& rf,
                 std::uint64_t seed, RunContext& ctx);

  std::string_view name() const override { return "simple_sampling"; }
  int declared_passes() const override { return k_; }
  bool finished() const override { return estimate_.has_value(); }
  void BeginPass(int pass) override;
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  std::optional<double> estimate() const { return estimate_; }
  std::size_t pair_count() const { return pairs_.size(); }
  bool exhaustive() const { return exhaustive_; }

 private:
  void Finish();

  int k_;
  const SimilarityOracle& oracle_;
  std::size_t n_;
  bool exhaustive_ = false;
  std::vector<std::pair<NodeId, NodeId>> pairs_;
  PassGroup pivots_;
  std::vector<std::pair<NodeId, StreamingPrunedPivot*>> pivot_of_node_;
  std::optional<double> estimate_;
  TrackedWords words_;
};

struct EstimateRun {
  double estimate = 0.0;
  Accounting accounting;
};

struct C4Run {
  C4Result result;
  Accounting accounting;
};

// Standalone drivers. The rank function and R are supplied by the caller
// (built offline or by an earlier run) and are not charged to the census.
EstimateRun RunEstEA(const NodeStream& stream, const EstimatorParams& params,
                     const RankFunction& rf, const ReferenceSet& reference,
                     const SimilarityOracle& oracle);
EstimateRun RunEstEB(const NodeStream& stream, const EstimatorParams& params,
                     const RankFunction& rf, const ReferenceSet& reference,
                     const SimilarityOracle& oracle);
C4Run RunC4Approx(const NodeStream& stream, const EstimatorParams& params,
                  const SimilarityOracle& oracle,
                  const RunOptions& options = {});
EstimateRun RunSimpleSampling(const NodeStream& stream, std::uint64_t q, int k,
                              std::uint64_t seed,
                              const SimilarityOracle& oracle,
                              const RunOptions& options = {});

// `repetitions` independent C4Approx instances (independent seeds, rank
// functions included) over the same physical passes; returns the median.
C4Run RunC4ApproxMedian(const NodeStream& stream,
                        const EstimatorParams& params, int repetitions,
                        const SimilarityOracle& oracle,
                        const RunOptions& options = {});

// Rank function used by C4Approx and the simple-sampling driver for a seed,
// so baselines can share pi with an estimator run.
RankFunction RankFor(std::uint64_t seed, std::size_t n);

// Pairs SimpleSampling draws in budget mode: 2 f n, so its 4 f n endpoint
// ids match the ids held by C4Approx's four samples.
std::uint64_t PairsForBudget(double fraction, std::size_t n);

}  // namespace ccstream
