// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Usage: acceptance <path to ccstream CLI> <scratch directory>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "ccstream/estimators.h"
#include "ccstream/exact.h"
#include "ccstream/experiment.h"
#include "ccstream/gadgets.h"
#include "ccstream/io.h"
#include "ccstream/mismatch.h"
#include "test_util.h"

namespace ccstream {
namespace {

using testing::RandomGraph;
using testing::RankOrder;
using testing::RefFindPivot;
using testing::RefPrunedPivot;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

// The sweep shared by criteria 1 to 4: 210 graphs with n in [4, 10] and
// p in {0.2, 0.5, 0.8}, 20 rank seeds each.
struct SweepCase {
  std::size_t n;
  double p;
  std::uint64_t graph_seed;
};

std::vector<SweepCase> Sweep() {
  std::vector<SweepCase> out;
  const double ps[] = {0.2, 0.5, 0.8};
  for (std::uint64_t i = 0; i < 210; ++i) {
    out.push_back({4 + i % 7, ps[(i / 7) % 3], 10000 + i});
  }
  return out;
}

constexpr int kSweepSeeds = 20;
constexpr int kSweepBudgets[] = {1, 2, 3, 8};

std::vector<bool> TopFlags(const RankFunction& rf, std::size_t r) {
  std::vector<bool> in_r(rf.size(), false);
  const auto order = RankOrder(rf);
  for (std::size_t i = 0; i < std::min(r, order.size()); ++i) {
    in_r[order[i]] = true;
  }
  return in_r;
}

// Random |R| in [0, n] for (graph, seed).
std::size_t SweepReferenceSize(const SweepCase& c, int seed) {
  Rng rng(DeriveSeed(c.graph_seed, static_cast<std::uint64_t>(seed)));
  return rng.Below(c.n + 1);
}

Outcome StreamingEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  for (const SweepCase& c : Sweep()) {
    const auto g = RandomGraph(c.n, c.p, c.graph_seed);
    for (int s = 0; s < kSweepSeeds; ++s) {
      const RankFunction rf(c.graph_seed * 100 + s, c.n);
      for (int k : kSweepBudgets) {
        for (NodeId u = 0; u < c.n; ++u) {
          ++checks;
          mismatches += PrunedPivotStream(NodeStream(c.n), u, rf, k, g).pivot !=
                        PrunedPivotOffline(g, rf, k, u);
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {mismatches == 0 && secs < 30.0,
          Fmt("%.0f node checks, %.0f disagreements, %.1f s", checks,
              mismatches, secs)};
}

Outcome FindPivotEquivalence() {
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  for (const SweepCase& c : Sweep()) {
    const auto g = RandomGraph(c.n, c.p, c.graph_seed);
    for (int s = 0; s < kSweepSeeds; ++s) {
      const RankFunction rf(c.graph_seed * 100 + s, c.n);
      const ReferenceSet all = ReferenceSet::TopRanked(rf, c.n);
      for (int k : kSweepBudgets) {
        for (NodeId u = 0; u < c.n; ++u) {
          ++checks;
          mismatches += FindPivot(u, rf, all, k, g) !=
                        std::optional(PrunedPivotOffline(g, rf, k, u));
        }
      }
    }
  }
  return {mismatches == 0,
          Fmt("%.0f node checks with R = V, %.0f disagreements", checks,
              mismatches)};
}

Outcome InEACorrectness() {
  std::uint64_t checks = 0;
  std::uint64_t mismatches = 0;
  for (const SweepCase& c : Sweep()) {
    const auto g = RandomGraph(c.n, c.p, c.graph_seed);
    for (int s = 0; s < kSweepSeeds; ++s) {
      const RankFunction rf(c.graph_seed * 100 + s, c.n);
      const std::size_t r = SweepReferenceSize(c, s);
      const ReferenceSet R = ReferenceSet::TopRanked(rf, r);
      for (int k : kSweepBudgets) {
        // Ground truth from the reference transcription.
        const auto pivot = RefPrunedPivot(g, rf, k);
        RefFindPivot find(g, rf, TopFlags(rf, r), k);
        std::vector<bool> in_a(c.n);
        for (NodeId u = 0; u < c.n; ++u) in_a[u] = find(u).pivot.has_value();
        for (NodeId u = 0; u < c.n; ++u) {
          for (NodeId v = u + 1; v < c.n; ++v) {
            const bool mis = g.Similar(u, v) != (pivot[u] == pivot[v]);
            const bool want = mis && (in_a[u] || in_a[v]);
            ++checks;
            mismatches += InEA(u, v, rf, R, k, g) != want;
          }
        }
      }
    }
  }
  return {mismatches == 0,
          Fmt("%.0f pair checks with random |R|, %.0f disagreements", checks,
              mismatches)};
}

Outcome PartitionPurity() {
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
  for (const SweepCase& c : Sweep()) {
    const auto g = RandomGraph(c.n, c.p, c.graph_seed);
    for (int s = 0; s < kSweepSeeds; ++s) {
      const RankFunction rf(c.graph_seed * 100 + s, c.n);
      const ReferenceSet R =
          ReferenceSet::TopRanked(rf, SweepReferenceSize(c, s));
      for (int k : kSweepBudgets) {
        const ABPartition ab = PartitionAB(rf, R, k, g);
        for (NodeId u = 0; u < c.n; ++u) {
          ++checks;
          violations += ab.InA(u) != ab.InA(PrunedPivotOffline(g, rf, k, u));
        }
      }
    }
  }
  return {violations == 0,
          Fmt("%.0f node checks, %.0f violations", checks, violations)};
}

Outcome FullSamplingCollapse() {
  int instances = 0;
  int failures = 0;
  for (std::uint64_t i = 0; i < 120; ++i) {
    const std::size_t n = 3 + i % 10;
    const auto g = RandomGraph(n, 0.15 + 0.1 * (i % 7), 20000 + i);
    const int k = 1 + static_cast<int>(i % 6);
    const std::size_t r = i % (n + 1);
    EstimatorParams params;
    params.k = k;
    params.seed = i;
    params.space.mode = SpaceMode::kFixed;
    params.space.fixed = {std::max<std::size_t>(r, 1), n, n, n};
    const RankFunction rf = RankFor(i, n);
    const ReferenceSet R = ReferenceSet::TopRanked(rf, r);
    const MismatchCounts exact = ExactMismatchCounts(g, rf, R, k);
    const NodeStream stream(n);

    const double ea = RunEstEA(stream, params, rf, R, g).estimate;
    const double eb = RunEstEB(stream, params, rf, R, g).estimate;
    const double c4 = RunC4Approx(stream, params, g).result.estimate;
    const MismatchCounts c4_exact = ExactMismatchCounts(
        g, rf, ReferenceSet::TopRanked(rf, params.space.fixed.r), k);
    const double ss =
        RunSimpleSampling(stream, n * (n - 1) / 2, k, i, g).estimate;
    ++instances;
    failures += ea != static_cast<double>(exact.in_a) ||
                eb != static_cast<double>(exact.in_b) ||
                c4 != static_cast<double>(c4_exact.total) ||
                ss != static_cast<double>(exact.total);
  }
  return {failures == 0,
          Fmt("%.0f instances with n <= 12, %.0f inexact", instances,
              failures)};
}

// Five fixed graphs on at most 10 nodes with a positive optimum.
std::vector<ExplicitGraphOracle> FixedGraphs() {
  std::vector<ExplicitGraphOracle> out;
  out.push_back(testing::PathGraph(7));
  out.push_back(RandomGraph(10, 0.3, 31));
  out.push_back(RandomGraph(10, 0.5, 32));
  out.push_back(RandomGraph(9, 0.7, 33));
  // Two triangles sharing a vertex, plus a pendant.
  out.push_back(ExplicitGraphOracle(
      6, std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4},
                           {4, 5}}));
  return out;
}

Outcome PivotApproximation() {
  bool ok = true;
  std::string detail;
  for (const auto& g : FixedGraphs()) {
    const double opt = static_cast<double>(OptCost(g).cost);
    double sum = 0.0;
    double lowest = 1e18;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const double cost = static_cast<double>(
          ClusteringCost(g, PartitionFromClustering(
                                PivotOffline(g, RankFunction(s, g.size())))));
      sum += cost;
      lowest = std::min(lowest, cost);
    }
    const double mean = sum / 1000;
    ok = ok && opt > 0 && lowest >= opt && mean <= 3 * opt * 1.10;
    detail += Fmt("[opt %.0f min %.0f mean %.2f] ", opt, lowest, mean);
  }
  return {ok, detail};
}

Outcome PrunedPivotBound() {
  constexpr int k = 5;
  const double factor = 9.0 + 24.0 / (k - 1);
  bool ok = true;
  std::string detail;
  for (const auto& g : FixedGraphs()) {
    const double opt = static_cast<double>(OptCost(g).cost);
    int within = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const double cost = static_cast<double>(ClusteringCost(
          g, PartitionFromClustering(
                 PrunedPivotClustering(g, RankFunction(s, g.size()), k))));
      within += cost <= factor * opt;
    }
    ok = ok && within >= 600;
    detail += Fmt("[%.3f] ", within / 1000.0);
  }
  return {ok, "fraction within 15 OPT per graph: " + detail};
}

std::vector<bool> Bits(unsigned mask, std::size_t len) {
  std::vector<bool> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = (mask >> i) & 1;
  return out;
}

Outcome GadgetGroundTruth() {
  int cases = 0;
  int wrong = 0;
  for (std::size_t len : {2, 3}) {
    for (unsigned x = 0; x < (1u << len); ++x) {
      for (std::size_t b = 1; b <= len; ++b) {
        const Gadget g = IndexGadget(Bits(x, len), b);
        ++cases;
        wrong += OptCost(g.oracle).cost != g.expected_opt;
      }
    }
  }
  for (std::size_t len : {1, 2, 3}) {
    for (unsigned x = 0; x < (1u << len); ++x) {
      for (unsigned y = 0; y < (1u << len); ++y) {
        const Gadget g = DisjGadget(Bits(x, len), Bits(y, len));
        ++cases;
        wrong += OptCost(g.oracle).cost != g.expected_opt;
      }
    }
  }
  return {wrong == 0, Fmt("%.0f gadgets, %.0f wrong", cases, wrong)};
}

Outcome PassAndSpaceAccounting() {
  SyntheticSpec spec;
  spec.kind = SyntheticSpec::Kind::kPlanted;
  spec.n = 300;
  spec.clusters = 6;
  spec.p_in = 0.4;
  spec.p_out = 0.02;
  spec.seed = 3;
  const auto g = MakeOracle(Generate(spec));
  const NodeStream stream(g.size());
  bool ok = true;
  std::int64_t worst_ratio_num = 0;
  int worst_k = 1;
  for (int k : {1, 2, 3, 8, 15}) {
    EstimatorParams params;
    params.k = k;
    params.seed = static_cast<std::uint64_t>(k);
    params.space.mode = SpaceMode::kBudget;
    params.space.param = 0.1;
    const RankFunction rf = RankFor(params.seed, g.size());
    const ReferenceSet R = ReferenceSet::TopRanked(rf, 30);
    ok = ok && RunC4Approx(stream, params, g).accounting.passes_used == k + 4;
    ok = ok && RunEstEA(stream, params, rf, R, g).accounting.passes_used == 3;
    ok = ok &&
         RunEstEB(stream, params, rf, R, g).accounting.passes_used == k + 3;
    for (NodeId u = 0; u < g.size(); ++u) {
      const auto run = PrunedPivotStream(stream, u, rf, k, g);
      ok = ok && run.accounting.passes_used <= k &&
           run.accounting.peak_words <= 8 * k;
      if (run.accounting.peak_words * worst_k > worst_ratio_num * k) {
        worst_ratio_num = run.accounting.peak_words;
        worst_k = k;
      }
    }
  }
  return {ok, Fmt("passes k+4 / 3 / k+3 checked for k in {1,2,3,8,15}; "
                  "max streaming peak %.0f words at k = %.0f",
                  static_cast<double>(worst_ratio_num), worst_k)};
}

ExplicitGraphOracle DeskScaleInstance() {
  SyntheticSpec spec;
  spec.kind = SyntheticSpec::Kind::kPlanted;
  spec.n = 2000;
  spec.clusters = 20;
  spec.p_in = 0.3;
  spec.p_out = 0.005;
  spec.seed = 1;
  return MakeOracle(Generate(spec));
}

// (mean |relative error|, sd of signed relative error) of a group.
std::pair<double, double> Summary(const std::vector<RunRecord>& rows,
                                  const std::string& algorithm,
                                  double space_param) {
  double mean = -1;
  double sd = -1;
  for (const RunRecord& r : rows) {
    if (r.algorithm != algorithm || r.space_param != space_param) continue;
    if (r.seed == "mean") mean = r.rel_error.value_or(-1);
    if (r.seed == "sd") sd = r.rel_error.value_or(-1);
  }
  return {mean, sd};
}

Outcome DeskScaleExperiment() {
  const auto start = std::chrono::steady_clock::now();
  const auto g = DeskScaleInstance();
  ExperimentConfig config;
  config.axis = SweepAxis::kSpace;
  config.values = {0.02, 0.10, 0.16};
  config.algorithms = {Algorithm::kC4Approx};
  config.params.k = 15;
  config.reps = 100;
  const auto rows = RunExperiment(config, g);
  const auto [mean10, sd10] = Summary(rows, "c4approx", 0.10);
  const double sd2 = Summary(rows, "c4approx", 0.02).second;
  const double sd16 = Summary(rows, "c4approx", 0.16).second;
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const bool ok = mean10 >= 0 && mean10 <= 0.10 && sd10 >= 0 && sd10 <= 0.10 &&
                  sd16 <= sd2 && secs < 600;
  return {ok, Fmt("10%%: mean rel err %.4f sd %.4f; sd 2%% %.4f vs 16%% %.4f",
                  mean10, sd10, sd2, sd16) +
                  Fmt(" (%.0f s)", secs)};
}

Outcome VarianceDominance() {
  SyntheticSpec spec;
  spec.kind = SyntheticSpec::Kind::kPlanted;
  spec.n = 400;
  spec.clusters = 8;
  spec.p_in = 0.3;
  spec.p_out = 0.01;
  spec.seed = 1;
  const auto g = MakeOracle(Generate(spec));
  constexpr double kBudget = 0.1;

  ExperimentConfig c4;
  c4.algorithms = {Algorithm::kC4Approx};
  c4.params.k = 15;
  c4.params.space.mode = SpaceMode::kBudget;
  c4.params.space.param = kBudget;
  c4.reps = 200;
  const auto c4_rows = RunExperiment(c4, g);
  const RunRecord& c4_mean = c4_rows[200];
  const double words = c4_mean.peak_words;

  // Largest pair count whose peak words stay within C4Approx's mean peak.
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
  auto peak = [&](std::uint64_t q) {
    return static_cast<double>(
        RunSimpleSampling(NodeStream(g.size()), q, 15, 0, g)
            .accounting.peak_words);
  };
  while (peak(hi) <= words) hi *= 2;
  while (hi - lo > 1) {
    const std::uint64_t mid = (lo + hi) / 2;
    (peak(mid) <= words ? lo : hi) = mid;
  }

  ExperimentConfig ss = c4;
  ss.algorithms = {Algorithm::kSimpleSampling};
  ss.pairs = lo;
  const auto ss_rows = RunExperiment(ss, g);
  const RunRecord& ss_mean = ss_rows[200];
  const double sd_c4 = *c4_rows[201].rel_error;
  const double sd_ss = *ss_rows[201].rel_error;
  return {sd_ss >= 2 * sd_c4,
          Fmt("words c4 %.0f vs simple %.0f (q = %.0f); sd c4 %.4f", words,
              ss_mean.peak_words, static_cast<double>(lo), sd_c4) +
              Fmt(", sd simple %.4f, ratio %.2f", sd_ss, sd_ss / sd_c4)};
}

Outcome CliDeterminism(const std::string& cli, const std::string& work) {
  std::filesystem::create_directories(work);
  const std::string base =
      "\"" + cli +
      "\" experiment --planted 300,5,0.4,0.02 --sweep space "
      "--values 0.05,0.1 --algorithms c4approx,simple_sampling,pruned_pivot "
      "--k 5 --reps 4 --seed 11 --workers 2 --format csv --out ";
  std::string contents[2];
  for (int i = 0; i < 2; ++i) {
    const std::string path = work + "/run" + std::to_string(i) + ".csv";
    if (std::system((base + "\"" + path + "\"").c_str()) != 0) {
      return {false, "CLI exited with an error"};
    }
    std::ifstream in(path, std::ios::binary);
    contents[i].assign(std::istreambuf_iterator<char>(in), {});
  }
  const bool same = !contents[0].empty() && contents[0] == contents[1];
  return {same, Fmt("%.0f bytes per run, identical: %.0f",
                    static_cast<double>(contents[0].size()), same)};
}

}  // namespace
}  // namespace ccstream

int main(int argc, char** argv) {
  using namespace ccstream;
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <ccstream cli> <scratch dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::string work = argv[2];
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria =
      {
          {"streaming PrunedPivot equals offline", StreamingEquivalence},
          {"FindPivot with R = V equals PrunedPivot", FindPivotEquivalence},
          {"In-EA equals exact E_mis_A membership", InEACorrectness},
          {"A/B partition purity", PartitionPurity},
          {"full-sampling collapse", FullSamplingCollapse},
          {"Pivot 3-approximation", PivotApproximation},
          {"PrunedPivot (9 + 24/(k-1)) bound, k = 5", PrunedPivotBound},
          {"gadget optima", GadgetGroundTruth},
          {"pass and space accounting", PassAndSpaceAccounting},
          {"desk-scale budget experiment", DeskScaleExperiment},
          {"SimpleSampling variance dominance", VarianceDominance},
          {"CLI determinism", [&] { return CliDeterminism(cli, work); }},
      };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::printf("criterion %2zu %s: %s -- %s\n", i + 1,
                out.pass ? "PASS" : "FAIL", criteria[i].first,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
