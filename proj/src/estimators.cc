#include "ccstream/estimators.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ccstream {

namespace {

std::size_t ClampSize(double raw, std::size_t n, const char* what) {
  if (!std::isfinite(raw) || raw <= 0.0) {
    throw ParameterError(std::string("sample size ") + what +
                         " is not positive (" + std::to_string(raw) + ")");
  }
  const double up = std::ceil(raw);
  if (up >= static_cast<double>(n)) return n;
  return std::max<std::size_t>(1, static_cast<std::size_t>(up));
}

std::optional<NodeId> PivotLookup(
    const std::vector<std::pair<NodeId, StreamingPrunedPivot*>>& table,
    NodeId v) {
  auto it = std::lower_bound(
      table.begin(), table.end(), v,
      [](const auto& entry, NodeId key) { return entry.first < key; });
  if (it == table.end() || it->first != v) return std::nullopt;
  return it->second->result();
}

}  // namespace

void EstimatorParams::Validate() const {
  if (k < 1) {
    throw ParameterError("k must be >= 1, got " + std::to_string(k));
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in [0, 1), got " +
                         std::to_string(alpha));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1), got " +
                         std::to_string(epsilon));
  }
  if ((space.mode == SpaceMode::kBudget || space.mode == SpaceMode::kTest) &&
      !(space.param > 0.0 && std::isfinite(space.param))) {
    throw ParameterError("space parameter must be positive, got " +
                         std::to_string(space.param));
  }
  if (!(degree_cap_slack > 0.0)) {
    throw ParameterError("degree cap slack must be positive");
  }
}

SampleSizes PlanSampleSizes(const EstimatorParams& params, std::size_t n,
                            double sub_epsilon) {
  params.Validate();
  if (n == 0) throw ParameterError("cannot plan sample sizes for n = 0");
  const double nd = static_cast<double>(n);
  const double beta = params.beta();
  const double alpha = params.alpha;
  const double log_n = std::log(nd);
  SampleSizes s;
  switch (params.space.mode) {
    case SpaceMode::kTheory:
    case SpaceMode::kTest: {
      const double c =
          params.space.mode == SpaceMode::kTest ? params.space.param : 1.0;
      const double e2 = sub_epsilon * sub_epsilon;
      s.r = ClampSize(48 * c * params.k * std::pow(nd, 1 - beta) * log_n, n,
                      "r");
      s.t1 = ClampSize(12 * c / e2 * std::pow(nd, 1 - beta) * log_n, n, "t1");
      s.t2 = ClampSize(32 * c / e2 * std::pow(nd, alpha + beta) * log_n, n,
                       "t2");
      s.t = ClampSize(8 * c / e2 * std::pow(nd, alpha + 2 * beta) * log_n, n,
                      "t");
      break;
    }
    case SpaceMode::kBudget: {
      const double base = params.space.param * nd;
      const BudgetSplit& f = params.split;
      s.r = ClampSize(f.reference * base, n, "r");
      s.t1 = ClampSize(f.s1 * base, n, "t1");
      s.t2 = ClampSize(f.s2 * base, n, "t2");
      s.t = ClampSize(f.eb * base, n, "t");
      break;
    }
    case SpaceMode::kFixed: {
      const SampleSizes& f = params.space.fixed;
      s.r = ClampSize(static_cast<double>(f.r), n, "r");
      s.t1 = ClampSize(static_cast<double>(f.t1), n, "t1");
      s.t2 = ClampSize(static_cast<double>(f.t2), n, "t2");
      s.t = ClampSize(static_cast<double>(f.t), n, "t");
      break;
    }
  }
  return s;
}

bool InEAWithPivots(NodeId u, std::optional<NodeId> pivot_u, NodeId v,
                    std::optional<NodeId> pivot_v,
                    const SimilarityOracle& oracle) {
  if (u == v) {
    throw std::invalid_argument("in_EA needs two distinct nodes, got " +
                                std::to_string(u) + " twice");
  }
  if (!pivot_u && !pivot_v) return false;
  if (!pivot_u || !pivot_v) return oracle.Similar(u, v);
  return (*pivot_u == *pivot_v) != oracle.Similar(u, v);
}

bool InEA(NodeId u, NodeId v, const RankFunction& rf,
          const ReferenceSet& reference, int k,
          const SimilarityOracle& oracle) {
  if (u == v) {
    throw std::invalid_argument("in_EA needs two distinct nodes, got " +
                                std::to_string(u) + " twice");
  }
  return InEAWithPivots(u, FindPivot(u, rf, reference, k, oracle), v,
                        FindPivot(v, rf, reference, k, oracle), oracle);
}

// ---------------------------------------------------------------- Est-EA

EstEA::EstEA(const EstimatorParams& params, std::size_t t1, std::size_t t2,
             const RankFunction& rf, const ReferenceSet& reference,
             RunContext& ctx)
    : rf_(rf),
      reference_(reference),
      k_(params.k),
      n_(ctx.n()),
      oracle_(ctx.oracle()),
      threshold_(2.0 * static_cast<double>(t1) /
                 std::pow(static_cast<double>(ctx.n()), 1.0 - params.beta())),
      s1_(t1, DeriveSeed(params.seed, seed_tag::kSampleS1)),
      s2_(t2, DeriveSeed(params.seed, seed_tag::kSampleS2)),
      words_(ctx.census()) {
  if (t1 == 0 || t2 == 0) {
    throw ParameterError("Est-EA sample sizes must be positive");
  }
  UpdateWords();
}

void EstEA::UpdateWords() {
  const auto s1 = static_cast<std::int64_t>(s1_.size() + s1_pivots_.size());
  const auto s2 = static_cast<std::int64_t>(s2_.size() + s2_pivots_.size() +
                                            degrees_.size());
  words_.Set(s1 + s2 + 2);
}

void EstEA::OnItem(NodeId item) {
  switch (pass_) {
    case 1:
      s1_.Offer(item);
      UpdateWords();
      return;
    case 2: {
      const auto pivot = FindPivot(item, rf_, reference_, k_, oracle_);
      const auto s1 = s1_.items();
      std::uint64_t x = 0;
      for (std::size_t i = 0; i < s1.size(); ++i) {
        if (s1[i] == item) continue;
        if (InEAWithPivots(s1[i], s1_pivots_[i], item, pivot, oracle_)) ++x;
      }
      if (record_) classified_.emplace_back(item, x);
      if (static_cast<double>(x) >= threshold_) {
        high_sum_ += static_cast<double>(n_) * static_cast<double>(x) /
                     static_cast<double>(s1.size());
      } else {
        ++low_count_;
        s2_.Offer(item);
        UpdateWords();
      }
      return;
    }
    case 3: {
      const auto pivot = FindPivot(item, rf_, reference_, k_, oracle_);
      const auto s2 = s2_.items();
      for (std::size_t i = 0; i < s2.size(); ++i) {
        if (s2[i] == item) continue;
        if (InEAWithPivots(s2[i], s2_pivots_[i], item, pivot, oracle_)) {
          ++degrees_[i];
        }
      }
      return;
    }
    default:
      throw std::logic_error("Est-EA has no pass " + std::to_string(pass_));
  }
}

void EstEA::EndPass(int pass) {
  if (pass == 1) {
    for (NodeId u : s1_.items()) {
      s1_pivots_.push_back(FindPivot(u, rf_, reference_, k_, oracle_));
    }
  } else if (pass == 2) {
    for (NodeId u : s2_.items()) {
      s2_pivots_.push_back(FindPivot(u, rf_, reference_, k_, oracle_));
    }
    degrees_.assign(s2_.size(), 0);
  } else if (pass == 3) {
    double low_sum = 0.0;
    if (!degrees_.empty()) {
      std::uint64_t total = 0;
      for (std::uint64_t d : degrees_) total += d;
      low_sum = static_cast<double>(low_count_) * static_cast<double>(total) /
                static_cast<double>(degrees_.size());
    }
    estimate_ = (high_sum_ + low_sum) / 2.0;
  }
  UpdateWords();
}

// ---------------------------------------------------------------- Est-EB

EstEB::EstEB(const EstimatorParams& params, std::size_t t,
             const RankFunction& rf, const ReferenceSet& reference,
             RunContext& ctx)
    : rf_(rf),
      reference_(reference),
      k_(params.k),
      n_(ctx.n()),
      oracle_(ctx.oracle()),
      census_(ctx.census()),
      degree_cap_(params.degree_cap_slack *
                      std::pow(static_cast<double>(ctx.n()), params.beta()) +
                  1.0),
      sample_(t, DeriveSeed(params.seed, seed_tag::kSampleB)),
      words_(ctx.census()) {
  if (t == 0) throw ParameterError("Est-EB sample size must be positive");
  UpdateWords();
}

void EstEB::UpdateWords() {
  std::int64_t w = 1 + static_cast<std::int64_t>(sample_.size()) +
                   static_cast<std::int64_t>(n_in_.size() + n_out_.size());
  for (const auto& g : gamma_) w += static_cast<std::int64_t>(g.size());
  words_.Set(w);
}

void EstEB::BeginPass(int pass) {
  pass_ = pass;
  if (pass >= 3 && pass <= k_ + 2) pivots_->BeginPass(pass - 2);
}

void EstEB::OnItem(NodeId item) {
  if (pass_ == 1) {
    if (!FindPivot(item, rf_, reference_, k_, oracle_)) {
      ++b_count_;
      sample_.Offer(item);
      UpdateWords();
    }
  } else if (pass_ == 2) {
    const auto s = sample_.items();
    bool grew = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (oracle_.Similar(s[i], item)) {
        gamma_[i].push_back(item);
        grew = true;
      }
    }
    if (grew) UpdateWords();
  } else if (pass_ <= k_ + 2) {
    pivots_->OnItem(item);
  } else {
    if (FindPivot(item, rf_, reference_, k_, oracle_)) return;
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
      const auto& g = gamma_[i];
      if (std::binary_search(g.begin(), g.end(), item)) continue;
      for (NodeId v : g) {
        if (oracle_.Similar(v, item)) ++n_out_[i];
      }
    }
  }
}

void EstEB::EndPass(int pass) {
  if (pass == 1) {
    gamma_.assign(sample_.size(), {});
    n_in_.assign(sample_.size(), 0);
    n_out_.assign(sample_.size(), 0);
  } else if (pass == 2) {
    std::vector<NodeId> nodes;
    for (auto& g : gamma_) {
      if (static_cast<double>(g.size()) > degree_cap_) ++cap_violations_;
      nodes.insert(nodes.end(), g.begin(), g.end());
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    pivots_ = std::make_unique<PassGroup>("pivots");
    pivot_of_node_.reserve(nodes.size());
    for (NodeId v : nodes) {
      auto* p = pivots_->Own(std::make_unique<StreamingPrunedPivot>(
                                 v, rf_, k_, oracle_, census_),
                             1);
      pivot_of_node_.emplace_back(v, p);
    }
  } else if (pass <= k_ + 2) {
    pivots_->EndPass(pass - 2);
    if (pass == k_ + 2) {
      const auto s = sample_.items();
      for (std::size_t i = 0; i < gamma_.size(); ++i) {
        auto& g = gamma_[i];
        std::erase_if(g, [&](NodeId v) {
          return PivotLookup(pivot_of_node_, v) != s[i];
        });
        std::sort(g.begin(), g.end());
      }
      pivot_of_node_.clear();
      pivot_of_node_.shrink_to_fit();
      pivots_.reset();
    }
  } else {
    std::uint64_t twice_total = 0;
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
      const auto& g = gamma_[i];
      std::uint64_t dissimilar = 0;
      for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
          if (!oracle_.Similar(g[a], g[b])) ++dissimilar;
        }
      }
      n_in_[i] = dissimilar;
      twice_total += 2 * n_in_[i] + n_out_[i];
    }
    estimate_ =
        sample_.size() == 0
            ? 0.0
            : static_cast<double>(b_count_) * static_cast<double>(twice_total) /
                  (2.0 * static_cast<double>(sample_.size()));
  }
  UpdateWords();
}

// -------------------------------------------------------------- C4Approx

RankFunction RankFor(std::uint64_t seed, std::size_t n) {
  return RankFunction(DeriveSeed(seed, seed_tag::kRank), n);
}

C4Approx::C4Approx(const EstimatorParams& params, RunContext& ctx)
    : params_(params),
      ctx_(ctx),
      rf_(RankFor(params.seed, ctx.n())),
      sizes_(PlanSampleSizes(params, ctx.n(), params.epsilon / 8.0)),
      builder_(std::make_unique<ReferenceSetBuilder>(rf_, sizes_.r,
                                                     ctx.census())) {}

C4Approx::~C4Approx() = default;

void C4Approx::BeginPass(int pass) {
  pass_ = pass;
  if (pass >= 2) inner_->BeginPass(pass - 1);
}

void C4Approx::OnItem(NodeId item) {
  if (pass_ == 1) {
    builder_->OnItem(item);
  } else {
    inner_->OnItem(item);
  }
}

void C4Approx::EndPass(int pass) {
  if (pass == 1) {
    builder_->EndPass(1);
    EstimatorParams sub = params_;
    sub.epsilon = params_.epsilon / 8.0;
    const ReferenceSet& r = builder_->result();
    ea_ = std::make_unique<EstEA>(sub, sizes_.t1, sizes_.t2, rf_, r, ctx_);
    eb_ = std::make_unique<EstEB>(sub, sizes_.t, rf_, r, ctx_);
    inner_ = std::make_unique<PassGroup>("c4approx");
    inner_->Add(ea_.get(), 1);
    inner_->Add(eb_.get(), 1);
    return;
  }
  inner_->EndPass(pass - 1);
  if (pass == declared_passes()) {
    C4Result out;
    out.m_a = *ea_->estimate();
    out.m_b = *eb_->estimate();
    out.sizes = sizes_;
    out.b_count = eb_->b_count();
    out.degree_cap_violations = eb_->degree_cap_violations();
    out.estimate = out.m_a + out.m_b;
    if (params_.normalize_output) {
      const double eps = params_.epsilon;
      const double slack =
          0.375 * eps *
          std::pow(static_cast<double>(ctx_.n()), 1.0 - params_.alpha);
      out.estimate = (out.estimate + slack) / (1.0 - eps / 8.0);
    }
    result_ = out;
  }
}

// -------------------------------------------------------- SimpleSampling

SimpleSampling::SimpleSampling(std::uint64_t q, int k, const RankFunction& rf,
                               std::uint64_t seed, RunContext& ctx)
    : k_(k),
      oracle_(ctx.oracle()),
      n_(ctx.n()),
      pivots_("pivots"),
      words_(ctx.census()) {
  if (q == 0) throw ParameterError("SimpleSampling needs q >= 1");
  if (k < 1) throw ParameterError("k must be >= 1, got " + std::to_string(k));
  const std::uint64_t total =
      static_cast<std::uint64_t>(n_) * (n_ > 0 ? n_ - 1 : 0) / 2;
  if (q >= total) {
    exhaustive_ = true;
    for (NodeId u = 0; u < n_; ++u) {
      for (NodeId v = u + 1; v < n_; ++v) pairs_.emplace_back(u, v);
    }
  } else {
    Rng rng(DeriveSeed(seed, seed_tag::kPairs));
    pairs_.reserve(q);
    for (std::uint64_t i = 0; i < q; ++i) {
      const auto u = static_cast<NodeId>(rng.Below(n_));
      auto v = static_cast<NodeId>(rng.Below(n_ - 1));
      if (v >= u) ++v;
      pairs_.emplace_back(u, v);
    }
  }
  words_.Set(2 * static_cast<std::int64_t>(pairs_.size()));

  std::vector<NodeId> nodes;
  nodes.reserve(2 * pairs_.size());
  for (auto [u, v] : pairs_) {
    nodes.push_back(u);
    nodes.push_back(v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (NodeId v : nodes) {
    auto* p = pivots_.Own(std::make_unique<StreamingPrunedPivot>(
                              v, rf, k, oracle_, ctx.census()),
                          1);
    pivot_of_node_.emplace_back(v, p);
  }
  if (pairs_.empty()) estimate_ = 0.0;
}

void SimpleSampling::BeginPass(int pass) { pivots_.BeginPass(pass); }

void SimpleSampling::OnItem(NodeId item) { pivots_.OnItem(item); }

void SimpleSampling::EndPass(int pass) {
  pivots_.EndPass(pass);
  if (pivots_.finished()) Finish();
}

void SimpleSampling::Finish() {
  std::uint64_t mismatches = 0;
  for (auto [u, v] : pairs_) {
    const bool together =
        *PivotLookup(pivot_of_node_, u) == *PivotLookup(pivot_of_node_, v);
    if (oracle_.Similar(u, v) != together) ++mismatches;
  }
  const double total = static_cast<double>(n_) *
                       static_cast<double>(n_ - 1) / 2.0;
  estimate_ = static_cast<double>(mismatches) * total /
              static_cast<double>(pairs_.size());
}

std::uint64_t PairsForBudget(double fraction, std::size_t n) {
  if (!(fraction > 0.0)) {
    throw ParameterError("budget fraction must be positive");
  }
  const double pairs = std::ceil(2.0 * fraction * static_cast<double>(n));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(pairs));
}

// --------------------------------------------------------------- drivers

EstimateRun RunEstEA(const NodeStream& stream, const EstimatorParams& params,
                     const RankFunction& rf, const ReferenceSet& reference,
                     const SimilarityOracle& oracle) {
  const SampleSizes sizes =
      PlanSampleSizes(params, stream.size(), params.epsilon);
  RunContext ctx(oracle);
  EstEA ea(params, sizes.t1, sizes.t2, rf, reference, ctx);
  PassConsumer* consumers[] = {&ea};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx);
  return {*ea.estimate(), acc};
}

EstimateRun RunEstEB(const NodeStream& stream, const EstimatorParams& params,
                     const RankFunction& rf, const ReferenceSet& reference,
                     const SimilarityOracle& oracle) {
  const SampleSizes sizes =
      PlanSampleSizes(params, stream.size(), params.epsilon);
  RunContext ctx(oracle);
  EstEB eb(params, sizes.t, rf, reference, ctx);
  PassConsumer* consumers[] = {&eb};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx);
  return {*eb.estimate(), acc};
}

C4Run RunC4Approx(const NodeStream& stream, const EstimatorParams& params,
                  const SimilarityOracle& oracle, const RunOptions& options) {
  RunContext ctx(oracle);
  C4Approx c4(params, ctx);
  PassConsumer* consumers[] = {&c4};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx, options);
  return {*c4.result(), acc};
}

EstimateRun RunSimpleSampling(const NodeStream& stream, std::uint64_t q, int k,
                              std::uint64_t seed,
                              const SimilarityOracle& oracle,
                              const RunOptions& options) {
  RunContext ctx(oracle);
  const RankFunction rf = RankFor(seed, stream.size());
  SimpleSampling ss(q, k, rf, seed, ctx);
  if (ss.finished()) return {*ss.estimate(), {}};
  PassConsumer* consumers[] = {&ss};
  const Accounting acc = RunMultiplexed(stream, consumers, ctx, options);
  return {*ss.estimate(), acc};
}

C4Run RunC4ApproxMedian(const NodeStream& stream,
                        const EstimatorParams& params, int repetitions,
                        const SimilarityOracle& oracle,
                        const RunOptions& options) {
  if (repetitions < 1) {
    throw ParameterError("repetition count must be >= 1");
  }
  RunContext ctx(oracle);
  std::vector<std::unique_ptr<C4Approx>> runs;
  std::vector<PassConsumer*> consumers;
  const std::uint64_t base = DeriveSeed(params.seed, seed_tag::kRepetition);
  for (int m = 0; m < repetitions; ++m) {
    EstimatorParams p = params;
    p.seed = repetitions == 1 ? params.seed
                              : DeriveSeed(base, static_cast<std::uint64_t>(m));
    runs.push_back(std::make_unique<C4Approx>(p, ctx));
    consumers.push_back(runs.back().get());
  }
  const Accounting acc = RunMultiplexed(stream, consumers, ctx, options);
  std::vector<C4Result> results;
  for (const auto& r : runs) results.push_back(*r->result());
  std::sort(results.begin(), results.end(),
            [](const C4Result& a, const C4Result& b) {
              return a.estimate < b.estimate;
            });
  C4Result mid = results[results.size() / 2];
  if (results.size() % 2 == 0) {
    mid.estimate =
        (mid.estimate + results[results.size() / 2 - 1].estimate) / 2.0;
  }
  return {mid, acc};
}

}  // namespace ccstream
