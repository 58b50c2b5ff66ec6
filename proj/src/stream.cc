#include "ccstream/stream.h"

#include <algorithm>

namespace ccstream {

NodeStream::NodeStream(std::vector<NodeId> order)
    : n_(order.size()), order_(std::move(order)) {
  std::vector<bool> seen(n_, false);
  for (NodeId u : order_) {
    if (u >= n_ || seen[u]) {
      throw std::invalid_argument(
          "stream order is not a permutation of [0, n)");
    }
    seen[u] = true;
  }
}

void WordCensus::Add(std::int64_t words) {
  if (live_ + words < 0) {
    throw std::logic_error("word census went negative: live " +
                           std::to_string(live_) + ", delta " +
                           std::to_string(words));
  }
  live_ += words;
  peak_ = std::max(peak_, live_);
}

void PassGroup::Add(PassConsumer* child, int start_pass) {
  if (start_pass == 0) start_pass = pass_ + 1;
  if (start_pass <= pass_) {
    throw std::logic_error("consumer '" + std::string(child->name()) +
                           "' cannot join pass " + std::to_string(start_pass) +
                           " of group '" + name_ + "' at pass " +
                           std::to_string(pass_));
  }
  children_.push_back({child, start_pass});
}

int PassGroup::declared_passes() const {
  if (declared_ > 0) return declared_;
  int last = 0;
  for (const auto& c : children_) {
    last = std::max(last, c.start + c.consumer->declared_passes() - 1);
  }
  return last;
}

bool PassGroup::Wants(const Child& c, int pass) const {
  return pass >= c.start &&
         pass < c.start + c.consumer->declared_passes() &&
         !c.consumer->finished();
}

bool PassGroup::finished() const {
  if (declared_ > 0) return pass_ >= declared_;
  return std::none_of(children_.begin(), children_.end(), [&](const Child& c) {
    return !c.consumer->finished() &&
           pass_ < c.start + c.consumer->declared_passes() - 1;
  });
}

void PassGroup::Rethrow(const PassConsumer& c) const {
  try {
    throw;
  } catch (const std::exception& e) {
    throw ConsumerError(std::string(c.name()) + ": " + e.what());
  }
}

void PassGroup::BeginPass(int pass) {
  pass_ = pass;
  in_pass_.clear();
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (Wants(children_[i], pass)) in_pass_.push_back(i);
  }
  for (std::size_t i : in_pass_) {
    const Child c = children_[i];
    try {
      c.consumer->BeginPass(pass - c.start + 1);
    } catch (...) {
      Rethrow(*c.consumer);
    }
  }
}

void PassGroup::OnItem(NodeId item) {
  for (std::size_t i : in_pass_) {
    PassConsumer* c = children_[i].consumer;
    try {
      c->OnItem(item);
    } catch (...) {
      Rethrow(*c);
    }
  }
}

void PassGroup::EndPass(int pass) {
  // Index loop: children may be appended while this runs.
  const std::vector<std::size_t> active = in_pass_;
  for (std::size_t i : active) {
    const Child c = children_[i];
    try {
      c.consumer->EndPass(pass - c.start + 1);
    } catch (...) {
      Rethrow(*c.consumer);
    }
  }
  in_pass_.clear();
}

Accounting RunMultiplexed(const NodeStream& stream,
                          std::span<PassConsumer* const> consumers,
                          RunContext& ctx, const RunOptions& options) {
  if (consumers.empty()) {
    throw std::invalid_argument("RunMultiplexed needs at least one consumer");
  }
  if (stream.size() != ctx.n()) {
    throw std::invalid_argument("stream length " +
                                std::to_string(stream.size()) +
                                " does not match oracle size " +
                                std::to_string(ctx.n()));
  }
  PassGroup group("run");
  for (PassConsumer* c : consumers) group.Add(c, 1);

  Accounting acc;
  if (options.count_pass) {
    TrackedWords counter(ctx.census());
    counter.Set(1);
    std::size_t count = 0;
    stream.ForEach([&](NodeId) { ++count; });
    if (count != stream.size()) {
      throw std::logic_error("counting pass disagrees with stream header");
    }
    ++acc.passes_used;
  }
  int pass = 0;
  while (!group.finished()) {
    ++pass;
    group.BeginPass(pass);
    stream.ForEach([&](NodeId item) { group.OnItem(item); });
    group.EndPass(pass);
  }
  acc.passes_used += pass;
  acc.peak_words = ctx.census().peak();
  acc.oracle_calls = ctx.oracle().query_count();
  return acc;
}

}  // namespace ccstream
