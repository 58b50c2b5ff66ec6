#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccstream/similarity.h"

namespace ccstream {

// Replayable node-arrival stream sigma_1..sigma_n. n is known before the
// first pass; every replay yields the same sequence.
class NodeStream {
 public:
  // Arrival order 0, 1, ..., n - 1.
  explicit NodeStream(std::size_t n) : n_(n) {}
  // Arbitrary arrival order; must be a permutation of [0, n).
  explicit NodeStream(std::vector<NodeId> order);

  std::size_t size() const { return n_; }
  NodeId operator[](std::size_t j) const {
    return order_.empty() ? static_cast<NodeId>(j) : order_[j];
  }

  template <typename F>
  void ForEach(F&& f) const {
    for (std::size_t j = 0; j < n_; ++j) f((*this)[j]);
  }

 private:
  std::size_t n_;
  std::vector<NodeId> order_;
};

// Live-word census. Consumers declare what they store; one word per node id,
// rank key, counter, or list slot.
class WordCensus {
 public:
  // Negative deltas release words. Throws std::logic_error if the live count
  // would go negative (an accounting bug in the caller).
  void Add(std::int64_t words);

  std::int64_t live() const { return live_; }
  std::int64_t peak() const { return peak_; }

 private:
  std::int64_t live_ = 0;
  std::int64_t peak_ = 0;
};

// A block of words held in a census; Set() moves the declared size, the
// destructor releases it.
class TrackedWords {
 public:
  explicit TrackedWords(WordCensus& census) : census_(&census) {}
  ~TrackedWords() { Release(); }
  TrackedWords(const TrackedWords&) = delete;
  TrackedWords& operator=(const TrackedWords&) = delete;

  void Set(std::int64_t words) {
    census_->Add(words - words_);
    words_ = words;
  }
  void Release() { Set(0); }
  std::int64_t words() const { return words_; }

 private:
  WordCensus* census_;
  std::int64_t words_ = 0;
};

struct Accounting {
  int passes_used = 0;
  std::int64_t peak_words = 0;
  std::uint64_t oracle_calls = 0;
};

// Per-run state shared by all consumers of one run: the counted oracle view
// and the word census.
class RunContext {
 public:
  explicit RunContext(const SimilarityOracle& oracle) : oracle_(oracle) {}
  RunContext(const RunContext&) = delete;
  RunContext& operator=(const RunContext&) = delete;

  const SimilarityOracle& oracle() const { return oracle_; }
  WordCensus& census() { return census_; }
  std::size_t n() const { return oracle_.size(); }

 private:
  CountingOracle oracle_;
  WordCensus census_;
};

// Receives begin_pass(p), on_item(sigma_j) for j = 1..n in order, and
// end_pass(p) for p = 1, 2, ... up to declared_passes(), unless it reports
// finished() earlier. Pass numbers are local to the consumer.
class PassConsumer {
 public:
  virtual ~PassConsumer() = default;

  virtual std::string_view name() const = 0;
  virtual int declared_passes() const = 0;
  virtual bool finished() const { return false; }

  virtual void BeginPass(int /*pass*/) {}
  virtual void OnItem(NodeId item) = 0;
  virtual void EndPass(int /*pass*/) {}
};

// Raised when a consumer throws; the message is prefixed with the consumer
// path ("c4approx/est_eb: ...").
class ConsumerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fans one sequence of passes out to child consumers, each starting at a
// chosen (group-local) pass. Children may be added between passes, including
// from inside another child's EndPass; they join at their start pass.
class PassGroup final : public PassConsumer {
 public:
  // declared_passes <= 0 means "as many as the children need".
  explicit PassGroup(std::string name, int declared_passes = 0)
      : name_(std::move(name)), declared_(declared_passes) {}

  // Non-owning. start_pass defaults to the next pass not yet begun.
  void Add(PassConsumer* child, int start_pass = 0);
  template <typename T>
  T* Own(std::unique_ptr<T> child, int start_pass = 0) {
    T* raw = child.get();
    owned_.push_back(std::move(child));
    Add(raw, start_pass);
    return raw;
  }

  std::string_view name() const override { return name_; }
  int declared_passes() const override;
  bool finished() const override;
  void BeginPass(int pass) override;
  void OnItem(NodeId item) override;
  void EndPass(int pass) override;

  std::size_t child_count() const { return children_.size(); }

 private:
  struct Child {
    PassConsumer* consumer;
    int start;
  };
  bool Wants(const Child& c, int pass) const;
  [[noreturn]] void Rethrow(const PassConsumer& c) const;

  std::string name_;
  int declared_;
  int pass_ = 0;
  std::vector<Child> children_;
  std::vector<std::size_t> in_pass_;
  std::vector<std::unique_ptr<PassConsumer>> owned_;
};

struct RunOptions {
  // Prepend one pass that only counts items (for headerless input).
  bool count_pass = false;
};

// Drives the consumers over shared physical passes until every one of them
// is done. passes_used is the number of physical passes performed; the
// oracle and census figures come from `ctx`.
Accounting RunMultiplexed(const NodeStream& stream,
                          std::span<PassConsumer* const> consumers,
                          RunContext& ctx, const RunOptions& options = {});

}  // namespace ccstream
