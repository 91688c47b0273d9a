#pragma once

#include <array>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/reductions.hpp"

namespace mwis {

enum class ScreeningMode { NoGnnRed, Never, Always, Initial, InitialTight };

std::string_view mode_name(ScreeningMode m);
// Accepts "no-gnn", "never", "always", "initial", "initial-tight".
ScreeningMode mode_from_name(std::string_view name);

// A vertex is suggested when its score is strictly greater than this.
inline constexpr double kSuggestionThreshold = 0.5;

// Anything that scores the vertices of a snapshot in [0, 1].
class VertexScorer {
 public:
  virtual ~VertexScorer() = default;
  virtual std::vector<double> score(const StaticGraph& g) const = 0;
};

// Local ids (into g) of the vertices scoring above the threshold.
std::vector<VertexId> screen(const VertexScorer& model, const StaticGraph& g);

struct ScreeningConfig {
  ScreeningMode mode = ScreeningMode::Never;
  // Indexed by RuleId; only expensive rules consult their entry. A missing
  // model leaves that rule exhaustive.
  std::array<std::shared_ptr<const VertexScorer>, kNumRules> models{};
  // NoGnnRed and Never re-queue every vertex once the queues drain after a
  // change, until a full sweep changes nothing. Off gives the plain
  // changed-vertex propagation, which can stop short of a fixpoint.
  bool closure_sweep = true;

  bool screens() const {
    return mode == ScreeningMode::Always || mode == ScreeningMode::Initial || mode == ScreeningMode::InitialTight;
  }
};

// Per-rule FIFO queues with membership flags.
class QueueSet {
 public:
  explicit QueueSet(std::size_t rules = kNumRules) : queues_(rules), member_(rules), accepting_(rules, 1) {}

  // Appends v unless already queued or the queue is closed.
  void push(std::size_t rule, VertexId v);
  void push_changed(std::span<const VertexId> changed);
  std::optional<VertexId> pop(std::size_t rule);
  bool empty(std::size_t rule) const { return queues_[rule].empty(); }
  std::size_t size(std::size_t rule) const { return queues_[rule].size(); }
  void clear(std::size_t rule);
  void set_accepting(std::size_t rule, bool accepting) { accepting_[rule] = accepting; }
  bool accepting(std::size_t rule) const { return accepting_[rule] != 0; }
  std::size_t num_rules() const { return queues_.size(); }

 private:
  std::vector<std::deque<VertexId>> queues_;
  std::vector<std::vector<char>> member_;
  std::vector<char> accepting_;
};

struct RuleStats {
  std::uint64_t attempts = 0;
  std::uint64_t applied = 0;
  std::uint64_t skipped = 0;
  std::uint64_t screenings = 0;
  std::uint64_t suggested = 0;
  double time_ms = 0;
};

struct ReduceStats {
  std::array<RuleStats, kNumRules> rules{};
  ScreeningMode mode = ScreeningMode::Never;
  std::size_t input_n = 0, input_m = 0;
  std::size_t kernel_n = 0, kernel_m = 0;
  Weight offset = 0;
  double time_ms = 0;
  // Attempts of expensive rules, counted separately so the NoGnnRed
  // guarantee can be checked directly.
  std::uint64_t expensive_invocations = 0;
  // Full re-queues done by the closure sweep.
  std::uint64_t sweeps = 0;

  // "rule=<name> attempts=.. applied=.. skipped=.. screenings=.. suggested=.. time_ms=.." per rule,
  // then one "summary ..." line.
  std::string format() const;
};

struct ReduceResult {
  ReductionLog log;
  ReduceStats stats;
};

// Exhaustive reduction loop. Cheap rules run first; a rule is tried only when
// every earlier queue is empty, and any success sends the changed vertices to
// all queues and restarts from the first rule.
ReduceResult run_reduce(DynamicGraph& g, const ScreeningConfig& cfg, const ReducerBudgets& budgets = {});

// Original vertices still represented in the kernel: active originals plus the
// ancestors of active fold products. Sorted.
std::vector<VertexId> kernel_support(const DynamicGraph& g);

}  // namespace mwis
