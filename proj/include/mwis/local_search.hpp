#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/rng.hpp"

namespace mwis {

// Independent set with per-vertex tightness |N(v) ∩ S| and solution-neighbor
// weight ω(N(v) ∩ S), maintained incrementally.
class Solution {
 public:
  explicit Solution(const StaticGraph& g);
  // Throws std::invalid_argument if `set` is not independent in g.
  Solution(const StaticGraph& g, std::span<const VertexId> set);

  const StaticGraph& graph() const { return *g_; }
  bool contains(VertexId v) const { return in_[v] != 0; }
  std::uint32_t tightness(VertexId v) const { return tight_[v]; }
  Weight neighbor_weight(VertexId v) const { return nweight_[v]; }
  Weight weight() const { return weight_; }
  std::size_t size() const { return size_; }
  std::vector<VertexId> members() const;

  // insert requires tightness 0.
  void insert(VertexId v);
  void remove(VertexId v);

  // Recomputes every maintained field from scratch and compares.
  bool consistent() const;

 private:
  const StaticGraph* g_;
  std::vector<char> in_;
  std::vector<std::uint32_t> tight_;
  std::vector<Weight> nweight_;
  Weight weight_ = 0;
  std::size_t size_ = 0;
};

// Greedy insertion in a random vertex order.
Solution random_greedy_solution(const StaticGraph& g, Rng& rng);

// One BASELINE search state: solution, change queue Q, undo journal, PRNG.
class LocalSearch {
 public:
  static constexpr std::size_t kDefaultMaxPath = 128;

  LocalSearch(const StaticGraph& g, Solution initial, std::size_t mq, Rng rng,
              std::size_t max_path = kDefaultMaxPath);

  const Solution& solution() const { return sol_; }
  std::size_t mq() const { return mq_; }
  std::uint64_t iterations() const { return iterations_; }
  const std::deque<VertexId>& queue() const { return queue_; }

  void push(VertexId v) { queue_.push_back(v); }
  void push_all();

  // Pops Q until empty, applying neighborhood swap, two-one swap, then
  // improving alternating augmenting paths. Never lowers the weight.
  void greedy();
  // Replaces x in S by a non-adjacent pair of x-exclusive one-tight neighbors
  // that outweighs it.
  bool two_one(VertexId x);
  // Alternating augmenting path from `start` (in S, or one-tight). Greedy mode
  // applies the best strictly improving prefix only; perturbation mode applies
  // the best improving prefix if one exists and the whole path otherwise.
  bool aap(VertexId start, bool perturbation);
  // Random perturbation, greedy repair, and (optionally) backtracking when the
  // weight dropped.
  void iterate(bool backtrack = true);

  // Runs until the iteration count or deadline is hit; returns the best solution.
  Solution run(std::optional<std::uint64_t> max_iterations,
               std::optional<std::chrono::steady_clock::time_point> deadline);

 private:
  void insert_logged(VertexId v);
  void remove_logged(VertexId v);
  void insert_evict(VertexId v);
  bool neighborhood_swap(VertexId v);
  void undo();
  void remember_best();

  struct Step {
    VertexId in;   // kNoVertex for the removal-only first step
    VertexId out;  // kNoVertex for a terminal step
  };

  const StaticGraph& g_;
  Solution sol_;
  std::size_t mq_;
  Rng rng_;
  std::size_t max_path_;
  std::deque<VertexId> queue_;
  std::vector<std::pair<VertexId, bool>> journal_;  // (vertex, inserted)
  std::uint64_t iterations_ = 0;
  Weight best_weight_ = 0;
  std::vector<VertexId> best_;

  // Scratch for path construction.
  std::vector<char> on_path_;      // inserted or removed by the current path
  std::vector<std::uint32_t> near_in_;  // number of path-inserted neighbors
};

struct BaselineConfig {
  std::size_t mq = 32;
  std::optional<std::uint64_t> iterations;
  std::optional<std::chrono::duration<double>> time_limit;
  std::uint64_t seed = 0;
};

// BASELINE from `initial` (random greedy when absent).
Solution run_baseline(const StaticGraph& g, const std::optional<Solution>& initial, const BaselineConfig& cfg);

}  // namespace mwis
