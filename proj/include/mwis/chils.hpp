#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/local_search.hpp"

namespace mwis {

// Induced subgraph on the vertices in some but not all portfolio solutions.
struct DCore {
  StaticGraph graph;
  std::vector<VertexId> to_original;   // core id -> original id
  std::vector<VertexId> intersection;  // in every solution, sorted
  Weight offset = 0;                   // ω(intersection)

  // intersection ∪ mapped core set, sorted.
  std::vector<VertexId> lift(std::span<const VertexId> core_set) const;
};

DCore build_dcore(const StaticGraph& g, std::span<const Solution> portfolio);

struct ChilsConfig {
  using Seconds = std::chrono::duration<double>;

  std::size_t portfolio = 16;
  std::size_t mq_base = 32;  // solution i uses mq_base + 4 i
  Seconds t_global{10.0};
  Seconds t_core{10.0};
  Seconds time_limit{60.0};  // overall; ignored in deterministic mode
  std::size_t perturb_threshold = 500;
  // Iteration counts replace every time limit when set.
  struct Deterministic {
    std::uint64_t ls_iterations = 1000;
    std::size_t chils_iterations = 10;
  };
  std::optional<Deterministic> deterministic;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  // Re-checks the lift of every accepted core solution.
  bool verify = false;

  std::size_t queue_size(std::size_t id) const { return mq_base + 4 * id; }
  void validate() const;  // throws std::invalid_argument
};

struct ChilsIteration {
  std::size_t iteration = 0;
  Weight best_weight = 0;
  std::size_t best_id = 0;
  std::size_t core_n = 0, core_m = 0;
  Weight core_offset = 0;
  std::size_t accepted = 0;
  std::size_t perturbed = 0;
  double elapsed_s = 0;
};

struct ChilsResult {
  std::vector<VertexId> best;
  Weight weight = 0;
  std::size_t best_id = 0;
  std::vector<ChilsIteration> trace;
  std::vector<Weight> portfolio_weights;  // final ω(S_i) by id
  std::uint64_t lift_checks = 0;
  std::uint64_t lift_failures = 0;  // lifted set dependent or weight mismatch
};

// Best solution of a portfolio: maximum weight, lowest id on ties.
std::size_t best_index(std::span<const Solution> portfolio);

// One perturbation + greedy pass without backtracking on every odd-id
// solution other than `best`. Returns how many were perturbed.
std::size_t parallel_perturb(const StaticGraph& g, std::vector<Solution>& portfolio, std::size_t best,
                             const ChilsConfig& cfg, std::size_t iteration);

ChilsResult run_chils(const StaticGraph& g, const ChilsConfig& cfg, const std::optional<Solution>& warm = std::nullopt);

// "iter=.. best=.. best_id=.. core_n=.. core_m=.. core_offset=.. accepted=.. perturbed=.. elapsed_s=.."
std::string format_trace(const ChilsIteration& it);

}  // namespace mwis
