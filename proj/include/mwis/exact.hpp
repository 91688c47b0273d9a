#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mwis/graph.hpp"

namespace mwis {

struct Budget {
  std::uint64_t node_budget = 1'000'000;
  std::optional<std::chrono::steady_clock::duration> time_cap;
  // Return the lexicographically smallest optimal set. Costs extra search on
  // graphs with many ties, so reductions that only need the weight leave it off.
  bool lexicographic = false;
};

enum class ExactStatus { Optimal, BudgetExceeded };

struct ExactResult {
  Weight weight = 0;
  std::vector<VertexId> set;  // sorted
  ExactStatus status = ExactStatus::Optimal;
  std::uint64_t nodes = 0;

  bool optimal() const { return status == ExactStatus::Optimal; }
};

// Branch and bound on a maximum-degree vertex.
ExactResult solve_exact(const StaticGraph& g, const Budget& budget = {});

enum class EnumerationStatus { Complete, Overflow, Stopped };

// Visits every independent set (including the empty set) in increasing bitmask
// order over the local vertex numbering. The visitor returns false to stop early.
// Overflow when more than `cap` sets exist or the graph exceeds 63 vertices.
EnumerationStatus enumerate_independent_sets(
    const StaticGraph& g, std::uint64_t cap,
    const std::function<bool(std::span<const VertexId>)>& visit);

}  // namespace mwis
