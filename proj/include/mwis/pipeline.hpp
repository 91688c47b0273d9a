#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/reductions.hpp"
#include "mwis/scheduler.hpp"

namespace mwis {

// Raised when an emitted solution fails re-verification against the input.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves a kernel; returns kernel vertex ids (local to the kernel graph).
using KernelSolver = std::function<std::vector<VertexId>(const StaticGraph& kernel)>;

struct PipelineResult {
  std::vector<VertexId> solution;  // original ids, sorted
  Weight weight = 0;
  Weight kernel_weight = 0;
  Weight offset = 0;
  std::size_t kernel_n = 0, kernel_m = 0;
  std::optional<ReduceStats> reduce_stats;
};

// Throws VerificationError unless `set` is an independent set of g whose
// weight equals `claimed`.
void verify_solution(const StaticGraph& g, std::span<const VertexId> set, Weight claimed);

// Optional reduction, kernel solve, lift, verification.
PipelineResult pipeline_solve(const StaticGraph& g, const std::optional<ScreeningConfig>& reduce,
                              const ReducerBudgets& budgets, const KernelSolver& solve);

}  // namespace mwis
