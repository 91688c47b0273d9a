#include "mwis/pipeline.hpp"

#include <algorithm>
#include <string>

namespace mwis {

void verify_solution(const StaticGraph& g, std::span<const VertexId> set, Weight claimed) {
  std::vector<char> in(g.num_vertices(), 0);
  Weight total = 0;
  for (VertexId v : set) {
    if (v >= g.num_vertices()) throw VerificationError("solution vertex " + std::to_string(v + 1) + " out of range");
    if (in[v]) throw VerificationError("solution repeats vertex " + std::to_string(v + 1));
    in[v] = 1;
    total += g.weight(v);
  }
  for (VertexId v : set)
    for (VertexId u : g.neighbors(v))
      if (in[u])
        throw VerificationError("solution is not independent: edge " + std::to_string(v + 1) + "-" +
                                std::to_string(u + 1));
  if (total != claimed)
    throw VerificationError("solution weight " + std::to_string(total) + " differs from reported " +
                            std::to_string(claimed));
}

PipelineResult pipeline_solve(const StaticGraph& g, const std::optional<ScreeningConfig>& reduce,
                              const ReducerBudgets& budgets, const KernelSolver& solve) {
  PipelineResult out;
  if (!reduce) {
    out.solution = solve(g);
    std::sort(out.solution.begin(), out.solution.end());
    out.kernel_n = g.num_vertices();
    out.kernel_m = g.num_edges();
    out.kernel_weight = g.set_weight(out.solution);
    out.weight = out.kernel_weight;
    verify_solution(g, out.solution, out.weight);
    return out;
  }

  DynamicGraph dg(g);
  auto reduced = run_reduce(dg, *reduce, budgets);
  std::vector<VertexId> ids;
  const StaticGraph kernel = dg.snapshot(&ids);
  out.kernel_n = kernel.num_vertices();
  out.kernel_m = kernel.num_edges();
  out.offset = reduced.log.offset;
  out.reduce_stats = reduced.stats;

  std::vector<VertexId> local = kernel.num_vertices() ? solve(kernel) : std::vector<VertexId>{};
  if (!kernel.is_independent(local)) throw VerificationError("kernel solver returned a dependent set");
  out.kernel_weight = kernel.set_weight(local);
  for (VertexId& v : local) v = ids[v];
  try {
    out.solution = restore_solution(reduced.log, dg, local);
  } catch (const ReconstructionError& e) {
    throw VerificationError(std::string("reconstruction failed: ") + e.what());
  }
  std::sort(out.solution.begin(), out.solution.end());
  out.weight = g.set_weight(out.solution);
  verify_solution(g, out.solution, out.weight);
  if (out.weight < out.kernel_weight + out.offset)
    throw VerificationError("lifted weight " + std::to_string(out.weight) + " below kernel weight plus offset " +
                            std::to_string(out.kernel_weight + out.offset));
  return out;
}

}  // namespace mwis
