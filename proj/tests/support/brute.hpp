#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/reductions.hpp"
#include "mwis/rng.hpp"

namespace mwis::testing {

struct BruteResult {
  Weight weight = 0;
  std::vector<VertexId> set;  // lexicographically smallest optimum
};

// Exhaustive search over all independent sets. Intended for n <= 24.
BruteResult brute_force(const StaticGraph& g);
Weight brute_alpha(const StaticGraph& g);
// Active part of a dynamic graph; the returned set uses DynamicGraph ids.
BruteResult brute_force(const DynamicGraph& g);

// Every independent set, as sorted vertex lists.
std::vector<std::vector<VertexId>> all_independent_sets(const StaticGraph& g);

StaticGraph make_graph(std::vector<Weight> weights, std::vector<std::pair<VertexId, VertexId>> edges);
// G(n, p) with weights uniform in [1, max_weight].
StaticGraph random_graph(std::size_t n, double p, Weight max_weight, Rng& rng);
// Random graph biased towards the local patterns the reductions look for
// (pendant vertices, cliques, twins, shared neighborhoods).
StaticGraph random_structured_graph(std::size_t n, Weight max_weight, Rng& rng);

struct RuleCheck {
  RuleOutcome outcome = RuleOutcome::NotApplicable;
  std::string failure;  // empty when every check passed
};

// Applies `apply` to a fresh DynamicGraph of g and checks exactness:
// alpha(G) = alpha(G') + offset, the lifted optimum of G' is an optimum of G,
// NotApplicable leaves the graph untouched, and the graph stays valid.
RuleCheck check_rule(const StaticGraph& g,
                     const std::function<RuleOutcome(ReductionContext&)>& apply,
                     const ReducerBudgets& budgets = {});

}  // namespace mwis::testing
