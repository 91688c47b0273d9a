#pragma once

#include <string>
#include <vector>

#include "mwis/graph.hpp"
#include "mwis/reductions.hpp"
#include "mwis/rng.hpp"
#include "mwis/scheduler.hpp"

namespace mwis {

struct LabelRecord {
  VertexId vertex;
  RuleId rule;
  int label;          // 0 not reducible, 1 reducible, 2 oracle budget exhausted
  VertexId anchor;    // where the rule was applied to earn the label; kNoVertex for 0
};

// One record per active vertex, ascending. Each anchor is tested by applying
// the rule and rolling it back, so the graph is left unchanged. A vertex keeps
// the strongest label it receives (1 over 2 over 0).
std::vector<LabelRecord> generate_labels(DynamicGraph& g, RuleId rule, const ReducerBudgets& budgets);
std::vector<LabelRecord> generate_labels(const StaticGraph& g, RuleId rule, const ReducerBudgets& budgets);

enum class Split : std::uint8_t { Train, Val, Test };
std::string_view split_name(Split s);

// Uniform shuffle; floor(n/5) vertices each to Val and Test, the rest to Train.
std::vector<Split> split_vertices(std::size_t n, std::uint64_t seed);

// "graph,vertex,rule,label" with a header line and 1-indexed vertices.
std::string labels_to_csv(const std::vector<LabelRecord>& records, const std::string& graph_name);
// "graph,vertex,split" with a header line and 1-indexed vertices.
std::string split_to_csv(const std::vector<Split>& split, const std::string& graph_name);

// Scores 1 exactly on the vertices labelgen marks reducible.
class LabelOracleScorer : public VertexScorer {
 public:
  LabelOracleScorer(RuleId rule, ReducerBudgets budgets) : rule_(rule), budgets_(budgets) {}
  std::vector<double> score(const StaticGraph& g) const override;

 private:
  RuleId rule_;
  ReducerBudgets budgets_;
};

// Independent uniform scores; a new stream per call, keyed by the call index.
class RandomScorer : public VertexScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> score(const StaticGraph& g) const override;

 private:
  std::uint64_t seed_;
  mutable std::uint64_t calls_ = 0;
};

}  // namespace mwis
