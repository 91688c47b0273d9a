#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mwis/exact.hpp"
#include "mwis/graph.hpp"

namespace mwis {

// Scheduler order: cheap rules first, then the expensive ones.
enum class RuleId : std::uint8_t {
  NeighborhoodRemoval,
  DegreeOne,
  Triangle,
  VShape,
  Simplicial,
  SimplicialTransfer,
  Domination,
  SingleEdge,
  ExtendedSingleEdge,
  Twin,
  AlmostTwin,
  Funnel,
  CliqueNeighborhood,
  ExtendedDomination,
  ExtendedUnconfined,
  CriticalSet,
  ExtendedDominationReverse,
  GeneralizedFold,
  HeavySet,
  HeavySet3,
  CutVertex,
};

inline constexpr std::size_t kNumRules = 21;

// Which vertices a successful application labels in the training data.
enum class LabelTarget : std::uint8_t { Anchor, Included, Excluded, Twins, ArticulationPoint };

struct RuleInfo {
  RuleId id;
  std::string_view name;  // stable token used in traces, stats and file names
  bool expensive;
  bool global;
  bool uses_oracle;
  LabelTarget label;
};

const std::array<RuleInfo, kNumRules>& rule_table();
const RuleInfo& rule_info(RuleId id);
// Accepts the trace token; throws std::invalid_argument on unknown names.
RuleId rule_from_name(std::string_view name);

struct ReducerBudgets {
  std::size_t enumeration_limit = 16;
  std::uint64_t oracle_node_budget = 1'000'000;
  std::chrono::milliseconds per_vertex_time{100};
  double global_rule_fraction = 0.01;
  std::size_t cut_component_limit = 32;
  std::size_t heavy_pair_cap = 64;
  std::size_t heavy_triple_cap = 128;
  bool strengthened_almost_twin = false;
  bool full_unconfined = false;

  Budget oracle_budget() const;
};

namespace event {
struct Include {
  VertexId v;
  Weight weight;
};
struct Exclude {
  VertexId v;
};
// Extended domination: edge u-v removed, v lost `delta`.
struct EdgeRemove {
  VertexId u, v;
  Weight delta;
};
// Reverse: edge u-v added, v gained `delta`.
struct EdgeAdd {
  VertexId u, v;
  Weight delta;
};
// v removed, u lost ω(v).
struct FoldDegreeOne {
  VertexId u, v;
};
// v removed, every survivor lost ω(v); survivors form a clique with v.
struct WeightTransfer {
  VertexId v;
  std::vector<VertexId> survivors;
};
// Degree-two fold of v with non-adjacent x, y. `pair` stands for {x,y};
// in the mid-weight case `single` stands for `heavy` alone.
struct FoldVShape {
  VertexId v, x, y;
  VertexId pair;
  VertexId single = kNoVertex;
  VertexId heavy = kNoVertex;
};
struct FoldTwin {
  VertexId u, v, folded;
  bool with_neighborhood;
  std::vector<VertexId> heavy_set;  // I_N when with_neighborhood
};
struct FoldFunnel {
  VertexId u, v;
  std::vector<VertexId> kept;  // N'(v)
  bool u_kept;
};
struct CutVertexFold {
  VertexId v;
  std::vector<VertexId> component;
  std::vector<VertexId> witness_without;  // optimum of G[C]
  std::vector<VertexId> witness_with;     // optimum of G[C \ N(v)]
  Weight delta;
  bool excluded;
};
struct CriticalSetInclude {
  std::vector<VertexId> set;
};
}  // namespace event

using ReductionEvent =
    std::variant<event::Include, event::Exclude, event::EdgeRemove, event::EdgeAdd, event::FoldDegreeOne,
                 event::WeightTransfer, event::FoldVShape, event::FoldTwin, event::FoldFunnel,
                 event::CutVertexFold, event::CriticalSetInclude>;

struct LogEntry {
  RuleId rule;
  VertexId anchor;
  Weight offset_delta;
  ReductionEvent event;
};

struct ReductionLog {
  std::vector<LogEntry> entries;
  Weight offset = 0;

  void append(RuleId rule, VertexId anchor, Weight offset_delta, ReductionEvent e);
  void truncate(std::size_t size);
  std::size_t size() const { return entries.size(); }
  // One line per event: "RULE anchor offset_delta".
  std::string trace() const;
};

enum class RuleOutcome { Applied, NotApplicable, Skipped };

// Everything a rule needs. `candidates`, when set, restricts heavy-set members
// to flagged vertices (used by screening).
struct ReductionContext {
  DynamicGraph& graph;
  ReductionLog& log;
  const ReducerBudgets& budgets;
  const std::vector<char>* candidates = nullptr;
};

RuleOutcome neighborhood_removal(ReductionContext& ctx, VertexId v);
RuleOutcome degree_one(ReductionContext& ctx, VertexId v);
RuleOutcome triangle(ReductionContext& ctx, VertexId v);
RuleOutcome v_shape(ReductionContext& ctx, VertexId v);
RuleOutcome degree_two(ReductionContext& ctx, VertexId v);
RuleOutcome simplicial_include(ReductionContext& ctx, VertexId v);
RuleOutcome simplicial_transfer(ReductionContext& ctx, VertexId v);
RuleOutcome simplicial(ReductionContext& ctx, VertexId v);
RuleOutcome domination(ReductionContext& ctx, VertexId v);
RuleOutcome basic_single_edge(ReductionContext& ctx, VertexId v);
RuleOutcome extended_single_edge(ReductionContext& ctx, VertexId v);
RuleOutcome single_edge(ReductionContext& ctx, VertexId v);
RuleOutcome twin(ReductionContext& ctx, VertexId v);
RuleOutcome almost_twin(ReductionContext& ctx, VertexId v);
RuleOutcome weighted_funnel(ReductionContext& ctx, VertexId v);
RuleOutcome clique_neighborhood_removal(ReductionContext& ctx, VertexId v);
RuleOutcome extended_domination(ReductionContext& ctx, VertexId v);
RuleOutcome extended_domination_reverse(ReductionContext& ctx, VertexId v);
// Reverse followed by a generalized-fold inclusion at v; rolled back unless the inclusion fires.
RuleOutcome reverse_then_fold(ReductionContext& ctx, VertexId v);
RuleOutcome extended_unconfined(ReductionContext& ctx, VertexId v);
RuleOutcome generalized_fold_include(ReductionContext& ctx, VertexId v);
RuleOutcome heavy_set_pair(ReductionContext& ctx, VertexId anchor);
RuleOutcome heavy_set_triple(ReductionContext& ctx, VertexId anchor);
RuleOutcome heavy_set(ReductionContext& ctx, VertexId anchor);
RuleOutcome critical_set(ReductionContext& ctx);
RuleOutcome cut_vertex(ReductionContext& ctx);
// Cut-vertex fold restricted to articulation point v.
RuleOutcome cut_vertex_at(ReductionContext& ctx, VertexId v);

// Dispatches on the scheduler rule id. Global rules ignore the anchor.
RuleOutcome apply_rule(ReductionContext& ctx, RuleId rule, VertexId anchor);

struct CriticalSetResult {
  std::vector<VertexId> set;
  Weight value = 0;  // ω(set) - ω(N(set))
};
// Independent set maximizing ω(I) - ω(N(I)) over the active graph.
CriticalSetResult find_critical_set(const DynamicGraph& g);

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lifts an independent set of the reduced graph to the original graph by
// replaying the log backwards. Returns original vertex ids, sorted.
std::vector<VertexId> restore_solution(const ReductionLog& log, const DynamicGraph& reduced,
                                       std::span<const VertexId> reduced_solution);

}  // namespace mwis
