#include "mwis/labelgen.hpp"

#include <algorithm>

namespace mwis {

namespace {

int rank(int label) { return label == 1 ? 2 : label == 2 ? 1 : 0; }

// Vertices a successful application labels, read off the events it logged.
std::vector<VertexId> label_targets(const ReductionLog& log, LabelTarget target, VertexId anchor) {
  std::vector<VertexId> out;
  if (target == LabelTarget::Anchor) return {anchor};
  for (const auto& entry : log.entries) {
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, event::Include>) {
            if (target == LabelTarget::Included || target == LabelTarget::Twins) out.push_back(e.v);
          } else if constexpr (std::is_same_v<E, event::CriticalSetInclude>) {
            if (target == LabelTarget::Included) out.insert(out.end(), e.set.begin(), e.set.end());
          } else if constexpr (std::is_same_v<E, event::Exclude>) {
            if (target == LabelTarget::Excluded) out.push_back(e.v);
          } else if constexpr (std::is_same_v<E, event::FoldTwin>) {
            if (target == LabelTarget::Twins) out.insert(out.end(), {e.u, e.v});
          } else if constexpr (std::is_same_v<E, event::CutVertexFold>) {
            if (target == LabelTarget::ArticulationPoint) out.push_back(e.v);
          }
        },
        entry.event);
  }
  return out;
}

}  // namespace

std::vector<LabelRecord> generate_labels(DynamicGraph& g, RuleId rule, const ReducerBudgets& budgets) {
  const RuleInfo& info = rule_info(rule);
  const auto active = g.active_vertices();
  std::vector<LabelRecord> labels(g.capacity(), LabelRecord{kNoVertex, rule, 0, kNoVertex});
  for (VertexId v : active) labels[v].vertex = v;
  auto assign = [&](VertexId v, int label, VertexId anchor) {
    if (rank(label) > rank(labels[v].label)) {
      labels[v].label = label;
      labels[v].anchor = anchor;
    }
  };

  auto probe = [&](VertexId anchor) {
    const auto mark = g.checkpoint();
    ReductionLog log;
    ReductionContext ctx{g, log, budgets};
    RuleOutcome r;
    if (rule == RuleId::CutVertex)
      r = cut_vertex_at(ctx, anchor);
    else
      r = apply_rule(ctx, rule, anchor);
    if (r == RuleOutcome::Applied) {
      for (VertexId t : label_targets(log, info.label, anchor))
        if (t < labels.size() && labels[t].vertex != kNoVertex) assign(t, 1, anchor);
    } else if (r == RuleOutcome::Skipped && info.uses_oracle && anchor != kNoVertex) {
      assign(anchor, 2, anchor);
    }
    g.rollback(mark);
  };

  if (rule == RuleId::CriticalSet)
    probe(kNoVertex);
  else
    for (VertexId v : active) probe(v);

  std::vector<LabelRecord> out;
  out.reserve(active.size());
  for (VertexId v : active) out.push_back(labels[v]);
  return out;
}

std::vector<LabelRecord> generate_labels(const StaticGraph& g, RuleId rule, const ReducerBudgets& budgets) {
  DynamicGraph dg(g);
  return generate_labels(dg, rule, budgets);
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

std::vector<Split> split_vertices(std::size_t n, std::uint64_t seed) {
  std::vector<VertexId> order(n);
  for (VertexId v = 0; v < n; ++v) order[v] = v;
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng.engine());
  const std::size_t held_out = n / 5;
  std::vector<Split> split(n, Split::Train);
  for (std::size_t i = 0; i < held_out; ++i) split[order[i]] = Split::Val;
  for (std::size_t i = held_out; i < 2 * held_out; ++i) split[order[i]] = Split::Test;
  return split;
}

std::string labels_to_csv(const std::vector<LabelRecord>& records, const std::string& graph_name) {
  std::string out = "graph,vertex,rule,label\n";
  for (const auto& r : records) {
    out += graph_name;
    out += ',';
    out += std::to_string(r.vertex + 1);
    out += ',';
    out += rule_info(r.rule).name;
    out += ',';
    out += std::to_string(r.label);
    out += '\n';
  }
  return out;
}

std::string split_to_csv(const std::vector<Split>& split, const std::string& graph_name) {
  std::string out = "graph,vertex,split\n";
  for (VertexId v = 0; v < split.size(); ++v) {
    out += graph_name;
    out += ',';
    out += std::to_string(v + 1);
    out += ',';
    out += split_name(split[v]);
    out += '\n';
  }
  return out;
}

std::vector<double> LabelOracleScorer::score(const StaticGraph& g) const {
  std::vector<double> s(g.num_vertices(), 0.0);
  for (const auto& r : generate_labels(g, rule_, budgets_))
    if (r.label == 1) s[r.vertex] = 1.0;
  return s;
}

std::vector<double> RandomScorer::score(const StaticGraph& g) const {
  Rng rng(seed_, calls_++);
  std::vector<double> s(g.num_vertices());
  for (double& x : s) x = rng.uniform();
  return s;
}

}  // namespace mwis
