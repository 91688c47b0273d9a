#include "mwis/reductions.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mwis/maxflow.hpp"

namespace mwis {

namespace {
using LT = LabelTarget;
constexpr std::array<RuleInfo, kNumRules> kRules{{
    {RuleId::NeighborhoodRemoval, "neighborhood_removal", false, false, false, LT::Anchor},
    {RuleId::DegreeOne, "degree_one", false, false, false, LT::Anchor},
    {RuleId::Triangle, "triangle", false, false, false, LT::Anchor},
    {RuleId::VShape, "v_shape", false, false, false, LT::Anchor},
    {RuleId::Simplicial, "simplicial", false, false, false, LT::Anchor},
    {RuleId::SimplicialTransfer, "simplicial_transfer", false, false, false, LT::Anchor},
    {RuleId::Domination, "domination", false, false, false, LT::Anchor},
    {RuleId::SingleEdge, "single_edge", false, false, false, LT::Anchor},
    {RuleId::ExtendedSingleEdge, "extended_single_edge", false, false, false, LT::Excluded},
    {RuleId::Twin, "twin", false, false, true, LT::Twins},
    {RuleId::AlmostTwin, "almost_twin", false, false, true, LT::Included},
    {RuleId::Funnel, "funnel", false, false, false, LT::Anchor},
    {RuleId::CliqueNeighborhood, "clique_neighborhood", false, false, false, LT::Anchor},
    {RuleId::ExtendedDomination, "extended_domination", false, false, false, LT::Anchor},
    {RuleId::ExtendedUnconfined, "extended_unconfined", true, false, true, LT::Anchor},
    {RuleId::CriticalSet, "critical_set", true, true, false, LT::Included},
    {RuleId::ExtendedDominationReverse, "extended_domination_reverse", true, false, true, LT::Anchor},
    {RuleId::GeneralizedFold, "generalized_fold", true, false, true, LT::Anchor},
    {RuleId::HeavySet, "heavy_set", true, false, true, LT::Included},
    {RuleId::HeavySet3, "heavy_set3", true, false, true, LT::Included},
    {RuleId::CutVertex, "cut_vertex", true, true, true, LT::ArticulationPoint},
}};
}  // namespace

const std::array<RuleInfo, kNumRules>& rule_table() { return kRules; }

const RuleInfo& rule_info(RuleId id) { return kRules[static_cast<std::size_t>(id)]; }

RuleId rule_from_name(std::string_view name) {
  for (const auto& r : kRules)
    if (r.name == name) return r.id;
  throw std::invalid_argument("unknown rule \"" + std::string(name) + "\"");
}

Budget ReducerBudgets::oracle_budget() const {
  Budget b;
  b.node_budget = oracle_node_budget;
  if (per_vertex_time.count() > 0) b.time_cap = per_vertex_time;
  return b;
}

void ReductionLog::append(RuleId rule, VertexId anchor, Weight offset_delta, ReductionEvent e) {
  entries.push_back({rule, anchor, offset_delta, std::move(e)});
  offset += offset_delta;
}

void ReductionLog::truncate(std::size_t size) {
  while (entries.size() > size) {
    offset -= entries.back().offset_delta;
    entries.pop_back();
  }
}

std::string ReductionLog::trace() const {
  std::string out;
  for (const auto& e : entries) {
    out += rule_info(e.rule).name;
    out += ' ';
    out += e.anchor == kNoVertex ? std::string("-") : std::to_string(e.anchor);
    out += ' ';
    out += std::to_string(e.offset_delta);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<VertexId> copy_neighbors(const DynamicGraph& g, VertexId v) {
  auto nb = g.neighbors(v);
  return {nb.begin(), nb.end()};
}

Weight total(const DynamicGraph& g, std::span<const VertexId> set) {
  Weight s = 0;
  for (VertexId v : set) s += g.weight(v);
  return s;
}

bool contains(std::span<const VertexId> sorted, VertexId v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

bool is_clique(const DynamicGraph& g, std::span<const VertexId> set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (!g.adjacent(set[i], set[j])) return false;
  return true;
}

bool is_independent(const DynamicGraph& g, std::span<const VertexId> set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (g.adjacent(set[i], set[j])) return false;
  return true;
}

// N(a) ⊆ N(b), ignoring `skip` in N(a) and `skip_b` in N(b).
bool neighborhood_subset(const DynamicGraph& g, VertexId a, VertexId b, VertexId skip = kNoVertex) {
  auto nb = g.neighbors(b);
  for (VertexId w : g.neighbors(a)) {
    if (w == skip) continue;
    if (!contains(nb, w)) return false;
  }
  return true;
}

// Vertices at distance exactly two from v, ascending.
std::vector<VertexId> two_hop(const DynamicGraph& g, VertexId v) {
  std::vector<VertexId> out;
  auto nb = g.neighbors(v);
  for (VertexId x : nb)
    for (VertexId w : g.neighbors(x))
      if (w != v) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](VertexId w) { return contains(nb, w); });
  return out;
}

// Union of neighborhoods of `set`, minus `drop` (both sorted inputs not required).
std::vector<VertexId> open_neighborhood(const DynamicGraph& g, std::span<const VertexId> set,
                                        std::span<const VertexId> drop) {
  std::vector<VertexId> out;
  for (VertexId v : set)
    for (VertexId w : g.neighbors(v)) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](VertexId w) {
    return std::find(set.begin(), set.end(), w) != set.end() || std::find(drop.begin(), drop.end(), w) != drop.end();
  });
  return out;
}

void include_vertex(ReductionContext& ctx, RuleId rule, VertexId anchor, VertexId v) {
  auto& g = ctx.graph;
  const Weight w = g.weight(v);
  ctx.log.append(rule, anchor, w, event::Include{v, w});
  for (VertexId u : copy_neighbors(g, v)) g.remove_vertex(u, VertexStatus::Excluded);
  g.remove_vertex(v, VertexStatus::Included);
}

void exclude_vertex(ReductionContext& ctx, RuleId rule, VertexId anchor, VertexId v) {
  ctx.log.append(rule, anchor, 0, event::Exclude{v});
  ctx.graph.remove_vertex(v, VertexStatus::Excluded);
}

struct OracleAnswer {
  ExactResult result;
  std::vector<VertexId> set;  // mapped back to graph ids
};

OracleAnswer solve_on(ReductionContext& ctx, std::span<const VertexId> vertices) {
  std::vector<VertexId> mapping;
  StaticGraph sub = induced_subgraph(ctx.graph, vertices, &mapping);
  OracleAnswer a{solve_exact(sub, ctx.budgets.oracle_budget()), {}};
  for (VertexId i : a.result.set) a.set.push_back(mapping[i]);
  std::sort(a.set.begin(), a.set.end());
  return a;
}

}  // namespace

RuleOutcome neighborhood_removal(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.weight(v) < g.neighborhood_weight(v)) return RuleOutcome::NotApplicable;
  include_vertex(ctx, RuleId::NeighborhoodRemoval, v, v);
  return RuleOutcome::Applied;
}

RuleOutcome degree_one(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.degree(v) != 1) return RuleOutcome::NotApplicable;
  const VertexId u = g.neighbors(v)[0];
  const Weight wv = g.weight(v);
  if (wv >= g.weight(u)) {
    include_vertex(ctx, RuleId::DegreeOne, v, v);
  } else {
    ctx.log.append(RuleId::DegreeOne, v, wv, event::FoldDegreeOne{u, v});
    g.remove_vertex(v, VertexStatus::Folded);
    g.set_weight(u, g.weight(u) - wv);
  }
  return RuleOutcome::Applied;
}

RuleOutcome triangle(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.degree(v) != 2) return RuleOutcome::NotApplicable;
  const VertexId x = g.neighbors(v)[0], y = g.neighbors(v)[1];
  if (!g.adjacent(x, y)) return RuleOutcome::NotApplicable;
  const Weight wv = g.weight(v), wx = g.weight(x), wy = g.weight(y);
  if (wv >= std::max(wx, wy)) {
    include_vertex(ctx, RuleId::Triangle, v, v);
  } else if (wv >= std::min(wx, wy)) {
    exclude_vertex(ctx, RuleId::Triangle, v, wx <= wy ? x : y);
  } else {
    ctx.log.append(RuleId::Triangle, v, wv, event::WeightTransfer{v, {x, y}});
    g.remove_vertex(v, VertexStatus::Folded);
    g.set_weight(x, wx - wv);
    g.set_weight(y, wy - wv);
  }
  return RuleOutcome::Applied;
}

RuleOutcome v_shape(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.degree(v) != 2) return RuleOutcome::NotApplicable;
  const VertexId x = g.neighbors(v)[0], y = g.neighbors(v)[1];
  if (g.adjacent(x, y)) return RuleOutcome::NotApplicable;
  const Weight wv = g.weight(v), wx = g.weight(x), wy = g.weight(y);
  if (wv >= wx + wy) {
    include_vertex(ctx, RuleId::VShape, v, v);
    return RuleOutcome::Applied;
  }
  if (wv < std::min(wx, wy)) return RuleOutcome::NotApplicable;

  const VertexId trio[] = {v, x, y};
  auto pair_nbrs = open_neighborhood(g, std::array{x, y}, std::array{v});
  if (wv >= std::max(wx, wy)) {
    // Only {x, y} outweighs v: fold all three into one vertex.
    for (VertexId w : trio) g.remove_vertex(w, VertexStatus::Folded);
    VertexId pair = g.add_vertex(wx + wy - wv, pair_nbrs, trio);
    ctx.log.append(RuleId::VShape, v, wv, event::FoldVShape{v, x, y, pair});
    return RuleOutcome::Applied;
  }
  // Mid weight: {heavy} and {x, y} outweigh v, the lighter neighbor alone does not.
  const VertexId heavy = wx > wv ? x : y;
  auto heavy_nbrs = open_neighborhood(g, std::array{heavy}, std::array{v});
  for (VertexId w : trio) g.remove_vertex(w, VertexStatus::Folded);
  VertexId single = g.add_vertex((heavy == x ? wx : wy) - wv, heavy_nbrs, trio);
  pair_nbrs.push_back(single);
  VertexId pair = g.add_vertex(wx + wy - wv, pair_nbrs, trio);
  ctx.log.append(RuleId::VShape, v, wv, event::FoldVShape{v, x, y, pair, single, heavy});
  return RuleOutcome::Applied;
}

RuleOutcome degree_two(ReductionContext& ctx, VertexId v) {
  auto r = triangle(ctx, v);
  return r == RuleOutcome::NotApplicable ? v_shape(ctx, v) : r;
}

RuleOutcome simplicial_include(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  auto nb = g.neighbors(v);
  for (VertexId u : nb)
    if (g.weight(u) > g.weight(v)) return RuleOutcome::NotApplicable;
  if (!is_clique(g, nb)) return RuleOutcome::NotApplicable;
  include_vertex(ctx, RuleId::Simplicial, v, v);
  return RuleOutcome::Applied;
}

RuleOutcome simplicial_transfer(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  auto nb = copy_neighbors(g, v);
  const Weight wv = g.weight(v);
  if (nb.empty() || !is_clique(g, nb)) return RuleOutcome::NotApplicable;
  std::vector<VertexId> lighter, survivors;
  for (VertexId u : nb) (g.weight(u) <= wv ? lighter : survivors).push_back(u);
  if (survivors.empty()) return RuleOutcome::NotApplicable;  // simplicial inclusion covers it
  // Lighter clique members are dominated by v.
  for (VertexId u : lighter) exclude_vertex(ctx, RuleId::SimplicialTransfer, v, u);
  ctx.log.append(RuleId::SimplicialTransfer, v, wv, event::WeightTransfer{v, survivors});
  g.remove_vertex(v, VertexStatus::Folded);
  for (VertexId u : survivors) g.set_weight(u, g.weight(u) - wv);
  return RuleOutcome::Applied;
}

RuleOutcome simplicial(ReductionContext& ctx, VertexId v) {
  auto r = simplicial_include(ctx, v);
  return r == RuleOutcome::NotApplicable ? simplicial_transfer(ctx, v) : r;
}

RuleOutcome domination(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  for (VertexId u : g.neighbors(v)) {
    if (g.weight(u) < g.weight(v) || g.degree(u) > g.degree(v)) continue;
    if (neighborhood_subset(g, u, v, v)) {
      exclude_vertex(ctx, RuleId::Domination, v, v);
      return RuleOutcome::Applied;
    }
  }
  return RuleOutcome::NotApplicable;
}

RuleOutcome basic_single_edge(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  auto nv = g.neighbors(v);
  for (VertexId u : nv) {
    Weight outside = 0;  // ω(N(u) \ N(v)), v itself included
    for (VertexId w : g.neighbors(u))
      if (!contains(nv, w)) outside += g.weight(w);
    if (outside <= g.weight(u)) {
      exclude_vertex(ctx, RuleId::SingleEdge, v, v);
      return RuleOutcome::Applied;
    }
  }
  return RuleOutcome::NotApplicable;
}

RuleOutcome extended_single_edge(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  const Weight nw_v = g.neighborhood_weight(v);
  for (VertexId u : g.neighbors(v)) {
    // Either endpoint may play the heavy role of the rule.
    const bool v_heavy = g.weight(v) >= nw_v - g.weight(u);
    const bool u_heavy = g.weight(u) >= g.neighborhood_weight(u) - g.weight(v);
    if (!v_heavy && !u_heavy) continue;
    std::vector<VertexId> common;
    auto nu = g.neighbors(u);
    auto nv = g.neighbors(v);
    std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
    if (common.empty()) continue;
    for (VertexId x : common) exclude_vertex(ctx, RuleId::ExtendedSingleEdge, v, x);
    return RuleOutcome::Applied;
  }
  return RuleOutcome::NotApplicable;
}

RuleOutcome single_edge(ReductionContext& ctx, VertexId v) {
  auto r = basic_single_edge(ctx, v);
  return r == RuleOutcome::NotApplicable ? extended_single_edge(ctx, v) : r;
}

RuleOutcome twin(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.degree(v) == 0) return RuleOutcome::NotApplicable;
  VertexId u = kNoVertex;
  for (VertexId w : two_hop(g, v)) {
    if (g.degree(w) == g.degree(v) && std::ranges::equal(g.neighbors(w), g.neighbors(v))) {
      u = w;
      break;
    }
  }
  if (u == kNoVertex) return RuleOutcome::NotApplicable;

  const auto nb = copy_neighbors(g, v);
  const Weight pair_weight = g.weight(u) + g.weight(v);
  const VertexId pair[] = {std::min(u, v), std::max(u, v)};
  auto oracle = solve_on(ctx, nb);
  if (oracle.result.optimal()) {
    if (pair_weight >= oracle.result.weight) {
      for (VertexId w : pair) include_vertex(ctx, RuleId::Twin, v, w);
      return RuleOutcome::Applied;
    }
    if (nb.size() <= ctx.budgets.enumeration_limit) {
      StaticGraph sub = induced_subgraph(g, nb);
      int heavier = 0;
      auto status = enumerate_independent_sets(sub, std::uint64_t{1} << ctx.budgets.enumeration_limit,
                                               [&](std::span<const VertexId> set) {
                                                 if (sub.set_weight(set) > pair_weight) ++heavier;
                                                 return heavier < 2;
                                               });
      if (status != EnumerationStatus::Overflow && heavier == 1) {
        // Only I_N or {u, v} can be in an optimum, so v' inherits the outer
        // neighbors of I_N; the rest of N is dropped.
        std::vector<VertexId> drop(nb);
        drop.insert(drop.end(), pair, pair + 2);
        auto outer = open_neighborhood(g, oracle.set, drop);
        std::vector<VertexId> parents(pair, pair + 2);
        parents.insert(parents.end(), nb.begin(), nb.end());
        for (VertexId w : parents) g.remove_vertex(w, VertexStatus::Folded);
        VertexId folded = g.add_vertex(oracle.result.weight - pair_weight, outer, parents);
        ctx.log.append(RuleId::Twin, v, pair_weight, event::FoldTwin{u, v, folded, true, oracle.set});
        return RuleOutcome::Applied;
      }
    }
  }
  // Twins are either both in an optimum or both out, so merging them is always exact.
  for (VertexId w : pair) g.remove_vertex(w, VertexStatus::Folded);
  VertexId folded = g.add_vertex(pair_weight, nb, pair);
  ctx.log.append(RuleId::Twin, v, 0, event::FoldTwin{u, v, folded, false, {}});
  return RuleOutcome::Applied;
}

RuleOutcome almost_twin(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.degree(v) == 0) return RuleOutcome::NotApplicable;
  bool skipped = false;
  // small: the vertex with the nested neighborhood (gets included); big: the other one.
  auto test = [&](VertexId small, VertexId big) {
    const Weight pair = g.weight(small) + g.weight(big);
    if (pair >= g.neighborhood_weight(big)) return true;
    if (!ctx.budgets.strengthened_almost_twin) return false;
    auto oracle = solve_on(ctx, copy_neighbors(g, big));
    if (!oracle.result.optimal()) {
      if (oracle.result.weight <= pair) skipped = true;
      return false;
    }
    return pair >= oracle.result.weight;
  };
  for (VertexId w : two_hop(g, v)) {
    VertexId small = kNoVertex;
    if (g.degree(v) <= g.degree(w) && neighborhood_subset(g, v, w) && test(v, w))
      small = v;
    else if (g.degree(w) <= g.degree(v) && neighborhood_subset(g, w, v) && test(w, v))
      small = w;
    if (small != kNoVertex) {
      include_vertex(ctx, RuleId::AlmostTwin, v, small);
      return RuleOutcome::Applied;
    }
  }
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome weighted_funnel(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  const auto nb = copy_neighbors(g, v);
  // v must be almost simplicial: a clique neighborhood (degree one included)
  // belongs to the simplicial rules.
  if (is_clique(g, nb)) return RuleOutcome::NotApplicable;
  const Weight wv = g.weight(v);

  // At most one neighbor may outweigh v, and it has to be u.
  std::vector<VertexId> candidates;
  for (VertexId x : nb)
    if (g.weight(x) > wv) candidates.push_back(x);
  if (candidates.size() > 1) return RuleOutcome::NotApplicable;
  if (candidates.empty()) {
    // u must cover every non-adjacent pair of N(v).
    for (std::size_t i = 0; i < nb.size() && candidates.empty(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!g.adjacent(nb[i], nb[j])) {
          candidates = {nb[i], nb[j]};
          break;
        }
  }

  for (VertexId u : candidates) {
    std::vector<VertexId> rest;
    for (VertexId x : nb)
      if (x != u) rest.push_back(x);
    if (!is_clique(g, rest)) continue;

    const Weight wu = g.weight(u);
    auto nu = copy_neighbors(g, u);
    std::vector<VertexId> kept;  // N'(v)
    for (VertexId x : rest)
      if (!contains(nu, x) && g.weight(x) + wu > wv) kept.push_back(x);
    std::vector<VertexId> u_outer;  // N(u) \ N[v]
    for (VertexId w : nu)
      if (w != v && !contains(nb, w)) u_outer.push_back(w);

    const bool u_kept = wv < wu;
    ctx.log.append(RuleId::Funnel, v, wv, event::FoldFunnel{u, v, kept, u_kept});
    for (VertexId x : nb)
      if (!(u_kept && x == u) && !contains(kept, x)) g.remove_vertex(x, VertexStatus::Folded);
    g.remove_vertex(v, VertexStatus::Folded);
    if (u_kept) g.set_weight(u, wu - wv);
    for (VertexId x : kept) {
      for (VertexId w : u_outer) g.add_edge(x, w);
      if (!u_kept) g.set_weight(x, g.weight(x) + wu - wv);
    }
    return RuleOutcome::Applied;
  }
  return RuleOutcome::NotApplicable;
}

RuleOutcome clique_neighborhood_removal(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  auto nb = copy_neighbors(g, v);
  std::stable_sort(nb.begin(), nb.end(), [&](VertexId a, VertexId b) { return g.weight(a) > g.weight(b); });
  const Weight wv = g.weight(v);
  std::vector<char> covered(nb.size(), 0);
  Weight bound = 0;
  std::vector<VertexId> clique;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (covered[i]) continue;
    bound += g.weight(nb[i]);
    if (bound > wv) return RuleOutcome::NotApplicable;
    clique.assign(1, nb[i]);
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      if (covered[j]) continue;
      if (std::all_of(clique.begin(), clique.end(), [&](VertexId c) { return g.adjacent(c, nb[j]); })) {
        clique.push_back(nb[j]);
        covered[j] = 1;
      }
    }
  }
  include_vertex(ctx, RuleId::CliqueNeighborhood, v, v);
  return RuleOutcome::Applied;
}

RuleOutcome extended_domination(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  for (VertexId u : g.neighbors(v)) {
    if (g.weight(v) <= g.weight(u) || g.degree(u) > g.degree(v)) continue;
    if (!neighborhood_subset(g, u, v, v)) continue;
    const Weight delta = g.weight(u);
    ctx.log.append(RuleId::ExtendedDomination, v, 0, event::EdgeRemove{u, v, delta});
    g.remove_edge(u, v);
    g.set_weight(v, g.weight(v) - delta);
    return RuleOutcome::Applied;
  }
  return RuleOutcome::NotApplicable;
}

namespace {
std::vector<VertexId> reverse_candidates(const DynamicGraph& g, VertexId v) {
  std::vector<VertexId> out;
  if (g.degree(v) == 0) return out;
  const Weight nw = g.neighborhood_weight(v);
  for (VertexId u : two_hop(g, v))
    if (g.degree(u) <= g.degree(v) && g.weight(u) + g.weight(v) < nw && neighborhood_subset(g, u, v))
      out.push_back(u);
  return out;
}

void add_reverse_edge(ReductionContext& ctx, VertexId u, VertexId v) {
  const Weight delta = ctx.graph.weight(u);
  ctx.log.append(RuleId::ExtendedDominationReverse, v, 0, event::EdgeAdd{u, v, delta});
  ctx.graph.add_edge(u, v);
  ctx.graph.set_weight(v, ctx.graph.weight(v) + delta);
}
}  // namespace

RuleOutcome extended_domination_reverse(ReductionContext& ctx, VertexId v) {
  auto candidates = reverse_candidates(ctx.graph, v);
  if (candidates.empty()) return RuleOutcome::NotApplicable;
  add_reverse_edge(ctx, candidates.front(), v);
  return RuleOutcome::Applied;
}

RuleOutcome reverse_then_fold(ReductionContext& ctx, VertexId v) {
  bool skipped = false;
  for (VertexId u : reverse_candidates(ctx.graph, v)) {
    const auto graph_mark = ctx.graph.checkpoint();
    const auto log_mark = ctx.log.size();
    add_reverse_edge(ctx, u, v);
    auto r = generalized_fold_include(ctx, v);
    if (r == RuleOutcome::Applied) return r;
    skipped |= r == RuleOutcome::Skipped;
    ctx.graph.rollback(graph_mark);
    ctx.log.truncate(log_mark);
  }
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome extended_unconfined(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  std::vector<VertexId> s{v};
  bool skipped = false;
  // |S| grows by at least one per round; the cap keeps a single visit bounded.
  const std::size_t max_rounds = 64;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::vector<VertexId> closed = s;  // N[S]
    for (VertexId w : s)
      for (VertexId x : g.neighbors(w)) closed.push_back(x);
    std::sort(closed.begin(), closed.end());
    closed.erase(std::unique(closed.begin(), closed.end()), closed.end());

    std::vector<VertexId> satellites;
    for (VertexId x : closed) {
      if (contains(s, x)) continue;
      Weight sx = 0;
      for (VertexId w : g.neighbors(x))
        if (contains(s, w)) sx += g.weight(w);
      const Weight wx = g.weight(x);
      if (wx < sx) continue;  // not a child
      std::vector<VertexId> rest;  // N(x) \ N[S]
      for (VertexId w : g.neighbors(x))
        if (!contains(closed, w)) rest.push_back(w);
      const Weight rest_weight = total(g, rest);
      // α(G[rest]) <= ω(rest), so this is Condition 1 whenever it holds.
      if (wx >= sx + rest_weight) {
        exclude_vertex(ctx, RuleId::ExtendedUnconfined, v, v);
        return RuleOutcome::Applied;
      }
      if (is_independent(g, rest)) {
        if (satellites.empty())
          for (VertexId y : rest)
            if (wx >= sx + rest_weight - g.weight(y)) satellites.push_back(y);
      } else if (ctx.budgets.full_unconfined) {
        auto oracle = solve_on(ctx, rest);
        if (!oracle.result.optimal()) {
          if (wx >= sx + oracle.result.weight) skipped = true;
        } else if (wx >= sx + oracle.result.weight) {
          exclude_vertex(ctx, RuleId::ExtendedUnconfined, v, v);
          return RuleOutcome::Applied;
        }
      }
    }
    if (satellites.empty()) break;
    s.insert(s.end(), satellites.begin(), satellites.end());
    std::sort(s.begin(), s.end());
  }
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome generalized_fold_include(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (g.weight(v) >= g.neighborhood_weight(v)) {
    include_vertex(ctx, RuleId::GeneralizedFold, v, v);
    return RuleOutcome::Applied;
  }
  auto oracle = solve_on(ctx, copy_neighbors(g, v));
  if (oracle.result.weight > g.weight(v)) return RuleOutcome::NotApplicable;
  if (!oracle.result.optimal()) return RuleOutcome::Skipped;
  include_vertex(ctx, RuleId::GeneralizedFold, v, v);
  return RuleOutcome::Applied;
}

namespace {

enum class HeavyCheck { Heavy, NotHeavy, TooLarge };

// Every independent C in G[N(T)] must satisfy ω(N(C) ∩ T) >= ω(C).
HeavyCheck check_heavy(ReductionContext& ctx, std::span<const VertexId> members) {
  auto& g = ctx.graph;
  auto outer = open_neighborhood(g, members, {});
  if (outer.size() > ctx.budgets.enumeration_limit) return HeavyCheck::TooLarge;
  std::vector<unsigned> touches(outer.size(), 0);  // bit i: adjacent to members[i]
  for (std::size_t i = 0; i < outer.size(); ++i)
    for (std::size_t t = 0; t < members.size(); ++t)
      if (g.adjacent(outer[i], members[t])) touches[i] |= 1U << t;
  StaticGraph sub = induced_subgraph(g, outer);
  bool heavy = true;
  auto status = enumerate_independent_sets(sub, std::uint64_t{1} << ctx.budgets.enumeration_limit,
                                           [&](std::span<const VertexId> set) {
                                             unsigned mask = 0;
                                             Weight wc = 0;
                                             for (VertexId i : set) {
                                               mask |= touches[i];
                                               wc += sub.weight(i);
                                             }
                                             Weight wt = 0;
                                             for (std::size_t t = 0; t < members.size(); ++t)
                                               if (mask >> t & 1U) wt += g.weight(members[t]);
                                             heavy = wt >= wc;
                                             return heavy;
                                           });
  if (status == EnumerationStatus::Overflow) return HeavyCheck::TooLarge;
  return heavy ? HeavyCheck::Heavy : HeavyCheck::NotHeavy;
}

std::vector<VertexId> heavy_candidates(const ReductionContext& ctx, VertexId anchor) {
  const auto& g = ctx.graph;
  std::vector<VertexId> out;
  for (VertexId u : g.neighbors(anchor))
    if (!ctx.candidates || (u < ctx.candidates->size() && (*ctx.candidates)[u])) out.push_back(u);
  std::stable_sort(out.begin(), out.end(), [&](VertexId a, VertexId b) { return g.weight(a) > g.weight(b); });
  return out;
}

RuleOutcome try_heavy(ReductionContext& ctx, RuleId rule, VertexId anchor, std::span<const VertexId> members,
                      bool& skipped) {
  switch (check_heavy(ctx, members)) {
    case HeavyCheck::Heavy: {
      std::vector<VertexId> sorted(members.begin(), members.end());
      std::sort(sorted.begin(), sorted.end());
      for (VertexId u : sorted) include_vertex(ctx, rule, anchor, u);
      return RuleOutcome::Applied;
    }
    case HeavyCheck::TooLarge:
      skipped = true;
      break;
    case HeavyCheck::NotHeavy:
      break;
  }
  return RuleOutcome::NotApplicable;
}

}  // namespace

RuleOutcome heavy_set_pair(ReductionContext& ctx, VertexId anchor) {
  auto& g = ctx.graph;
  auto cand = heavy_candidates(ctx, anchor);
  bool skipped = false;
  std::size_t tried = 0;
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      if (g.adjacent(cand[i], cand[j])) continue;
      if (tried++ == ctx.budgets.heavy_pair_cap) return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
      const VertexId pair[] = {cand[i], cand[j]};
      if (try_heavy(ctx, RuleId::HeavySet, anchor, pair, skipped) == RuleOutcome::Applied) return RuleOutcome::Applied;
    }
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome heavy_set_triple(ReductionContext& ctx, VertexId anchor) {
  auto& g = ctx.graph;
  auto cand = heavy_candidates(ctx, anchor);
  bool skipped = false;
  std::size_t tried = 0;
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      if (g.adjacent(cand[i], cand[j])) continue;
      for (std::size_t k = j + 1; k < cand.size(); ++k) {
        if (g.adjacent(cand[i], cand[k]) || g.adjacent(cand[j], cand[k])) continue;
        if (tried++ == ctx.budgets.heavy_triple_cap)
          return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
        const VertexId triple[] = {cand[i], cand[j], cand[k]};
        if (try_heavy(ctx, RuleId::HeavySet3, anchor, triple, skipped) == RuleOutcome::Applied)
          return RuleOutcome::Applied;
      }
    }
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome heavy_set(ReductionContext& ctx, VertexId anchor) {
  auto r = heavy_set_pair(ctx, anchor);
  if (r == RuleOutcome::Applied) return r;
  auto r3 = heavy_set_triple(ctx, anchor);
  if (r3 == RuleOutcome::Applied) return r3;
  return r == RuleOutcome::Skipped || r3 == RuleOutcome::Skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

CriticalSetResult find_critical_set(const DynamicGraph& g) {
  std::vector<VertexId> ids;
  StaticGraph s = g.snapshot(&ids);
  const std::size_t n = s.num_vertices();
  CriticalSetResult out;
  if (n == 0) return out;
  // Nodes: 0 source, 1 sink, 2+i left copy, 2+n+i right copy.
  MaxFlow flow(2 * n + 2);
  const MaxFlow::Capacity inf = s.total_weight() + 1;
  for (VertexId i = 0; i < n; ++i) {
    flow.add_arc(0, 2 + i, s.weight(i));
    flow.add_arc(2 + n + i, 1, s.weight(i));
    for (VertexId j : s.neighbors(i)) flow.add_arc(2 + i, 2 + n + j, inf);
  }
  flow.solve(0, 1);
  auto side = flow.source_side(0);
  // A maximizes ω(A) - ω(N(A)); A \ N(A) is independent and at least as good.
  std::vector<char> in_a(n, 0);
  for (VertexId i = 0; i < n; ++i) in_a[i] = side[2 + i];
  std::vector<char> in_set(n, 0);
  for (VertexId i = 0; i < n; ++i) {
    if (!in_a[i]) continue;
    bool touches = false;
    for (VertexId j : s.neighbors(i)) touches |= in_a[j] != 0;
    if (!touches) in_set[i] = 1;
  }
  std::vector<char> in_nbr(n, 0);
  for (VertexId i = 0; i < n; ++i)
    if (in_set[i]) {
      out.set.push_back(ids[i]);
      out.value += s.weight(i);
      for (VertexId j : s.neighbors(i)) in_nbr[j] = 1;
    }
  for (VertexId i = 0; i < n; ++i)
    if (in_nbr[i]) out.value -= s.weight(i);
  return out;
}

RuleOutcome critical_set(ReductionContext& ctx) {
  auto crit = find_critical_set(ctx.graph);
  if (crit.value <= 0) return RuleOutcome::NotApplicable;
  auto& g = ctx.graph;
  const Weight w = total(g, crit.set);
  ctx.log.append(RuleId::CriticalSet, kNoVertex, w, event::CriticalSetInclude{crit.set});
  for (VertexId v : open_neighborhood(g, crit.set, {})) g.remove_vertex(v, VertexStatus::Excluded);
  for (VertexId v : crit.set) g.remove_vertex(v, VertexStatus::Included);
  return RuleOutcome::Applied;
}

RuleOutcome cut_vertex_at(ReductionContext& ctx, VertexId v) {
  auto& g = ctx.graph;
  if (!g.is_active(v) || g.degree(v) < 2) return RuleOutcome::NotApplicable;
  const std::size_t limit = ctx.budgets.cut_component_limit;
  const auto nb = copy_neighbors(g, v);
  // Each BFS avoids v and gives up past the limit. Only completed components are
  // trusted, so an aborted search never hides part of a large component.
  std::unordered_set<VertexId> done;
  std::vector<VertexId> best;
  for (VertexId start : nb) {
    if (done.count(start)) continue;
    std::unordered_set<VertexId> seen{v, start};
    std::vector<VertexId> comp{start};
    bool too_large = false;
    for (std::size_t head = 0; head < comp.size() && !too_large; ++head) {
      for (VertexId w : g.neighbors(comp[head]))
        if (seen.insert(w).second) comp.push_back(w);
      too_large = comp.size() > limit;
    }
    if (too_large) continue;
    std::size_t nbrs_inside = 0;
    for (VertexId w : nb) nbrs_inside += seen.count(w);
    if (nbrs_inside == nb.size()) return RuleOutcome::NotApplicable;  // v does not separate
    done.insert(comp.begin(), comp.end());
    if (best.empty() || comp.size() < best.size()) best = std::move(comp);
  }
  if (best.empty()) return RuleOutcome::NotApplicable;
  std::sort(best.begin(), best.end());

  std::vector<VertexId> away;  // C \ N(v)
  for (VertexId w : best)
    if (!contains(nb, w)) away.push_back(w);
  auto a0 = solve_on(ctx, best);
  auto a1 = solve_on(ctx, away);
  if (!a0.result.optimal() || !a1.result.optimal()) return RuleOutcome::Skipped;

  const Weight delta = a1.result.weight - a0.result.weight;
  const bool excluded = g.weight(v) + delta <= 0;
  ctx.log.append(RuleId::CutVertex, v, a0.result.weight,
                 event::CutVertexFold{v, best, a0.set, a1.set, delta, excluded});
  for (VertexId w : best) g.remove_vertex(w, VertexStatus::Folded);
  if (excluded)
    g.remove_vertex(v, VertexStatus::Excluded);
  else
    g.set_weight(v, g.weight(v) + delta);
  return RuleOutcome::Applied;
}

namespace {
// Articulation points of the active graph, ascending (iterative Tarjan).
std::vector<VertexId> articulation_points(const DynamicGraph& g) {
  std::vector<VertexId> ids;
  StaticGraph s = g.snapshot(&ids);
  const std::size_t n = s.num_vertices();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> is_ap(n, 0);
  int timer = 0;
  struct Frame {
    VertexId v, parent;
    std::size_t next;
    int children;
  };
  std::vector<Frame> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    disc[root] = low[root] = timer++;
    stack.push_back({root, kNoVertex, 0, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      auto nb = s.neighbors(f.v);
      if (f.next < nb.size()) {
        VertexId w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[w] >= 0) {
          low[f.v] = std::min(low[f.v], disc[w]);
        } else {
          disc[w] = low[w] = timer++;
          ++f.children;
          stack.push_back({w, f.v, 0, 0});
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children >= 2) is_ap[done.v] = 1;
      } else {
        Frame& parent = stack.back();
        low[parent.v] = std::min(low[parent.v], low[done.v]);
        if (parent.parent != kNoVertex && low[done.v] >= disc[parent.v]) is_ap[parent.v] = 1;
      }
    }
  }
  std::vector<VertexId> out;
  for (VertexId i = 0; i < n; ++i)
    if (is_ap[i]) out.push_back(ids[i]);
  return out;
}
}  // namespace

RuleOutcome cut_vertex(ReductionContext& ctx) {
  bool applied = false, skipped = false;
  for (VertexId v : articulation_points(ctx.graph)) {
    if (!ctx.graph.is_active(v)) continue;
    auto r = cut_vertex_at(ctx, v);
    applied |= r == RuleOutcome::Applied;
    skipped |= r == RuleOutcome::Skipped;
  }
  if (applied) return RuleOutcome::Applied;
  return skipped ? RuleOutcome::Skipped : RuleOutcome::NotApplicable;
}

RuleOutcome apply_rule(ReductionContext& ctx, RuleId rule, VertexId v) {
  switch (rule) {
    case RuleId::NeighborhoodRemoval: return neighborhood_removal(ctx, v);
    case RuleId::DegreeOne: return degree_one(ctx, v);
    case RuleId::Triangle: return triangle(ctx, v);
    case RuleId::VShape: return v_shape(ctx, v);
    case RuleId::Simplicial: return simplicial_include(ctx, v);
    case RuleId::SimplicialTransfer: return simplicial_transfer(ctx, v);
    case RuleId::Domination: return domination(ctx, v);
    case RuleId::SingleEdge: return basic_single_edge(ctx, v);
    case RuleId::ExtendedSingleEdge: return extended_single_edge(ctx, v);
    case RuleId::Twin: return twin(ctx, v);
    case RuleId::AlmostTwin: return almost_twin(ctx, v);
    case RuleId::Funnel: return weighted_funnel(ctx, v);
    case RuleId::CliqueNeighborhood: return clique_neighborhood_removal(ctx, v);
    case RuleId::ExtendedDomination: return extended_domination(ctx, v);
    case RuleId::ExtendedUnconfined: return extended_unconfined(ctx, v);
    case RuleId::CriticalSet: return critical_set(ctx);
    case RuleId::ExtendedDominationReverse: return reverse_then_fold(ctx, v);
    case RuleId::GeneralizedFold: return generalized_fold_include(ctx, v);
    case RuleId::HeavySet: return heavy_set_pair(ctx, v);
    case RuleId::HeavySet3: return heavy_set_triple(ctx, v);
    case RuleId::CutVertex: return cut_vertex(ctx);
  }
  throw std::logic_error("unknown rule id");
}

std::vector<VertexId> restore_solution(const ReductionLog& log, const DynamicGraph& reduced,
                                       std::span<const VertexId> reduced_solution) {
  std::vector<char> in(reduced.capacity(), 0);
  for (VertexId v : reduced_solution) {
    if (!reduced.is_active(v)) throw ReconstructionError("vertex " + std::to_string(v) + " is not in the reduced graph");
    if (in[v]) throw ReconstructionError("duplicate vertex " + std::to_string(v));
    in[v] = 1;
  }
  for (VertexId v : reduced_solution)
    for (VertexId u : reduced.neighbors(v))
      if (in[u]) throw ReconstructionError("reduced solution is not independent");

  auto any = [&](std::span<const VertexId> set) {
    return std::any_of(set.begin(), set.end(), [&](VertexId w) { return in[w] != 0; });
  };
  for (auto it = log.entries.rbegin(); it != log.entries.rend(); ++it) {
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, event::Include>) {
            in[e.v] = 1;
          } else if constexpr (std::is_same_v<E, event::Exclude>) {
          } else if constexpr (std::is_same_v<E, event::EdgeRemove>) {
            if (in[e.v]) in[e.u] = 0;
          } else if constexpr (std::is_same_v<E, event::EdgeAdd>) {
            if (in[e.v]) in[e.u] = 1;
          } else if constexpr (std::is_same_v<E, event::FoldDegreeOne>) {
            if (!in[e.u]) in[e.v] = 1;
          } else if constexpr (std::is_same_v<E, event::WeightTransfer>) {
            if (!any(e.survivors)) in[e.v] = 1;
          } else if constexpr (std::is_same_v<E, event::FoldVShape>) {
            if (in[e.pair]) {
              in[e.x] = in[e.y] = 1;
            } else if (e.single != kNoVertex && in[e.single]) {
              in[e.heavy] = 1;
            } else {
              in[e.v] = 1;
            }
            in[e.pair] = 0;
            if (e.single != kNoVertex) in[e.single] = 0;
          } else if constexpr (std::is_same_v<E, event::FoldTwin>) {
            if (e.with_neighborhood && in[e.folded]) {
              for (VertexId w : e.heavy_set) in[w] = 1;
            } else if (e.with_neighborhood || in[e.folded]) {
              in[e.u] = in[e.v] = 1;
            }
            in[e.folded] = 0;
          } else if constexpr (std::is_same_v<E, event::FoldFunnel>) {
            const bool kept_hit = any(e.kept);
            if (!kept_hit && !(e.u_kept && in[e.u])) {
              in[e.v] = 1;
            } else if (!in[e.u] && kept_hit) {
              in[e.u] = 1;
            }
          } else if constexpr (std::is_same_v<E, event::CutVertexFold>) {
            const auto& witness = !e.excluded && in[e.v] ? e.witness_with : e.witness_without;
            for (VertexId w : witness) in[w] = 1;
          } else if constexpr (std::is_same_v<E, event::CriticalSetInclude>) {
            for (VertexId w : e.set) in[w] = 1;
          }
        },
        it->event);
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < reduced.original_size(); ++v)
    if (in[v]) out.push_back(v);
  return out;
}

}  // namespace mwis
