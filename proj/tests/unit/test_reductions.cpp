#include <map>

#include "brute.hpp"
#include "doctest.h"
#include "mwis/reductions.hpp"

using namespace mwis;
using mwis::testing::brute_alpha;
using mwis::testing::brute_force;
using mwis::testing::check_rule;
using mwis::testing::make_graph;

namespace {

struct Run {
  StaticGraph original;
  DynamicGraph g;
  ReductionLog log;
  ReducerBudgets budgets;
  RuleOutcome outcome = RuleOutcome::NotApplicable;

  explicit Run(StaticGraph s) : original(std::move(s)), g(original) {}

  template <class F>
  RuleOutcome apply(F&& f) {
    ReductionContext ctx{g, log, budgets};
    outcome = f(ctx);
    g.validate();
    return outcome;
  }
  bool applied() const { return outcome == RuleOutcome::Applied; }
  Weight reduced_alpha() const { return brute_force(g).weight; }
  // alpha(G) = alpha(G') + offset and the lifted optimum is optimal in G.
  void check_exact() const {
    const Weight alpha = brute_alpha(original);
    auto reduced = brute_force(g);
    CHECK(alpha == reduced.weight + log.offset);
    auto lifted = restore_solution(log, g, reduced.set);
    CHECK(original.is_independent(lifted));
    CHECK(original.set_weight(lifted) == alpha);
  }
};

template <RuleOutcome (*Rule)(ReductionContext&, VertexId)>
auto at(VertexId v) {
  return [v](ReductionContext& ctx) { return Rule(ctx, v); };
}

}  // namespace

TEST_CASE("rule table order and tokens") {
  const auto& t = rule_table();
  REQUIRE(t.size() == kNumRules);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(static_cast<std::size_t>(t[i].id) == i);
    CHECK(rule_from_name(t[i].name) == t[i].id);
  }
  CHECK_FALSE(t[static_cast<int>(RuleId::ExtendedDomination)].expensive);
  CHECK(t[static_cast<int>(RuleId::ExtendedUnconfined)].expensive);
  CHECK(t[static_cast<int>(RuleId::CriticalSet)].global);
  CHECK(t[static_cast<int>(RuleId::CutVertex)].global);
  CHECK_THROWS(rule_from_name("no_such_rule"));
}

TEST_CASE("neighborhood removal") {
  Run iso(make_graph({3}, {}));
  CHECK(iso.apply(at<neighborhood_removal>(0)) == RuleOutcome::Applied);
  CHECK(iso.log.offset == 3);

  Run p3(make_graph({1, 5, 1}, {{0, 1}, {1, 2}}));
  CHECK(p3.apply(at<neighborhood_removal>(1)) == RuleOutcome::Applied);
  CHECK(p3.log.offset == 5);
  CHECK(p3.g.num_active() == 0);

  Run heavy_ends(make_graph({3, 5, 3}, {{0, 1}, {1, 2}}));
  CHECK(heavy_ends.apply(at<neighborhood_removal>(1)) == RuleOutcome::NotApplicable);
  CHECK(brute_alpha(heavy_ends.original) == 6);
}

TEST_CASE("degree one") {
  Run inc(make_graph({2, 1}, {{0, 1}}));
  CHECK(inc.apply(at<degree_one>(0)) == RuleOutcome::Applied);
  CHECK(inc.log.offset == 2);
  CHECK(inc.g.num_active() == 0);

  Run fold(make_graph({1, 3}, {{0, 1}}));
  CHECK(fold.apply(at<degree_one>(0)) == RuleOutcome::Applied);
  CHECK(fold.g.weight(1) == 2);
  CHECK(fold.log.offset == 1);
  CHECK(fold.reduced_alpha() + fold.log.offset == 3);
  fold.check_exact();

  Run star(make_graph({2, 3, 1, 1}, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(star.apply(at<degree_one>(1)) == RuleOutcome::Applied);
  CHECK(std::holds_alternative<event::Include>(star.log.entries.front().event));
  star.check_exact();
}

TEST_CASE("degree two: triangle") {
  // Case order puts "include v" first when v is at least as heavy as both neighbors.
  Run tie(make_graph({3, 2, 3}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(tie.apply(at<degree_two>(0)) == RuleOutcome::Applied);
  CHECK(brute_alpha(tie.original) == 3);
  tie.check_exact();

  Run mid(make_graph({3, 2, 4}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(mid.apply(at<triangle>(0)) == RuleOutcome::Applied);
  REQUIRE(std::holds_alternative<event::Exclude>(mid.log.entries.front().event));
  CHECK(std::get<event::Exclude>(mid.log.entries.front().event).v == 1);
  mid.check_exact();

  Run transfer(make_graph({1, 4, 5}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(transfer.apply(at<degree_two>(0)) == RuleOutcome::Applied);
  CHECK(transfer.g.weight(1) == 3);
  CHECK(transfer.g.weight(2) == 4);
  CHECK(transfer.log.offset == 1);
  CHECK(brute_alpha(transfer.original) == 5);
  transfer.check_exact();
}

TEST_CASE("degree two: v-shape") {
  // x=3, v=4, y=3 on a path x-v-y.
  Run fold(make_graph({3, 4, 3}, {{0, 1}, {1, 2}}));
  CHECK(fold.apply(at<degree_two>(1)) == RuleOutcome::Applied);
  CHECK(fold.log.offset == 4);
  REQUIRE(fold.g.num_active() == 1);
  CHECK(fold.g.weight(3) == 2);
  CHECK(brute_alpha(fold.original) == 6);
  fold.check_exact();

  Run include(make_graph({2, 5, 3}, {{0, 1}, {1, 2}}));
  CHECK(include.apply(at<v_shape>(1)) == RuleOutcome::Applied);
  CHECK(include.log.offset == 5);

  // Mid weights: 2 <= 4 < 6 with outer neighbors on both sides.
  Run mid(make_graph({2, 4, 6, 5, 5}, {{0, 1}, {1, 2}, {0, 3}, {2, 4}, {3, 4}}));
  CHECK(mid.apply(at<v_shape>(1)) == RuleOutcome::Applied);
  CHECK(mid.g.num_active() == 4);
  mid.check_exact();

  Run light(make_graph({5, 1, 5}, {{0, 1}, {1, 2}}));
  CHECK(light.apply(at<v_shape>(1)) == RuleOutcome::NotApplicable);
}

TEST_CASE("simplicial and weight transfer") {
  Run top(make_graph({5, 2, 3}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(top.apply(at<simplicial>(0)) == RuleOutcome::Applied);
  CHECK(top.log.offset == 5);

  // v(2) in a clique with u(5), x(1).
  Run transfer(make_graph({2, 5, 1}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(transfer.apply(at<simplicial>(0)) == RuleOutcome::Applied);
  CHECK(transfer.g.num_active() == 1);
  CHECK(transfer.g.weight(1) == 3);
  CHECK(transfer.log.offset == 2);
  CHECK(brute_alpha(transfer.original) == 5);
  transfer.check_exact();

  Run path(make_graph({1, 2, 1, 3}, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(path.apply(at<simplicial>(0)) == RuleOutcome::NotApplicable);
}

TEST_CASE("domination") {
  // Triangle {u,v,x} plus v-y; u(3) v(2) x(1) y(2).
  Run r(make_graph({3, 2, 1, 2}, {{0, 1}, {0, 2}, {1, 2}, {1, 3}}));
  CHECK(r.apply(at<domination>(1)) == RuleOutcome::Applied);
  CHECK(r.g.status(1) == VertexStatus::Excluded);
  CHECK(brute_alpha(r.original) == 5);
  r.check_exact();

  Run path(make_graph({1, 2, 2, 1}, {{0, 1}, {1, 2}, {2, 3}}));
  CHECK(path.apply(at<domination>(1)) == RuleOutcome::NotApplicable);
  CHECK(path.apply(at<domination>(2)) == RuleOutcome::NotApplicable);

  Run k3(make_graph({4, 4, 4}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(k3.apply(at<domination>(2)) == RuleOutcome::Applied);
  k3.check_exact();
}

TEST_CASE("extended domination and its reverse") {
  Run r(make_graph({3, 5, 1, 1}, {{0, 1}, {0, 2}, {1, 2}, {1, 3}}));
  CHECK(r.apply(at<extended_domination>(1)) == RuleOutcome::Applied);
  CHECK_FALSE(r.g.adjacent(0, 1));
  CHECK(r.g.weight(1) == 2);
  CHECK(r.log.offset == 0);
  CHECK(brute_alpha(r.original) == 5);
  r.check_exact();

  Run equal(make_graph({3, 3, 3, 3}, {{0, 1}, {0, 2}, {1, 2}, {1, 3}}));
  CHECK(equal.apply(at<extended_domination>(1)) == RuleOutcome::NotApplicable);

  // u(1), v(1) over N = {x,y,z} weighing 9.
  auto shared = make_graph({1, 1, 3, 3, 3}, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  Run rev(shared);
  const auto before = rev.g.checksum();
  CHECK(rev.apply(at<extended_domination_reverse>(1)) == RuleOutcome::Applied);
  CHECK(rev.g.adjacent(0, 1));
  CHECK(rev.g.weight(1) == 2);
  rev.check_exact();
  CHECK(rev.apply(at<extended_domination>(1)) == RuleOutcome::Applied);
  CHECK(rev.g.checksum() == before);

  Run boundary(make_graph({1, 2, 1, 1, 1}, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}));
  CHECK(boundary.apply(at<extended_domination_reverse>(1)) == RuleOutcome::NotApplicable);
}

TEST_CASE("reverse followed by an inclusion") {
  // Adding u-v lets v absorb u, after which v outweighs every independent set of N(v).
  auto g = make_graph({4, 4, 3, 3, 3}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}});
  Run r(g);
  CHECK(r.apply(at<reverse_then_fold>(1)) == RuleOutcome::Applied);
  r.check_exact();

  Run none(make_graph({1, 1, 3, 3, 3}, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}));
  const auto before = none.g.checksum();
  CHECK(none.apply(at<reverse_then_fold>(1)) == RuleOutcome::NotApplicable);
  CHECK(none.g.checksum() == before);
  CHECK(none.log.entries.empty());
}

TEST_CASE("single edge") {
  // u(5)-v(2), u-w(2).
  Run basic(make_graph({5, 2, 2}, {{0, 1}, {0, 2}}));
  CHECK(basic.apply(at<basic_single_edge>(1)) == RuleOutcome::Applied);
  CHECK(basic.g.status(1) == VertexStatus::Excluded);
  CHECK(brute_alpha(basic.original) == 5);
  basic.check_exact();

  // Triangle u(3), v(5), x(2).
  Run ext(make_graph({3, 5, 2}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(ext.apply(at<extended_single_edge>(1)) == RuleOutcome::Applied);
  CHECK(ext.g.status(2) == VertexStatus::Excluded);
  ext.check_exact();

  // The verbatim formula counts v inside N(u) \ N(v), so an isolated edge with
  // equal weights satisfies it; the exclusion is still exact.
  Run iso(make_graph({4, 4}, {{0, 1}}));
  CHECK(iso.apply(at<basic_single_edge>(0)) == RuleOutcome::Applied);
  iso.check_exact();
}

TEST_CASE("twin") {
  // u(2), v(2) over adjacent x(3), y(3).
  Run a(make_graph({2, 2, 3, 3}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  CHECK(a.apply(at<twin>(0)) == RuleOutcome::Applied);
  CHECK(a.log.offset == 4);
  CHECK(a.g.num_active() == 0);

  // u(1), v(1) over x(5)-y(2), x-z(10).
  auto gb = make_graph({1, 1, 5, 2, 10}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {2, 4}});
  Run b(gb);
  CHECK(b.apply(at<twin>(0)) == RuleOutcome::Applied);
  CHECK(b.log.offset == 2);
  REQUIRE(b.g.num_active() == 2);
  CHECK(b.g.weight(5) == 3);
  CHECK(b.g.adjacent(5, 4));
  CHECK(brute_alpha(gb) == 12);
  CHECK(b.reduced_alpha() == 10);
  auto lifted = restore_solution(b.log, b.g, std::vector<VertexId>{4});
  CHECK(lifted == std::vector<VertexId>{0, 1, 4});
  CHECK(gb.set_weight(lifted) == 12);
  b.check_exact();

  // u(1), v(1) over adjacent x(3), y(3): two sets beat the pair.
  Run c(make_graph({1, 1, 3, 3}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  CHECK(c.apply(at<twin>(1)) == RuleOutcome::Applied);
  CHECK(c.log.offset == 0);
  CHECK(c.g.weight(4) == 2);
  c.check_exact();

  // Unique heavy set {x, z} of N = {w, x, z}: v' must not inherit y, the
  // outer neighbor of the dropped vertex w.
  auto gd = parse_graph("6 8 10\n4 2 3 4 5\n16 1 3 6\n10 1 2 5\n7 1\n9 1 3 6\n19 2 5\n");
  Run d(gd);
  CHECK(d.apply(at<twin>(1)) == RuleOutcome::Applied);
  CHECK(d.log.offset == 25);
  REQUIRE(d.g.num_active() == 2);
  CHECK(d.g.weight(6) == 4);
  CHECK(d.g.degree(6) == 0);
  CHECK(brute_alpha(gd) == 36);
  d.check_exact();
}

TEST_CASE("almost twin") {
  // u(2) with N(u)={x}, v(3) with N(v)={x,y}, x(2), y(2).
  Run r(make_graph({2, 3, 2, 2}, {{0, 2}, {1, 2}, {1, 3}}));
  CHECK(r.apply(at<almost_twin>(0)) == RuleOutcome::Applied);
  CHECK(r.log.offset == 2);
  CHECK(brute_alpha(r.original) == 5);
  r.check_exact();
  Run from_v(make_graph({2, 3, 2, 2}, {{0, 2}, {1, 2}, {1, 3}}));
  CHECK(from_v.apply(at<almost_twin>(1)) == RuleOutcome::Applied);
  CHECK(std::get<event::Include>(from_v.log.entries.front().event).v == 0);

  Run heavy(make_graph({2, 3, 4, 4}, {{0, 2}, {1, 2}, {1, 3}}));
  CHECK(heavy.apply(at<almost_twin>(0)) == RuleOutcome::NotApplicable);
  heavy.budgets.strengthened_almost_twin = true;
  CHECK(heavy.apply(at<almost_twin>(0)) == RuleOutcome::NotApplicable);

  Run exact_twins(make_graph({3, 3, 2, 2}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
  CHECK(exact_twins.apply(at<almost_twin>(0)) == RuleOutcome::Applied);
  exact_twins.check_exact();

  // Strengthened test: N(v) = {x, y} adjacent, so alpha(N(v)) = 4 < 2 + 3.
  Run strong(make_graph({2, 3, 4, 4}, {{0, 2}, {1, 2}, {1, 3}, {2, 3}}));
  strong.budgets.strengthened_almost_twin = true;
  CHECK(strong.apply(at<almost_twin>(0)) == RuleOutcome::Applied);
  strong.check_exact();
}

TEST_CASE("weighted funnel") {
  // v(4), u(3), clique {a(2), b(3)}.
  auto g = make_graph({4, 3, 2, 3}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}});
  Run r(g);
  CHECK(r.apply(at<weighted_funnel>(0)) == RuleOutcome::Applied);
  CHECK(r.g.num_active() == 2);
  CHECK(r.g.weight(2) == 1);
  CHECK(r.g.weight(3) == 2);
  CHECK(r.log.offset == 4);
  CHECK(brute_alpha(g) == 6);
  auto lifted = restore_solution(r.log, r.g, std::vector<VertexId>{3});
  CHECK(lifted == std::vector<VertexId>{1, 3});
  r.check_exact();

  Run second(make_graph({4, 5, 2, 3}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}}));
  CHECK(second.apply(at<weighted_funnel>(0)) == RuleOutcome::Applied);
  CHECK(second.g.is_active(1));
  CHECK(second.g.weight(1) == 1);
  CHECK(second.log.offset == 4);
  second.check_exact();

  Run light(make_graph({2, 3, 4, 3}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}}));
  CHECK(light.apply(at<weighted_funnel>(0)) == RuleOutcome::NotApplicable);

  // u keeps outer neighbors that get wired to the kept clique members.
  Run wired(make_graph({4, 3, 2, 3, 6}, {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {1, 4}}));
  CHECK(wired.apply(at<weighted_funnel>(0)) == RuleOutcome::Applied);
  CHECK(wired.g.adjacent(2, 4));
  CHECK(wired.g.adjacent(3, 4));
  wired.check_exact();
}

TEST_CASE("clique neighborhood removal") {
  Run r(make_graph({5, 4, 1, 2}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  CHECK(r.apply(at<clique_neighborhood_removal>(0)) == RuleOutcome::Applied);
  r.check_exact();
  Run two(make_graph({5, 3, 3}, {{0, 1}, {0, 2}}));
  CHECK(two.apply(at<clique_neighborhood_removal>(0)) == RuleOutcome::NotApplicable);
}

TEST_CASE("extended unconfined") {
  Run r(make_graph({2, 3}, {{0, 1}}));
  CHECK(r.apply(at<extended_unconfined>(0)) == RuleOutcome::Applied);
  CHECK(r.g.status(0) == VertexStatus::Excluded);
  r.check_exact();

  Run no(make_graph({5, 3}, {{0, 1}}));
  CHECK(no.apply(at<extended_unconfined>(0)) == RuleOutcome::NotApplicable);

  // Path v(3)-x(4)-y(2)-z(5)-w(2)-t(1): y is a satellite through x, then z
  // satisfies the condition against S = {v, y}.
  auto path = make_graph({3, 4, 2, 5, 2, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  Run sat(path);
  CHECK(sat.apply(at<extended_unconfined>(0)) == RuleOutcome::Applied);
  CHECK(sat.g.status(0) == VertexStatus::Excluded);
  sat.check_exact();
}

TEST_CASE("heavy set") {
  Run pair(make_graph({3, 3, 5}, {{0, 2}, {1, 2}}));
  CHECK(pair.apply(at<heavy_set>(2)) == RuleOutcome::Applied);
  CHECK(pair.log.offset == 6);
  pair.check_exact();

  Run triple(make_graph({3, 3, 3, 8}, {{0, 3}, {1, 3}, {2, 3}}));
  CHECK(triple.apply(at<heavy_set_pair>(3)) == RuleOutcome::NotApplicable);
  CHECK(triple.apply(at<heavy_set_triple>(3)) == RuleOutcome::Applied);
  CHECK(triple.log.offset == 9);
  triple.check_exact();

  Run light(make_graph({2, 2, 5}, {{0, 2}, {1, 2}}));
  CHECK(light.apply(at<heavy_set>(2)) == RuleOutcome::NotApplicable);

  // Candidates can be restricted to flagged vertices.
  Run masked(make_graph({3, 3, 5}, {{0, 2}, {1, 2}}));
  std::vector<char> only_first{1, 0, 0};
  ReductionContext ctx{masked.g, masked.log, masked.budgets, &only_first};
  CHECK(heavy_set(ctx, 2) == RuleOutcome::NotApplicable);
}

TEST_CASE("generalized fold, inclusion case") {
  Run r(make_graph({10, 4, 4, 4}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}}));
  CHECK(r.apply(at<generalized_fold_include>(0)) == RuleOutcome::Applied);
  CHECK(r.log.offset == 10);
  Run no(make_graph({10, 4, 4, 4}, {{0, 1}, {0, 2}, {0, 3}}));
  CHECK(no.apply(at<generalized_fold_include>(0)) == RuleOutcome::NotApplicable);
  Run iso(make_graph({6}, {}));
  CHECK(iso.apply(at<generalized_fold_include>(0)) == RuleOutcome::Applied);
  CHECK(iso.log.offset == 6);
}

TEST_CASE("critical set") {
  Run star(make_graph({5, 3, 3}, {{0, 1}, {0, 2}}));
  CHECK(star.apply([](ReductionContext& c) { return critical_set(c); }) == RuleOutcome::Applied);
  CHECK(star.log.offset == 6);
  star.check_exact();

  Run k3(make_graph({2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(k3.apply([](ReductionContext& c) { return critical_set(c); }) == RuleOutcome::NotApplicable);

  Run one(make_graph({4}, {}));
  CHECK(one.apply([](ReductionContext& c) { return critical_set(c); }) == RuleOutcome::Applied);
  CHECK(one.log.offset == 4);
}

TEST_CASE("critical set value matches enumeration") {
  Rng rng(77);
  for (int rep = 0; rep < 150; ++rep) {
    auto g = mwis::testing::random_graph(1 + rng.below(12), rng.uniform() * 0.5, 10, rng);
    Weight best = 0;
    for (const auto& s : mwis::testing::all_independent_sets(g)) {
      std::vector<char> nb(g.num_vertices(), 0);
      for (VertexId v : s)
        for (VertexId u : g.neighbors(v)) nb[u] = 1;
      Weight val = g.set_weight(s);
      for (VertexId u = 0; u < g.num_vertices(); ++u)
        if (nb[u]) val -= g.weight(u);
      best = std::max(best, val);
    }
    DynamicGraph dg(g);
    auto crit = find_critical_set(dg);
    CHECK(crit.value == best);
    CHECK(g.is_independent(crit.set));
  }
}

TEST_CASE("cut vertex") {
  // a(5)-c(2)-b(3).
  Run excl(make_graph({5, 2, 3}, {{0, 1}, {1, 2}}));
  CHECK(excl.apply([](ReductionContext& c) { return cut_vertex(c); }) == RuleOutcome::Applied);
  CHECK(excl.g.status(1) == VertexStatus::Excluded);
  CHECK(excl.log.offset == 5);
  CHECK(excl.reduced_alpha() == 3);
  excl.check_exact();

  // a(1)-c(5)-b(3).
  Run keep(make_graph({1, 5, 3}, {{0, 1}, {1, 2}}));
  CHECK(keep.apply([](ReductionContext& c) { return cut_vertex_at(c, 1); }) == RuleOutcome::Applied);
  CHECK(keep.g.weight(1) == 4);
  CHECK(keep.log.offset == 1);
  CHECK(restore_solution(keep.log, keep.g, std::vector<VertexId>{1}) == std::vector<VertexId>{1});
  keep.check_exact();

  Run c4(make_graph({1, 2, 3, 4}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  CHECK(c4.apply([](ReductionContext& c) { return cut_vertex(c); }) == RuleOutcome::NotApplicable);
}

TEST_CASE("cut vertex ignores components beyond the limit") {
  // Hub 0 joins a 3-path and a pendant; with limit 2 only the pendant qualifies.
  auto g = make_graph({2, 1, 1, 1, 7}, {{0, 1}, {1, 2}, {2, 3}, {0, 4}});
  Run r(g);
  r.budgets.cut_component_limit = 2;
  CHECK(r.apply([](ReductionContext& c) { return cut_vertex_at(c, 0); }) == RuleOutcome::Applied);
  auto fold = std::get<event::CutVertexFold>(r.log.entries.front().event);
  CHECK(fold.component == std::vector<VertexId>{4});
  r.check_exact();
}

TEST_CASE("restore_solution") {
  auto g = make_graph({1, 2}, {{0, 1}});
  DynamicGraph dg(g);
  ReductionLog log;
  CHECK(restore_solution(log, dg, std::vector<VertexId>{1}) == std::vector<VertexId>{1});
  CHECK_THROWS_AS(restore_solution(log, dg, std::vector<VertexId>{0, 1}), ReconstructionError);
  CHECK_THROWS_AS(restore_solution(log, dg, std::vector<VertexId>{5}), ReconstructionError);
}

TEST_CASE("trace lines") {
  Run r(make_graph({1, 3}, {{0, 1}}));
  r.apply(at<degree_one>(0));
  CHECK(r.log.trace() == "degree_one 0 1\n");
  r.log.truncate(0);
  CHECK(r.log.offset == 0);
}

// Every rule, every anchor, many small graphs: exactness, lifting, and
// untouched graphs on NotApplicable.
TEST_CASE("master exactness property") {
  std::map<std::string, int> applied;
  Rng rng(2024);
  ReducerBudgets strong;
  strong.strengthened_almost_twin = true;
  strong.full_unconfined = true;
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 2 + rng.below(13);
    auto g = rep % 2 ? mwis::testing::random_structured_graph(n, 12, rng)
                     : mwis::testing::random_graph(n, 0.15 + rng.uniform() * 0.4, 12, rng);
    const auto& budgets = rep % 3 == 0 ? strong : ReducerBudgets{};
    for (const auto& info : rule_table()) {
      const std::size_t anchors = info.global ? 1 : n;
      for (VertexId v = 0; v < anchors; ++v) {
        auto result = check_rule(g, [&](ReductionContext& c) { return apply_rule(c, info.id, v); }, budgets);
        if (!result.failure.empty()) {
          FAIL_CHECK(info.name << " at " << v << ": " << result.failure << "\n" << write_graph(g));
        }
        if (result.outcome == RuleOutcome::Applied) ++applied[std::string(info.name)];
      }
    }
    // Variants that are not scheduler entries.
    for (VertexId v = 0; v < n; ++v) {
      auto result = check_rule(g, [&](ReductionContext& c) { return extended_domination_reverse(c, v); });
      CHECK_MESSAGE(result.failure.empty(), result.failure);
    }
    for (VertexId v = 0; v < n; ++v) {
      auto result = check_rule(g, [&](ReductionContext& c) { return cut_vertex_at(c, v); });
      CHECK_MESSAGE(result.failure.empty(), result.failure);
    }
  }
  for (const auto& info : rule_table()) {
    INFO(info.name);
    CHECK(applied[std::string(info.name)] > 0);
  }
}

TEST_CASE("reapplying at the same anchor makes progress or stops") {
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = mwis::testing::random_structured_graph(3 + rng.below(10), 9, rng);
    for (const auto& info : rule_table()) {
      if (info.global) continue;
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        DynamicGraph dg(g);
        ReductionLog log;
        ReducerBudgets b;
        ReductionContext ctx{dg, log, b};
        if (apply_rule(ctx, info.id, v) != RuleOutcome::Applied || !dg.is_active(v)) continue;
        const auto after = dg.checksum();
        const auto size = log.size();
        if (apply_rule(ctx, info.id, v) == RuleOutcome::Applied) {
          CHECK(dg.checksum() != after);
          CHECK(log.size() > size);
        }
      }
    }
  }
}
