#include <set>

#include "brute.hpp"
#include "doctest.h"
#include "mwis/exact.hpp"
#include "mwis/maxflow.hpp"

using namespace mwis;
using mwis::testing::brute_force;
using mwis::testing::make_graph;
using mwis::testing::random_graph;

TEST_CASE("exact: trivial inputs") {
  auto r = solve_exact(StaticGraph{});
  CHECK(r.weight == 0);
  CHECK(r.set.empty());
  CHECK(r.optimal());

  auto one = solve_exact(make_graph({7}, {}));
  CHECK(one.weight == 7);
  CHECK(one.set == std::vector<VertexId>{0});
}

TEST_CASE("exact: weighted C5") {
  // Weights 1..5 around the cycle; the optimum takes the vertices weighted 3 and 5.
  auto c5 = make_graph({1, 2, 3, 4, 5}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  auto r = solve_exact(c5);
  CHECK(r.weight == 8);
  CHECK(r.set == std::vector<VertexId>{2, 4});
  CHECK(brute_force(c5).weight == 8);
}

TEST_CASE("exact: agrees with brute force on random graphs") {
  Rng rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(18);
    auto g = random_graph(n, rng.uniform() * 0.6, 30, rng);
    auto r = solve_exact(g);
    auto b = brute_force(g);
    REQUIRE(r.optimal());
    CHECK(r.weight == b.weight);
    CHECK(g.is_independent(r.set));
    CHECK(g.set_weight(r.set) == r.weight);
    Budget lex;
    lex.lexicographic = true;
    CHECK(solve_exact(g, lex).set == b.set);
  }
}

TEST_CASE("exact: budget exhaustion still returns a valid lower bound") {
  Rng rng(5);
  auto g = random_graph(60, 0.1, 100, rng);
  Budget b;
  b.node_budget = 10;
  auto r = solve_exact(g, b);
  CHECK(r.status == ExactStatus::BudgetExceeded);
  CHECK(g.is_independent(r.set));
  CHECK(g.set_weight(r.set) == r.weight);
  CHECK(r.weight > 0);
}

TEST_CASE("enumeration visits every independent set once") {
  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = random_graph(1 + rng.below(12), 0.3, 5, rng);
    std::set<std::vector<VertexId>> seen;
    std::size_t visits = 0;
    auto st = enumerate_independent_sets(g, 1'000'000, [&](std::span<const VertexId> s) {
      seen.insert({s.begin(), s.end()});
      ++visits;
      return true;
    });
    CHECK(st == EnumerationStatus::Complete);
    auto expected = mwis::testing::all_independent_sets(g);
    CHECK(visits == expected.size());
    CHECK(seen == std::set<std::vector<VertexId>>(expected.begin(), expected.end()));
  }
}

TEST_CASE("enumeration overflow and early stop") {
  auto empty4 = make_graph({1, 1, 1, 1}, {});
  std::size_t count = 0;
  CHECK(enumerate_independent_sets(empty4, 15, [&](auto) { return ++count, true; }) == EnumerationStatus::Overflow);
  CHECK(enumerate_independent_sets(empty4, 16, [](auto) { return true; }) == EnumerationStatus::Complete);
  CHECK(enumerate_independent_sets(empty4, 16, [](auto) { return false; }) == EnumerationStatus::Stopped);
  auto edge = make_graph({1, 1}, {{0, 1}});
  std::vector<std::vector<VertexId>> order;
  enumerate_independent_sets(edge, 10, [&](std::span<const VertexId> s) {
    order.emplace_back(s.begin(), s.end());
    return true;
  });
  CHECK(order == std::vector<std::vector<VertexId>>{{}, {0}, {1}});
}

TEST_CASE("max flow on a small network") {
  MaxFlow f(4);
  f.add_arc(0, 1, 3);
  f.add_arc(0, 2, 2);
  f.add_arc(1, 2, 5);
  f.add_arc(1, 3, 2);
  f.add_arc(2, 3, 3);
  CHECK(f.solve(0, 3) == 5);
  auto side = f.source_side(0);
  CHECK(side[0]);
  CHECK(!side[3]);
}
