#include "brute.hpp"
#include "doctest.h"
#include "mwis/exact.hpp"
#include "mwis/pipeline.hpp"

using namespace mwis;
using mwis::testing::brute_alpha;
using mwis::testing::make_graph;

namespace {

std::vector<VertexId> exact(const StaticGraph& k) { return mwis::testing::brute_force(k).set; }

ScreeningConfig mode(ScreeningMode m) {
  ScreeningConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_CASE("a fully reducible instance is solved by replay alone") {
  auto g = make_graph({3, 1, 4, 1, 5}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  bool called = false;
  auto r = pipeline_solve(g, mode(ScreeningMode::Never), ReducerBudgets{}, [&](const StaticGraph& k) {
    called = true;
    return exact(k);
  });
  CHECK_FALSE(called);
  CHECK(r.kernel_n == 0);
  CHECK(r.weight == brute_alpha(g));
  CHECK(r.weight == r.offset);
}

TEST_CASE("exact kernels give the optimum in every mode") {
  Rng rng(12);
  for (int rep = 0; rep < 80; ++rep) {
    auto g = mwis::testing::random_graph(5 + rng.below(12), 0.15 + 0.35 * rng.uniform(), 20, rng);
    const Weight alpha = brute_alpha(g);
    auto a = pipeline_solve(g, mode(ScreeningMode::NoGnnRed), ReducerBudgets{}, exact);
    auto b = pipeline_solve(g, mode(ScreeningMode::Never), ReducerBudgets{}, exact);
    auto c = pipeline_solve(g, std::nullopt, ReducerBudgets{}, exact);
    CHECK(a.weight == alpha);
    CHECK(b.weight == alpha);
    CHECK(c.weight == alpha);
    CHECK(a.weight == a.kernel_weight + a.offset);
    CHECK(b.kernel_n <= a.kernel_n);
  }
}

TEST_CASE("a suboptimal kernel solution still lifts to an independent set") {
  Rng rng(90);
  for (int rep = 0; rep < 60; ++rep) {
    auto g = mwis::testing::random_structured_graph(6 + rng.below(10), 15, rng);
    auto r = pipeline_solve(g, mode(ScreeningMode::Never), ReducerBudgets{},
                            [](const StaticGraph&) { return std::vector<VertexId>{}; });
    CHECK(g.is_independent(r.solution));
    CHECK(r.weight >= r.offset);
  }
}

TEST_CASE("verification rejects bad solutions") {
  auto g = make_graph({1, 2, 3}, {{0, 1}});
  CHECK_NOTHROW(verify_solution(g, std::vector<VertexId>{1, 2}, 5));
  CHECK_THROWS_AS(verify_solution(g, std::vector<VertexId>{0, 1}, 3), VerificationError);
  CHECK_THROWS_AS(verify_solution(g, std::vector<VertexId>{2}, 4), VerificationError);
  CHECK_THROWS_AS(verify_solution(g, std::vector<VertexId>{2, 2}, 6), VerificationError);
  CHECK_THROWS_AS(verify_solution(g, std::vector<VertexId>{5}, 0), VerificationError);
  CHECK_THROWS_AS(pipeline_solve(g, std::nullopt, ReducerBudgets{},
                                 [](const StaticGraph&) { return std::vector<VertexId>{0, 1}; }),
                  VerificationError);
}
