#include "brute.hpp"

#include <algorithm>
#include <sstream>

namespace mwis::testing {

BruteResult brute_force(const StaticGraph& g) {
  const std::size_t n = g.num_vertices();
  BruteResult best;
  std::vector<VertexId> cur;
  std::vector<int> blocked(n, 0);
  auto rec = [&](auto&& self, VertexId v, Weight w) -> void {
    if (v == n) {
      if (w > best.weight || (w == best.weight && cur < best.set)) {
        best.weight = w;
        best.set = cur;
      }
      return;
    }
    if (!blocked[v]) {
      cur.push_back(v);
      for (VertexId u : g.neighbors(v)) ++blocked[u];
      self(self, v + 1, w + g.weight(v));
      for (VertexId u : g.neighbors(v)) --blocked[u];
      cur.pop_back();
    }
    self(self, v + 1, w);
  };
  rec(rec, 0, 0);
  return best;
}

Weight brute_alpha(const StaticGraph& g) { return brute_force(g).weight; }

BruteResult brute_force(const DynamicGraph& g) {
  std::vector<VertexId> ids;
  BruteResult r = brute_force(g.snapshot(&ids));
  for (VertexId& v : r.set) v = ids[v];
  std::sort(r.set.begin(), r.set.end());
  return r;
}

std::vector<std::vector<VertexId>> all_independent_sets(const StaticGraph& g) {
  std::vector<std::vector<VertexId>> out;
  const std::size_t n = g.num_vertices();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<VertexId> set;
    for (VertexId v = 0; v < n; ++v)
      if (mask >> v & 1U) set.push_back(v);
    if (g.is_independent(set)) out.push_back(std::move(set));
  }
  return out;
}

StaticGraph make_graph(std::vector<Weight> weights, std::vector<std::pair<VertexId, VertexId>> edges) {
  return StaticGraph(std::move(weights), edges);
}

StaticGraph random_graph(std::size_t n, double p, Weight max_weight, Rng& rng) {
  std::vector<Weight> w(n);
  for (auto& x : w) x = rng.between(1, max_weight);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (rng.coin(p)) edges.emplace_back(u, v);
  return StaticGraph(std::move(w), edges);
}

StaticGraph random_structured_graph(std::size_t n, Weight max_weight, Rng& rng) {
  std::vector<Weight> w(n);
  for (auto& x : w) x = rng.between(1, max_weight);
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (n < 2) return StaticGraph(std::move(w), edges);
  auto pick = [&] { return static_cast<VertexId>(rng.below(n)); };
  auto add = [&](VertexId a, VertexId b) {
    if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
  };
  // Sparse backbone.
  for (VertexId v = 1; v < n; ++v)
    if (rng.coin(0.7)) add(v, static_cast<VertexId>(rng.below(v)));
  const std::size_t motifs = 1 + rng.below(3);
  for (std::size_t m = 0; m < motifs; ++m) {
    switch (rng.below(4)) {
      case 0: {  // small clique
        std::vector<VertexId> c;
        for (std::size_t i = 0, k = 2 + rng.below(3); i < k; ++i) c.push_back(pick());
        for (std::size_t i = 0; i < c.size(); ++i)
          for (std::size_t j = i + 1; j < c.size(); ++j) add(c[i], c[j]);
        break;
      }
      case 1: {  // copy a neighborhood onto another vertex (twins / nested neighborhoods)
        VertexId a = pick(), b = pick();
        for (auto [x, y] : std::vector(edges))
          if ((x == a || y == a) && rng.coin(0.8)) add(b, x == a ? y : x);
        break;
      }
      case 2: {  // extra random edges
        for (std::size_t i = 0, k = rng.below(n); i < k; ++i) add(pick(), pick());
        break;
      }
      default: {  // pendant path
        VertexId a = pick(), b = pick();
        add(a, b);
        break;
      }
    }
  }
  std::erase_if(edges, [](auto e) { return e.first == e.second; });
  return StaticGraph(std::move(w), edges);
}

RuleCheck check_rule(const StaticGraph& g, const std::function<RuleOutcome(ReductionContext&)>& apply,
                     const ReducerBudgets& budgets) {
  RuleCheck out;
  std::ostringstream err;
  DynamicGraph dg(g);
  ReductionLog log;
  ReductionContext ctx{dg, log, budgets};
  const auto before = dg.checksum();
  try {
    out.outcome = apply(ctx);
    dg.validate();
  } catch (const std::exception& e) {
    out.failure = std::string("exception: ") + e.what();
    return out;
  }
  if (out.outcome != RuleOutcome::Applied) {
    if (dg.checksum() != before || !log.entries.empty()) out.failure = "graph or log changed without Applied";
    return out;
  }
  const Weight alpha = brute_alpha(g);
  const BruteResult reduced = brute_force(dg);
  if (alpha != reduced.weight + log.offset) {
    err << "alpha " << alpha << " != reduced " << reduced.weight << " + offset " << log.offset;
    out.failure = err.str();
    return out;
  }
  try {
    auto lifted = restore_solution(log, dg, reduced.set);
    if (!g.is_independent(lifted)) {
      out.failure = "lifted solution not independent";
    } else if (g.set_weight(lifted) != alpha) {
      err << "lifted weight " << g.set_weight(lifted) << " != alpha " << alpha;
      out.failure = err.str();
    }
  } catch (const std::exception& e) {
    out.failure = std::string("restore: ") + e.what();
  }
  return out;
}

}  // namespace mwis::testing
