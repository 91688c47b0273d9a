#pragma once

#include <cstdint>
#include <vector>

namespace mwis {

// Dinic's blocking-flow max-flow on integer capacities.
class MaxFlow {
 public:
  using Capacity = std::int64_t;

  explicit MaxFlow(std::size_t nodes) : graph_(nodes) {}

  void add_arc(std::size_t from, std::size_t to, Capacity cap);
  Capacity solve(std::size_t source, std::size_t sink);
  // Nodes reachable from the source in the final residual network (the source side of a min cut).
  std::vector<char> source_side(std::size_t source) const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    Capacity cap;
  };

  bool build_levels(std::size_t source, std::size_t sink);
  Capacity push(std::size_t v, std::size_t sink, Capacity limit);

  std::vector<std::vector<Arc>> graph_;
  std::vector<int> level_;
  std::vector<std::size_t> next_arc_;
};

}  // namespace mwis
