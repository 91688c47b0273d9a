#include "mwis/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace mwis {

void MaxFlow::add_arc(std::size_t from, std::size_t to, Capacity cap) {
  graph_[from].push_back({to, graph_[to].size(), cap});
  graph_[to].push_back({from, graph_[from].size() - 1, 0});
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
  level_.assign(graph_.size(), -1);
  std::queue<std::size_t> q;
  level_[source] = 0;
  q.push(source);
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop();
    for (const Arc& a : graph_[v]) {
      if (a.cap > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[v] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[sink] >= 0;
}

MaxFlow::Capacity MaxFlow::push(std::size_t v, std::size_t sink, Capacity limit) {
  if (v == sink) return limit;
  for (std::size_t& i = next_arc_[v]; i < graph_[v].size(); ++i) {
    Arc& a = graph_[v][i];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    Capacity got = push(a.to, sink, std::min(limit, a.cap));
    if (got > 0) {
      a.cap -= got;
      graph_[a.to][a.rev].cap += got;
      return got;
    }
  }
  return 0;
}

MaxFlow::Capacity MaxFlow::solve(std::size_t source, std::size_t sink) {
  Capacity flow = 0;
  while (build_levels(source, sink)) {
    next_arc_.assign(graph_.size(), 0);
    while (Capacity f = push(source, sink, std::numeric_limits<Capacity>::max())) flow += f;
  }
  return flow;
}

std::vector<char> MaxFlow::source_side(std::size_t source) const {
  std::vector<char> seen(graph_.size(), 0);
  std::vector<std::size_t> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const Arc& a : graph_[v])
      if (a.cap > 0 && !seen[a.to]) {
        seen[a.to] = 1;
        stack.push_back(a.to);
      }
  }
  return seen;
}

}  // namespace mwis
