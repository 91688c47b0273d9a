#include "mwis/local_search.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mwis {

Solution::Solution(const StaticGraph& g)
    : g_(&g), in_(g.num_vertices(), 0), tight_(g.num_vertices(), 0), nweight_(g.num_vertices(), 0) {}

Solution::Solution(const StaticGraph& g, std::span<const VertexId> set) : Solution(g) {
  for (VertexId v : set) {
    if (v >= g.num_vertices()) throw std::invalid_argument("solution vertex out of range");
    if (in_[v]) throw std::invalid_argument("duplicate solution vertex " + std::to_string(v + 1));
    if (tight_[v] != 0) throw std::invalid_argument("solution is not independent");
    insert(v);
  }
}

std::vector<VertexId> Solution::members() const {
  std::vector<VertexId> out;
  out.reserve(size_);
  for (VertexId v = 0; v < in_.size(); ++v)
    if (in_[v]) out.push_back(v);
  return out;
}

void Solution::insert(VertexId v) {
  const Weight w = g_->weight(v);
  in_[v] = 1;
  weight_ += w;
  ++size_;
  for (VertexId u : g_->neighbors(v)) {
    ++tight_[u];
    nweight_[u] += w;
  }
}

void Solution::remove(VertexId v) {
  const Weight w = g_->weight(v);
  in_[v] = 0;
  weight_ -= w;
  --size_;
  for (VertexId u : g_->neighbors(v)) {
    --tight_[u];
    nweight_[u] -= w;
  }
}

bool Solution::consistent() const {
  Weight total = 0;
  std::size_t count = 0;
  for (VertexId v = 0; v < in_.size(); ++v) {
    std::uint32_t t = 0;
    Weight nw = 0;
    for (VertexId u : g_->neighbors(v))
      if (in_[u]) {
        ++t;
        nw += g_->weight(u);
      }
    if (t != tight_[v] || nw != nweight_[v]) return false;
    if (in_[v]) {
      if (t != 0) return false;
      total += g_->weight(v);
      ++count;
    }
  }
  return total == weight_ && count == size_;
}

Solution random_greedy_solution(const StaticGraph& g, Rng& rng) {
  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  Solution s(g);
  for (VertexId v : order)
    if (s.tightness(v) == 0) s.insert(v);
  return s;
}

LocalSearch::LocalSearch(const StaticGraph& g, Solution initial, std::size_t mq, Rng rng, std::size_t max_path)
    : g_(g),
      sol_(std::move(initial)),
      mq_(mq),
      rng_(rng),
      max_path_(max_path),
      on_path_(g.num_vertices(), 0),
      near_in_(g.num_vertices(), 0) {
  if (&sol_.graph() != &g) throw std::invalid_argument("solution belongs to a different graph");
  remember_best();
}

void LocalSearch::push_all() {
  for (VertexId v = 0; v < g_.num_vertices(); ++v) queue_.push_back(v);
}

void LocalSearch::insert_logged(VertexId v) {
  sol_.insert(v);
  journal_.emplace_back(v, true);
  queue_.push_back(v);
}

void LocalSearch::remove_logged(VertexId v) {
  sol_.remove(v);
  journal_.emplace_back(v, false);
  queue_.push_back(v);
  for (VertexId u : g_.neighbors(v)) queue_.push_back(u);
}

void LocalSearch::insert_evict(VertexId v) {
  for (VertexId u : g_.neighbors(v))
    if (sol_.contains(u)) remove_logged(u);
  insert_logged(v);
}

bool LocalSearch::neighborhood_swap(VertexId v) {
  if (sol_.contains(v) || g_.weight(v) <= sol_.neighbor_weight(v)) return false;
  insert_evict(v);
  return true;
}

bool LocalSearch::two_one(VertexId x) {
  if (!sol_.contains(x)) return false;
  std::vector<VertexId> cand;
  for (VertexId y : g_.neighbors(x))
    if (sol_.tightness(y) == 1) cand.push_back(y);
  if (cand.size() < 2) return false;
  std::stable_sort(cand.begin(), cand.end(), [&](VertexId a, VertexId b) { return g_.weight(a) > g_.weight(b); });
  const Weight wx = g_.weight(x);
  for (std::size_t i = 0; i + 1 < cand.size(); ++i) {
    if (g_.weight(cand[i]) + g_.weight(cand[i + 1]) <= wx) break;
    for (std::size_t j = i + 1; j < cand.size(); ++j) {
      if (g_.weight(cand[i]) + g_.weight(cand[j]) <= wx) break;
      if (g_.adjacent(cand[i], cand[j])) continue;
      remove_logged(x);
      insert_logged(cand[i]);
      insert_logged(cand[j]);
      return true;
    }
  }
  return false;
}

bool LocalSearch::aap(VertexId start, bool perturbation) {
  const bool start_in = sol_.contains(start);
  if (!start_in && sol_.tightness(start) != 1) return false;

  std::vector<Step> path;
  std::vector<VertexId> touched, inserted;
  auto mark_in = [&](VertexId x) {
    on_path_[x] = 1;
    touched.push_back(x);
    inserted.push_back(x);
    for (VertexId w : g_.neighbors(x)) ++near_in_[w];
  };
  auto mark_out = [&](VertexId y) {
    on_path_[y] = 1;
    touched.push_back(y);
  };
  auto solution_neighbor_other_than = [&](VertexId x, VertexId u) {
    for (VertexId w : g_.neighbors(x))
      if (w != u && sol_.contains(w)) return w;
    return kNoVertex;
  };

  VertexId u;  // last removed solution vertex
  if (start_in) {
    path.push_back({kNoVertex, start});
    mark_out(start);
    u = start;
  } else {
    u = solution_neighbor_other_than(start, kNoVertex);
    path.push_back({start, u});
    mark_in(start);
    mark_out(u);
  }

  bool ended = false;
  std::vector<Step> options;
  while (!ended && path.size() < max_path_) {
    options.clear();
    for (VertexId x : g_.neighbors(u)) {
      if (sol_.contains(x) || on_path_[x] || near_in_[x] != 0) continue;
      const auto t = sol_.tightness(x);
      if (t == 1) {
        options.push_back({x, kNoVertex});
      } else if (t == 2) {
        VertexId y = solution_neighbor_other_than(x, u);
        options.push_back({x, on_path_[y] ? kNoVertex : y});
      }
    }
    if (options.empty()) break;
    auto gain = [&](const Step& s) { return g_.weight(s.in) - (s.out == kNoVertex ? 0 : g_.weight(s.out)); };
    Step pick;
    if (perturbation) {
      pick = options[rng_.below(options.size())];
    } else {
      pick = *std::max_element(options.begin(), options.end(), [&](const Step& a, const Step& b) {
        const Weight ga = gain(a), gb = gain(b);
        return ga != gb ? ga < gb : a.in > b.in;
      });
    }
    path.push_back(pick);
    mark_in(pick.in);
    if (pick.out == kNoVertex) {
      ended = true;
    } else {
      mark_out(pick.out);
      u = pick.out;
    }
  }

  for (VertexId v : inserted)
    for (VertexId w : g_.neighbors(v)) --near_in_[w];
  for (VertexId v : touched) on_path_[v] = 0;

  // Every prefix of whole steps is a valid exchange; pick the best one.
  Weight running = 0, best_gain = 0;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].in != kNoVertex) running += g_.weight(path[i].in);
    if (path[i].out != kNoVertex) running -= g_.weight(path[i].out);
    if (running > best_gain || (running == best_gain && best_len > 0)) {
      best_gain = running;
      best_len = i + 1;
    }
  }
  std::size_t len = best_len;
  if (len == 0) {
    if (!perturbation) return false;
    len = path.size();
  }
  for (std::size_t i = 0; i < len; ++i)
    if (path[i].out != kNoVertex) remove_logged(path[i].out);
  for (std::size_t i = 0; i < len; ++i)
    if (path[i].in != kNoVertex) insert_logged(path[i].in);
  return true;
}

void LocalSearch::greedy() {
  while (!queue_.empty()) {
    const VertexId v = queue_.front();
    queue_.pop_front();
    if (sol_.contains(v)) {
      two_one(v);
      continue;
    }
    if (neighborhood_swap(v)) continue;
    if (sol_.tightness(v) == 1) {
      VertexId s = kNoVertex;
      for (VertexId w : g_.neighbors(v))
        if (sol_.contains(w)) {
          s = w;
          break;
        }
      if (two_one(s)) continue;
      aap(v, false);
    }
  }
}

void LocalSearch::undo() {
  for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
    if (it->second)
      sol_.remove(it->first);
    else
      sol_.insert(it->first);
  }
  journal_.clear();
}

void LocalSearch::remember_best() {
  best_weight_ = sol_.weight();
  best_ = sol_.members();
}

void LocalSearch::iterate(bool backtrack) {
  journal_.clear();
  queue_.clear();
  const Weight before = sol_.weight();
  const std::size_t n = g_.num_vertices();
  if (n == 0) return;
  const auto u = static_cast<VertexId>(rng_.below(n));
  if (sol_.contains(u) || sol_.tightness(u) == 1) {
    aap(u, true);
  } else {
    insert_evict(u);
    for (std::size_t flips = 0; flips < mq_ && !queue_.empty() && queue_.size() < mq_; ++flips) {
      const std::size_t i = rng_.below(queue_.size());
      const VertexId v = queue_[i];
      queue_[i] = queue_.back();
      queue_.pop_back();
      if (sol_.contains(v))
        remove_logged(v);
      else
        insert_evict(v);
    }
  }
  greedy();
  if (backtrack && sol_.weight() < before) undo();
  journal_.clear();
  ++iterations_;
  if (sol_.weight() > best_weight_) remember_best();
}

Solution LocalSearch::run(std::optional<std::uint64_t> max_iterations,
                          std::optional<std::chrono::steady_clock::time_point> deadline) {
  push_all();
  greedy();
  journal_.clear();
  if (sol_.weight() > best_weight_) remember_best();
  for (std::uint64_t i = 0; !max_iterations || i < *max_iterations; ++i) {
    if (deadline && (i & 63) == 0 && std::chrono::steady_clock::now() >= *deadline) break;
    if (!max_iterations && !deadline) break;
    iterate(true);
  }
  return Solution(g_, best_);
}

Solution run_baseline(const StaticGraph& g, const std::optional<Solution>& initial, const BaselineConfig& cfg) {
  Rng rng(cfg.seed, 0);
  Rng init_rng(cfg.seed, 1);
  Solution start = initial ? *initial : random_greedy_solution(g, init_rng);
  LocalSearch ls(g, std::move(start), cfg.mq, rng);
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (cfg.time_limit)
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(*cfg.time_limit);
  return ls.run(cfg.iterations, deadline);
}

}  // namespace mwis
