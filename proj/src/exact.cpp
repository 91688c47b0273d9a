#include "mwis/exact.hpp"

#include <algorithm>
#include <bit>

namespace mwis {
namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
    return c;
  }
  void subtract(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class BranchAndBound {
 public:
  BranchAndBound(const StaticGraph& g, const Budget& budget)
      : g_(g), budget_(budget), n_(g.num_vertices()), adj_(n_, Bitset(n_)) {
    for (VertexId v = 0; v < n_; ++v)
      for (VertexId u : g.neighbors(v)) adj_[v].set(u);
    if (budget.time_cap) deadline_ = std::chrono::steady_clock::now() + *budget.time_cap;
  }

  ExactResult run() {
    Bitset all(n_);
    for (std::size_t v = 0; v < n_; ++v) all.set(v);
    // Greedy start gives a useful first bound.
    greedy_seed();
    recurse(all, 0);
    ExactResult r;
    r.weight = best_weight_;
    r.set = best_set_;
    std::sort(r.set.begin(), r.set.end());
    r.status = aborted_ ? ExactStatus::BudgetExceeded : ExactStatus::Optimal;
    r.nodes = nodes_;
    return r;
  }

 private:
  void greedy_seed() {
    std::vector<VertexId> order(n_);
    for (VertexId v = 0; v < n_; ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexId a, VertexId b) { return g_.weight(a) > g_.weight(b); });
    std::vector<char> blocked(n_, 0);
    for (VertexId v : order) {
      if (blocked[v]) continue;
      best_set_.push_back(v);
      best_weight_ += g_.weight(v);
      for (VertexId u : g_.neighbors(v)) blocked[u] = 1;
    }
    std::sort(best_set_.begin(), best_set_.end());
  }

  bool out_of_budget() {
    if (aborted_) return true;
    if (++nodes_ > budget_.node_budget) aborted_ = true;
    if (deadline_ && (nodes_ & 1023) == 0 && std::chrono::steady_clock::now() > *deadline_) aborted_ = true;
    return aborted_;
  }

  void take(Bitset& p, std::size_t v, Weight& cur) {
    current_.push_back(static_cast<VertexId>(v));
    cur += g_.weight(static_cast<VertexId>(v));
    p.reset(v);
    p.subtract(adj_[v]);
  }

  void offer(Weight cur) {
    if (cur < best_weight_) return;
    std::vector<VertexId> cand = current_;
    std::sort(cand.begin(), cand.end());
    if (cur > best_weight_ || (budget_.lexicographic && cand < best_set_)) {
      best_weight_ = cur;
      best_set_ = std::move(cand);
    }
  }

  void recurse(Bitset p, Weight cur) {
    if (out_of_budget()) return;
    const std::size_t depth = current_.size();
    // Vertices of degree <= 1 that lie in every optimum are taken directly.
    // Strictness keeps all tied optima reachable in lexicographic mode.
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<std::size_t> members;
      p.for_each([&](std::size_t v) { members.push_back(v); });
      for (std::size_t v : members) {
        if (!p.test(v)) continue;
        std::size_t d = p.count_and(adj_[v]);
        if (d == 0) {
          take(p, v, cur);
          changed = true;
        } else if (d == 1) {
          std::size_t u = 0;
          for (VertexId x : g_.neighbors(static_cast<VertexId>(v)))
            if (p.test(x)) u = x;
          Weight wv = g_.weight(static_cast<VertexId>(v)), wu = g_.weight(static_cast<VertexId>(u));
          if (wv > wu || (wv == wu && !budget_.lexicographic)) {
            take(p, v, cur);
            changed = true;
          }
        }
      }
    }

    Weight rest = 0;
    std::size_t pivot = n_, pivot_deg = 0;
    p.for_each([&](std::size_t v) {
      rest += g_.weight(static_cast<VertexId>(v));
      std::size_t d = p.count_and(adj_[v]);
      if (pivot == n_ || d > pivot_deg) {
        pivot = v;
        pivot_deg = d;
      }
    });
    if (pivot == n_) {
      offer(cur);
    } else if (cur + rest > best_weight_ || (budget_.lexicographic && cur + rest == best_weight_)) {
      Bitset with = p;
      Weight cw = cur;
      take(with, pivot, cw);
      recurse(with, cw);
      current_.resize(current_.size() - 1);
      p.reset(pivot);
      recurse(p, cur);
    }
    current_.resize(depth);
  }

  const StaticGraph& g_;
  const Budget& budget_;
  std::size_t n_;
  std::vector<Bitset> adj_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<VertexId> current_;
  Weight best_weight_ = 0;
  std::vector<VertexId> best_set_;
};

}  // namespace

ExactResult solve_exact(const StaticGraph& g, const Budget& budget) {
  if (g.num_vertices() == 0) return {};
  BranchAndBound bb(g, budget);
  return bb.run();
}

EnumerationStatus enumerate_independent_sets(
    const StaticGraph& g, std::uint64_t cap,
    const std::function<bool(std::span<const VertexId>)>& visit) {
  const std::size_t n = g.num_vertices();
  if (n > 63) return EnumerationStatus::Overflow;
  std::vector<std::uint64_t> adj(n, 0);
  for (VertexId v = 0; v < n; ++v)
    for (VertexId u : g.neighbors(v)) adj[v] |= std::uint64_t{1} << u;

  std::uint64_t emitted = 0;
  EnumerationStatus status = EnumerationStatus::Complete;
  std::vector<VertexId> members;
  // Deciding bits from the highest index down, "absent" before "present",
  // produces masks in increasing numeric order.
  auto rec = [&](auto&& self, int bit, std::uint64_t mask) -> bool {
    if (bit < 0) {
      if (++emitted > cap) {
        status = EnumerationStatus::Overflow;
        return false;
      }
      members.clear();
      for (std::uint64_t m = mask; m; m &= m - 1) members.push_back(static_cast<VertexId>(std::countr_zero(m)));
      if (!visit(members)) {
        status = EnumerationStatus::Stopped;
        return false;
      }
      return true;
    }
    if (!self(self, bit - 1, mask)) return false;
    if (adj[bit] & mask) return true;
    return self(self, bit - 1, mask | (std::uint64_t{1} << bit));
  };
  rec(rec, static_cast<int>(n) - 1, 0);
  return status;
}

}  // namespace mwis
