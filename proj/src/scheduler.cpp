#include "mwis/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace mwis {

std::string_view mode_name(ScreeningMode m) {
  switch (m) {
    case ScreeningMode::NoGnnRed: return "no-gnn";
    case ScreeningMode::Never: return "never";
    case ScreeningMode::Always: return "always";
    case ScreeningMode::Initial: return "initial";
    case ScreeningMode::InitialTight: return "initial-tight";
  }
  return "?";
}

ScreeningMode mode_from_name(std::string_view name) {
  for (auto m : {ScreeningMode::NoGnnRed, ScreeningMode::Never, ScreeningMode::Always, ScreeningMode::Initial,
                 ScreeningMode::InitialTight})
    if (mode_name(m) == name) return m;
  throw std::invalid_argument("unknown screening mode \"" + std::string(name) + "\"");
}

std::vector<VertexId> screen(const VertexScorer& model, const StaticGraph& g) {
  auto scores = model.score(g);
  if (scores.size() != g.num_vertices()) throw std::invalid_argument("scorer returned the wrong number of scores");
  std::vector<VertexId> out;
  for (VertexId v = 0; v < scores.size(); ++v)
    if (scores[v] > kSuggestionThreshold) out.push_back(v);
  return out;
}

void QueueSet::push(std::size_t rule, VertexId v) {
  if (!accepting_[rule]) return;
  auto& member = member_[rule];
  if (v >= member.size()) member.resize(std::max<std::size_t>(v + 1, member.size() * 2), 0);
  if (member[v]) return;
  member[v] = 1;
  queues_[rule].push_back(v);
}

void QueueSet::push_changed(std::span<const VertexId> changed) {
  for (std::size_t r = 0; r < queues_.size(); ++r)
    for (VertexId v : changed) push(r, v);
}

std::optional<VertexId> QueueSet::pop(std::size_t rule) {
  auto& q = queues_[rule];
  if (q.empty()) return std::nullopt;
  VertexId v = q.front();
  q.pop_front();
  member_[rule][v] = 0;
  return v;
}

void QueueSet::clear(std::size_t rule) {
  for (VertexId v : queues_[rule]) member_[rule][v] = 0;
  queues_[rule].clear();
}

std::string ReduceStats::format() const {
  std::string out;
  char buf[256];
  for (const auto& info : rule_table()) {
    const auto& s = rules[static_cast<std::size_t>(info.id)];
    std::snprintf(buf, sizeof buf, "rule=%s attempts=%llu applied=%llu skipped=%llu screenings=%llu suggested=%llu time_ms=%.3f\n",
                  std::string(info.name).c_str(), static_cast<unsigned long long>(s.attempts),
                  static_cast<unsigned long long>(s.applied), static_cast<unsigned long long>(s.skipped),
                  static_cast<unsigned long long>(s.screenings), static_cast<unsigned long long>(s.suggested), s.time_ms);
    out += buf;
  }
  std::snprintf(buf, sizeof buf,
                "summary mode=%s n=%zu m=%zu kernel_n=%zu kernel_m=%zu offset=%lld expensive_invocations=%llu sweeps=%llu "
                "time_ms=%.3f\n",
                std::string(mode_name(mode)).c_str(), input_n, input_m, kernel_n, kernel_m, static_cast<long long>(offset),
                static_cast<unsigned long long>(expensive_invocations), static_cast<unsigned long long>(sweeps), time_ms);
  out += buf;
  return out;
}

namespace {
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

bool is_heavy_rule(RuleId r) { return r == RuleId::HeavySet || r == RuleId::HeavySet3; }
}  // namespace

ReduceResult run_reduce(DynamicGraph& g, const ScreeningConfig& cfg, const ReducerBudgets& budgets) {
  const auto start = Clock::now();
  ReduceResult out;
  auto& stats = out.stats;
  stats.mode = cfg.mode;
  stats.input_n = g.num_active();
  stats.input_m = g.num_edges();

  const auto& table = rule_table();
  QueueSet queues;
  std::array<bool, kNumRules> enabled{};
  for (std::size_t i = 0; i < kNumRules; ++i) {
    enabled[i] = !(table[i].expensive && cfg.mode == ScreeningMode::NoGnnRed);
    queues.set_accepting(i, enabled[i]);
  }
  const auto active = g.active_vertices();
  for (std::size_t i = 0; i < kNumRules; ++i)
    for (VertexId v : active) queues.push(i, v);
  g.clear_changed();

  std::array<bool, kNumRules> visited{};
  // Heavy-set screening suggests members; their neighbors become anchors and
  // the members restrict the candidate pairs until the queue drains.
  std::array<std::vector<char>, kNumRules> filters;
  std::array<bool, kNumRules> filter_on{};
  ReductionContext ctx{g, out.log, budgets};

  auto attempt = [&](std::size_t i, VertexId v) {
    auto& s = stats.rules[i];
    const auto t = Clock::now();
    ctx.candidates = filter_on[i] ? &filters[i] : nullptr;
    RuleOutcome r = apply_rule(ctx, table[i].id, v);
    s.time_ms += ms_since(t);
    ++s.attempts;
    if (table[i].expensive) ++stats.expensive_invocations;
    if (r == RuleOutcome::Applied) ++s.applied;
    if (r == RuleOutcome::Skipped) ++s.skipped;
    return r == RuleOutcome::Applied;
  };

  // Exhaustive modes finish with full sweeps: a change can enable a non-local
  // rule (extended unconfined, heavy set, ...) far from the changed vertices.
  const bool sweep = cfg.closure_sweep && !cfg.screens();
  bool changed_since_sweep = false;

  std::size_t i = 0;
  for (;;) {
    if (i == kNumRules) {
      if (!sweep || !changed_since_sweep) break;
      changed_since_sweep = false;
      ++stats.sweeps;
      const auto remaining = g.active_vertices();
      for (std::size_t r = 0; r < kNumRules; ++r)
        for (VertexId v : remaining) queues.push(r, v);
      i = 0;
    }
    if (!enabled[i] || queues.empty(i)) {
      ++i;
      continue;
    }
    const RuleInfo& info = table[i];
    const auto& model = cfg.models[i];
    bool gate_open = true;
    if (info.expensive && cfg.screens() && model && (cfg.mode == ScreeningMode::Always || !visited[i])) {
      std::vector<VertexId> ids;
      StaticGraph snap = g.snapshot(&ids);
      auto suggested = screen(*model, snap);
      for (VertexId& v : suggested) v = ids[v];
      auto& s = stats.rules[i];
      ++s.screenings;
      s.suggested += suggested.size();
      queues.clear(i);
      if (info.global) {
        gate_open = static_cast<double>(suggested.size()) > budgets.global_rule_fraction * static_cast<double>(g.num_active());
      } else if (is_heavy_rule(info.id)) {
        filters[i].assign(g.capacity(), 0);
        std::vector<VertexId> anchors;
        for (VertexId v : suggested) {
          filters[i][v] = 1;
          for (VertexId x : g.neighbors(v)) anchors.push_back(x);
        }
        std::sort(anchors.begin(), anchors.end());
        anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
        for (VertexId x : anchors) queues.push(i, x);
        filter_on[i] = true;
      } else {
        for (VertexId v : suggested) queues.push(i, v);
      }
      if (cfg.mode == ScreeningMode::InitialTight) queues.set_accepting(i, false);
    } else if (cfg.mode != ScreeningMode::InitialTight) {
      filter_on[i] = false;
    }
    visited[i] = true;

    bool applied = false;
    if (info.global) {
      queues.clear(i);
      if (gate_open) applied = attempt(i, kNoVertex);
    } else {
      while (auto v = queues.pop(i)) {
        if (!g.is_active(*v)) continue;
        if (attempt(i, *v)) {
          applied = true;
          break;
        }
      }
    }
    if (applied) {
      queues.push_changed(g.take_changed());
      changed_since_sweep = true;
      i = 0;
    } else {
      ++i;
    }
  }

  stats.kernel_n = g.num_active();
  stats.kernel_m = g.num_edges();
  stats.offset = out.log.offset;
  stats.time_ms = ms_since(start);
  return out;
}

std::vector<VertexId> kernel_support(const DynamicGraph& g) {
  std::vector<char> seen(g.capacity(), 0);
  std::vector<VertexId> stack, out;
  for (VertexId v : g.active_vertices()) {
    stack.push_back(v);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      if (seen[x]) continue;
      seen[x] = 1;
      if (x < g.original_size())
        out.push_back(x);
      else
        for (VertexId p : g.parents(x)) stack.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mwis
