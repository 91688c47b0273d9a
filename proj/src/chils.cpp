#include "mwis/chils.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mwis {

std::vector<VertexId> DCore::lift(std::span<const VertexId> core_set) const {
  std::vector<VertexId> out = intersection;
  for (VertexId c : core_set) out.push_back(to_original.at(c));
  std::sort(out.begin(), out.end());
  return out;
}

DCore build_dcore(const StaticGraph& g, std::span<const Solution> portfolio) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> count(n, 0);
  for (const auto& s : portfolio)
    for (VertexId v : s.members()) ++count[v];
  DCore core;
  for (VertexId v = 0; v < n; ++v) {
    if (count[v] == portfolio.size() && count[v] > 0) {
      core.intersection.push_back(v);
      core.offset += g.weight(v);
    } else if (count[v] > 0) {
      core.to_original.push_back(v);
    }
  }
  core.graph = induced_subgraph(g, core.to_original);
  return core;
}

void ChilsConfig::validate() const {
  if (portfolio < 2) throw std::invalid_argument("CHILS needs at least 2 solutions");
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  if (mq_base == 0) throw std::invalid_argument("queue size must be positive");
  if (deterministic && deterministic->chils_iterations == 0)
    throw std::invalid_argument("deterministic mode needs at least one CHILS iteration");
}

std::size_t best_index(std::span<const Solution> portfolio) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < portfolio.size(); ++i)
    if (portfolio[i].weight() > portfolio[best].weight()) best = i;
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;

enum Phase : std::uint64_t { kInit = 0, kGlobal = 1, kCore = 2, kPerturb = 3 };

// Streams are keyed by (seed, id) and the phase, never by worker.
Rng stream(const ChilsConfig& cfg, std::size_t id, std::size_t iteration, Phase phase) {
  return Rng(cfg.seed ^ splitmix64(id + 1), (static_cast<std::uint64_t>(iteration) << 2) | phase);
}


// Runs fn(id) for every id; ids are dealt to workers round-robin.
template <class F>
void for_each_id(std::size_t count, std::size_t threads, F&& fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t id = 0; id < count; ++id) fn(id);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t id = t; id < count; id += threads) fn(id);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

std::optional<Clock::time_point> phase_deadline(const ChilsConfig& cfg, ChilsConfig::Seconds t,
                                                Clock::time_point overall) {
  if (cfg.deterministic) return std::nullopt;
  return std::min(overall, Clock::now() + std::chrono::duration_cast<Clock::duration>(t));
}

std::optional<std::uint64_t> phase_iterations(const ChilsConfig& cfg) {
  if (cfg.deterministic) return cfg.deterministic->ls_iterations;
  return std::nullopt;
}

}  // namespace

std::size_t parallel_perturb(const StaticGraph& g, std::vector<Solution>& portfolio, std::size_t best,
                             const ChilsConfig& cfg, std::size_t iteration) {
  std::vector<char> touched(portfolio.size(), 0);
  for_each_id(portfolio.size(), cfg.threads, [&](std::size_t id) {
    if (id % 2 == 0 || id == best) return;
    LocalSearch ls(g, portfolio[id], cfg.queue_size(id), stream(cfg, id, iteration, kPerturb));
    ls.iterate(false);
    portfolio[id] = ls.solution();
    touched[id] = 1;
  });
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), 1));
}

ChilsResult run_chils(const StaticGraph& g, const ChilsConfig& cfg, const std::optional<Solution>& warm) {
  cfg.validate();
  const auto start = Clock::now();
  const auto overall = start + std::chrono::duration_cast<Clock::duration>(cfg.time_limit);
  const std::size_t P = cfg.portfolio;

  std::vector<Solution> portfolio;
  portfolio.reserve(P);
  for (std::size_t id = 0; id < P; ++id) {
    if (warm) {
      if (&warm->graph() != &g) throw std::invalid_argument("warm start belongs to a different graph");
      portfolio.push_back(*warm);
    } else {
      Rng rng = stream(cfg, id, 0, kInit);
      portfolio.push_back(random_greedy_solution(g, rng));
    }
  }

  ChilsResult result;
  std::mutex stats_mutex;
  auto out_of_time = [&] { return !cfg.deterministic && Clock::now() >= overall; };

  for (std::size_t it = 0;; ++it) {
    if (cfg.deterministic ? it >= cfg.deterministic->chils_iterations : (it > 0 && out_of_time())) break;
    ChilsIteration rec;
    rec.iteration = it;

    // Full graph.
    for_each_id(P, cfg.threads, [&](std::size_t id) {
      LocalSearch ls(g, portfolio[id], cfg.queue_size(id), stream(cfg, id, it, kGlobal));
      portfolio[id] = ls.run(phase_iterations(cfg), phase_deadline(cfg, cfg.t_global, overall));
    });
    std::size_t best = best_index(portfolio);

    // D-Core.
    const DCore core = build_dcore(g, portfolio);
    rec.core_n = core.graph.num_vertices();
    rec.core_m = core.graph.num_edges();
    rec.core_offset = core.offset;
    std::vector<char> accepted(P, 0);
    for_each_id(P, cfg.threads, [&](std::size_t id) {
      LocalSearch ls(core.graph, Solution(core.graph), cfg.queue_size(id), stream(cfg, id, it, kCore));
      const Solution found = ls.run(phase_iterations(cfg), phase_deadline(cfg, cfg.t_core, overall));
      const Weight lifted_weight = found.weight() + core.offset;
      const bool take = lifted_weight >= portfolio[id].weight() || (id % 2 == 1 && id != best);
      if (!take) return;
      auto lifted = core.lift(found.members());
      if (cfg.verify) {
        const bool ok = g.is_independent(lifted) && g.set_weight(lifted) == lifted_weight;
        std::lock_guard lock(stats_mutex);
        ++result.lift_checks;
        if (!ok) {
          ++result.lift_failures;
          return;
        }
      }
      portfolio[id] = Solution(g, lifted);
      accepted[id] = 1;
    });
    rec.accepted = static_cast<std::size_t>(std::count(accepted.begin(), accepted.end(), 1));
    best = best_index(portfolio);

    if (core.graph.num_vertices() < cfg.perturb_threshold) {
      rec.perturbed = parallel_perturb(g, portfolio, best, cfg, it);
      best = best_index(portfolio);
    }

    rec.best_id = best;
    rec.best_weight = portfolio[best].weight();
    rec.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
    result.trace.push_back(rec);
  }

  const std::size_t best = best_index(portfolio);
  result.best = portfolio[best].members();
  result.weight = portfolio[best].weight();
  result.best_id = best;
  for (const auto& s : portfolio) result.portfolio_weights.push_back(s.weight());
  return result;
}

std::string format_trace(const ChilsIteration& it) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "iter=%zu best=%lld best_id=%zu core_n=%zu core_m=%zu core_offset=%lld accepted=%zu perturbed=%zu "
                "elapsed_s=%.3f",
                it.iteration, static_cast<long long>(it.best_weight), it.best_id, it.core_n, it.core_m,
                static_cast<long long>(it.core_offset), it.accepted, it.perturbed, it.elapsed_s);
  return buf;
}

}  // namespace mwis
