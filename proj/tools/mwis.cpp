// mwis: command-line front end for reduction, exact and heuristic solving,
// label generation, screening and performance profiles.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mwis/chils.hpp"
#include "mwis/exact.hpp"
#include "mwis/gnn.hpp"
#include "mwis/labelgen.hpp"
#include "mwis/local_search.hpp"
#include "mwis/pipeline.hpp"
#include "mwis/profile.hpp"
#include "mwis/scheduler.hpp"

namespace fs = std::filesystem;
using namespace mwis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitVerify = 3;
constexpr std::uint64_t kDefaultSeed = 20240601;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct BudgetFlags {
  ReducerBudgets b;
  std::uint64_t vertex_time_ms = 100;

  void add(CLI::App* app) {
    app->add_option("--enumeration-limit", b.enumeration_limit, "Vertex limit for set enumeration")->capture_default_str();
    app->add_option("--oracle-nodes", b.oracle_node_budget, "Node budget per oracle call")->capture_default_str();
    app->add_option("--vertex-time-ms", vertex_time_ms, "Time cap per oracle call")->capture_default_str();
    app->add_option("--global-fraction", b.global_rule_fraction, "Screening gate for global rules")->capture_default_str();
    app->add_option("--cut-limit", b.cut_component_limit, "Component size limit for the cut vertex rule")
        ->capture_default_str();
  }
  ReducerBudgets get() const {
    ReducerBudgets out = b;
    out.per_vertex_time = std::chrono::milliseconds(vertex_time_ms);
    return out;
  }
};

ScreeningConfig screening_config(const std::string& mode, const std::string& models_dir, bool oracle_models,
                                 const ReducerBudgets& budgets) {
  ScreeningConfig cfg;
  try {
    cfg.mode = mode_from_name(mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& info : rule_table()) {
    if (!info.expensive) continue;
    auto& slot = cfg.models[static_cast<std::size_t>(info.id)];
    if (oracle_models) {
      slot = std::make_shared<LabelOracleScorer>(info.id, budgets);
    } else if (!models_dir.empty()) {
      const fs::path file = fs::path(models_dir) / (std::string(info.name) + ".json");
      if (fs::exists(file)) slot = std::make_shared<GnnScorer>(load_model(file.string()));
    }
  }
  return cfg;
}

std::optional<ScreeningConfig> optional_reduce(const std::string& mode, const ReducerBudgets& budgets) {
  if (mode.empty()) return std::nullopt;
  return screening_config(mode, "", false, budgets);
}

void report(const PipelineResult& r, const std::string& out_path) {
  std::cout << "weight " << r.weight << "\n";
  std::cout << "size " << r.solution.size() << "\n";
  if (r.reduce_stats) {
    std::cout << "kernel_n " << r.kernel_n << "\nkernel_m " << r.kernel_m << "\noffset " << r.offset << "\n";
  }
  if (!out_path.empty()) write_file(out_path, write_solution(r.solution));
}

int run(int argc, char** argv) {
  CLI::App app{"Maximum weight independent set toolkit"};
  app.require_subcommand(1);
  std::function<void()> action;

  // reduce
  {
    auto* cmd = app.add_subcommand("reduce", "Reduce a graph to a kernel");
    static std::string graph, mode = "never", models, kernel_out, trace_out, stats_out;
    static bool oracle = false, no_sweep = false;
    static BudgetFlags budgets;
    cmd->add_option("graph", graph, "Input graph")->required();
    cmd->add_option("--mode", mode, "no-gnn, never, always, initial or initial-tight")->capture_default_str();
    cmd->add_option("--models", models, "Directory with <rule>.json model files");
    cmd->add_flag("--oracle-models", oracle, "Screen with the exact label oracle instead of models");
    cmd->add_flag("--no-sweep", no_sweep, "Stop when the change queues drain, without a final full sweep");
    cmd->add_option("-o,--kernel", kernel_out, "Write the kernel graph");
    cmd->add_option("-l,--trace", trace_out, "Write the reduction trace");
    cmd->add_option("-s,--stats", stats_out, "Write per-rule statistics");
    budgets.add(cmd);
    cmd->callback([&] {
      action = [&] {
        const auto g = read_graph_file(graph);
        const auto b = budgets.get();
        auto cfg = screening_config(mode, models, oracle, b);
        cfg.closure_sweep = !no_sweep;
        DynamicGraph dg(g);
        auto result = run_reduce(dg, cfg, b);
        const StaticGraph kernel = dg.snapshot();
        const auto& s = result.stats;
        std::cout << "n " << s.input_n << "\nm " << s.input_m << "\nkernel_n " << s.kernel_n << "\nkernel_m "
                  << s.kernel_m << "\noffset " << s.offset << "\ntime_ms " << s.time_ms << "\n";
        if (!kernel_out.empty()) write_file(kernel_out, write_graph(kernel));
        if (!trace_out.empty()) write_file(trace_out, result.log.trace());
        if (!stats_out.empty()) write_file(stats_out, s.format());
      };
    });
  }

  // solve-exact
  {
    auto* cmd = app.add_subcommand("solve-exact", "Solve exactly by branch and bound");
    static std::string graph, reduce, out;
    static std::uint64_t nodes = 100'000'000;
    static double time_cap = 0;
    static BudgetFlags budgets;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("--node-budget", nodes, "Branch-and-bound node budget")->capture_default_str();
    cmd->add_option("--time-cap", time_cap, "Seconds; 0 means none");
    cmd->add_option("--reduce", reduce, "Reduce first with this screening mode");
    cmd->add_option("-o,--output", out, "Write the solution");
    budgets.add(cmd);
    cmd->callback([&] {
      action = [&] {
        const auto g = read_graph_file(graph);
        Budget budget;
        budget.node_budget = nodes;
        if (time_cap > 0)
          budget.time_cap = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(time_cap));
        bool optimal = true;
        std::uint64_t used = 0;
        auto r = pipeline_solve(g, optional_reduce(reduce, budgets.get()), budgets.get(), [&](const StaticGraph& k) {
          auto e = solve_exact(k, budget);
          optimal = e.optimal();
          used = e.nodes;
          return e.set;
        });
        report(r, out);
        std::cout << "optimal " << (optimal ? "yes" : "no") << "\nnodes " << used << "\n";
      };
    });
  }

  // baseline
  {
    auto* cmd = app.add_subcommand("baseline", "Iterated local search");
    static std::string graph, warm, reduce, out;
    static std::uint64_t seed = kDefaultSeed, iters = 0;
    static std::size_t mq = 32;
    static double time_s = 0;
    static BudgetFlags budgets;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("--seed", seed)->capture_default_str();
    cmd->add_option("--mq", mq, "Maximum perturbation queue size")->capture_default_str()->check(CLI::PositiveNumber);
    auto* t = cmd->add_option("--time", time_s, "Wall-time budget in seconds");
    auto* k = cmd->add_option("--iters", iters, "Iteration budget");
    t->excludes(k);
    cmd->add_option("--warm", warm, "Initial solution file");
    cmd->add_option("--reduce", reduce, "Reduce first with this screening mode");
    cmd->add_option("-o,--output", out, "Write the solution");
    budgets.add(cmd);
    cmd->callback([&] {
      action = [&] {
        if (!warm.empty() && !reduce.empty()) throw UsageError("--warm cannot be combined with --reduce");
        if (time_s <= 0 && iters == 0) iters = 100'000;
        const auto g = read_graph_file(graph);
        std::optional<Solution> initial;
        std::vector<VertexId> warm_set;
        if (!warm.empty()) {
          warm_set = read_solution_file(warm, g.num_vertices());
          if (!g.is_independent(warm_set)) throw InputError(warm + ": warm start is not independent");
        }
        auto r = pipeline_solve(g, optional_reduce(reduce, budgets.get()), budgets.get(), [&](const StaticGraph& k) {
          BaselineConfig cfg;
          cfg.mq = mq;
          cfg.seed = seed;
          if (iters) cfg.iterations = iters;
          if (time_s > 0) cfg.time_limit = std::chrono::duration<double>(time_s);
          std::optional<Solution> init;
          if (!warm_set.empty()) init.emplace(k, warm_set);
          return run_baseline(k, init, cfg).members();
        });
        report(r, out);
      };
    });
  }

  // chils
  {
    auto* cmd = app.add_subcommand("chils", "Concurrent difference-core heuristic");
    static std::string graph, warm, reduce, out, trace;
    static ChilsConfig cfg;
    static double tg = 10, tc = 10, total = 60;
    static std::vector<std::uint64_t> det;
    static BudgetFlags budgets;
    cfg.seed = kDefaultSeed;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("-p,--portfolio", cfg.portfolio, "Number of solutions P")->capture_default_str();
    cmd->add_option("--tg", tg, "Seconds per full-graph run")->capture_default_str();
    cmd->add_option("--tc", tc, "Seconds per core run")->capture_default_str();
    cmd->add_option("--time", total, "Overall seconds")->capture_default_str();
    cmd->add_option("--mq", cfg.mq_base, "Queue size base; solution i uses base + 4i")->capture_default_str();
    cmd->add_option("--seed", cfg.seed)->capture_default_str();
    cmd->add_option("--threads", cfg.threads)->capture_default_str();
    cmd->add_option("--perturb-threshold", cfg.perturb_threshold)->capture_default_str();
    cmd->add_option("--deterministic", det, "LS_ITERS CHILS_ITERS")->expected(2);
    cmd->add_flag("--verify", cfg.verify, "Re-check every accepted core solution");
    cmd->add_option("--warm", warm, "Initial solution file");
    cmd->add_option("--reduce", reduce, "Reduce first with this screening mode");
    cmd->add_option("-o,--output", out, "Write the solution");
    cmd->add_option("--trace", trace, "Write the per-iteration trace");
    budgets.add(cmd);
    cmd->callback([&] {
      action = [&] {
        if (!warm.empty() && !reduce.empty()) throw UsageError("--warm cannot be combined with --reduce");
        cfg.t_global = std::chrono::duration<double>(tg);
        cfg.t_core = std::chrono::duration<double>(tc);
        cfg.time_limit = std::chrono::duration<double>(total);
        if (!det.empty()) cfg.deterministic = ChilsConfig::Deterministic{det[0], static_cast<std::size_t>(det[1])};
        try {
          cfg.validate();
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        const auto g = read_graph_file(graph);
        std::vector<VertexId> warm_set;
        if (!warm.empty()) {
          warm_set = read_solution_file(warm, g.num_vertices());
          if (!g.is_independent(warm_set)) throw InputError(warm + ": warm start is not independent");
        }
        std::string trace_text;
        std::uint64_t failures = 0;
        auto r = pipeline_solve(g, optional_reduce(reduce, budgets.get()), budgets.get(), [&](const StaticGraph& k) {
          std::optional<Solution> init;
          if (!warm.empty()) init.emplace(k, warm_set);
          auto res = run_chils(k, cfg, init);
          for (const auto& it : res.trace) trace_text += format_trace(it) + "\n";
          failures = res.lift_failures;
          return res.best;
        });
        std::cout << trace_text;
        report(r, out);
        if (!trace.empty()) write_file(trace, trace_text);
        if (failures) throw VerificationError(std::to_string(failures) + " core solutions failed the lift check");
      };
    });
  }

  // labels
  {
    auto* cmd = app.add_subcommand("labels", "Generate training labels for one rule");
    static std::string graph, rule, out, graph_out, split_out, name;
    static bool after_cheap = false;
    static std::uint64_t split_seed = kDefaultSeed;
    static BudgetFlags budgets;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("--rule", rule, "Rule token, e.g. heavy_set")->required();
    cmd->add_flag("--after-cheap", after_cheap, "Label the kernel left by the cheap rules");
    cmd->add_option("--graph-out", graph_out, "Write the labelled graph (the kernel with --after-cheap)");
    cmd->add_option("-o,--output", out, "Labels CSV")->required();
    cmd->add_option("--split-out", split_out, "Write a train/val/test vertex split CSV");
    cmd->add_option("--split-seed", split_seed)->capture_default_str();
    cmd->add_option("--name", name, "Graph name in the CSV (default: file stem)");
    budgets.add(cmd);
    cmd->callback([&] {
      action = [&] {
        RuleId id;
        try {
          id = rule_from_name(rule);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        StaticGraph g = read_graph_file(graph);
        const auto b = budgets.get();
        if (after_cheap) {
          DynamicGraph dg(g);
          ScreeningConfig cheap;
          cheap.mode = ScreeningMode::NoGnnRed;
          run_reduce(dg, cheap, b);
          g = dg.snapshot();
        }
        if (name.empty()) name = fs::path(graph).stem().string();
        auto records = generate_labels(g, id, b);
        write_file(out, labels_to_csv(records, name));
        if (!graph_out.empty()) write_file(graph_out, write_graph(g));
        if (!split_out.empty()) write_file(split_out, split_to_csv(split_vertices(g.num_vertices(), split_seed), name));
        std::size_t counts[3] = {0, 0, 0};
        for (const auto& r : records) ++counts[r.label];
        std::cout << "vertices " << records.size() << "\nlabel0 " << counts[0] << "\nlabel1 " << counts[1]
                  << "\nlabel2 " << counts[2] << "\n";
      };
    });
  }

  // screen
  {
    auto* cmd = app.add_subcommand("screen", "Print the vertices a model suggests");
    static std::string graph, model;
    static bool scores = false;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("--model", model, "Model file")->required();
    cmd->add_flag("--scores", scores, "Print every vertex with its score");
    cmd->callback([&] {
      action = [&] {
        const auto g = read_graph_file(graph);
        GnnScorer scorer(load_model(model));
        if (scores) {
          auto s = scorer.score(g);
          std::cout.precision(9);
          for (VertexId v = 0; v < s.size(); ++v) std::cout << v + 1 << " " << s[v] << "\n";
        } else {
          for (VertexId v : screen(scorer, g)) std::cout << v + 1 << "\n";
        }
      };
    });
  }

  // profile
  {
    auto* cmd = app.add_subcommand("profile", "Performance profiles from run records");
    static std::string records, kind = "quality", out;
    static std::vector<double> at;
    cmd->add_option("records", records, "CSV: instance,algorithm,weight,time_s")->required();
    cmd->add_option("--kind", kind, "quality or time")->check(CLI::IsMember({"quality", "time"}))->capture_default_str();
    cmd->add_option("--at", at, "Print the fraction of every algorithm at these tau values instead");
    cmd->add_option("-o,--output", out, "Write the curves instead of printing");
    cmd->callback([&] {
      action = [&] {
        const auto k = kind == "quality" ? ProfileKind::Quality : ProfileKind::Time;
        std::vector<RunRecord> r;
        try {
          r = parse_records(read_file(records));
        } catch (const std::invalid_argument& e) {
          throw InputError(records + ": " + e.what());
        }
        try {
          const auto curves = perf_profile(r, k);
          if (!at.empty()) {
            for (const auto& c : curves)
              for (double tau : at) std::cout << c.algorithm << "," << tau << "," << profile_fraction(r, k, c.algorithm, tau) << "\n";
            return;
          }
          const auto text = profiles_to_csv(curves);
          if (out.empty())
            std::cout << text;
          else
            write_file(out, text);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        }
      };
    });
  }

  // verify
  {
    auto* cmd = app.add_subcommand("verify", "Check a solution file against a graph");
    static std::string graph, solution;
    static std::optional<Weight> expected;
    cmd->add_option("graph", graph)->required();
    cmd->add_option("solution", solution)->required();
    cmd->add_option("--weight", expected, "Fail unless the solution has this weight");
    cmd->callback([&] {
      action = [&] {
        const auto g = read_graph_file(graph);
        const auto set = read_solution_file(solution, g.num_vertices());
        const Weight w = g.set_weight(set);
        verify_solution(g, set, expected.value_or(w));
        std::cout << "ok\nweight " << w << "\nsize " << set.size() << "\n";
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerify;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
