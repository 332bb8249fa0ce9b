#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "surropt/config.hpp"
#include "surropt/engine.hpp"
#include "surropt/external.hpp"
#include "surropt/report.hpp"

namespace fs = std::filesystem;
using namespace surropt;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string checkpoint_path;
  int seed = -1;
  int workers = -1;
  bool simulate = false;
};

fs::path resolve_out_dir(const RunConfig& cfg, const CommonFlags& flags) {
  fs::path dir = flags.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(flags.out_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("SURROPT_OUT_ROOT")) dir = fs::path(root) / dir;
  }
  fs::create_directories(dir);
  return dir;
}

RunConfig load_config(const CommonFlags& flags) {
  RunConfig cfg = parse_config(flags.config_path);
  if (flags.seed >= 0) cfg.engine.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.workers >= 1) cfg.engine.workers = flags.workers;
  if (flags.simulate) cfg.engine.duration_mode = DurationMode::simulated;
  return cfg;
}

struct Problem {
  ResolvedProblem resolved;
  EngineObjective objective;
};

Problem build_problem(const RunConfig& cfg) {
  Problem problem;
  problem.resolved = resolve_problem(cfg);
  if (cfg.external) {
    problem.objective = make_external_objective(*cfg.external, problem.resolved.space);
  } else {
    problem.objective = make_benchmark_objective(*problem.resolved.benchmark, cfg.engine);
  }
  return problem;
}

void write_reports(const fs::path& dir, const std::vector<EvaluationRecord>& records) {
  std::ofstream(dir / "convergence.csv") << convergence_table(records);
  std::ofstream(dir / "scatter.csv") << scatter_table(records);
  std::ofstream(dir / "summary.txt") << summary_text(records);
}

int cmd_run(const CommonFlags& flags, bool resume_mode) {
  const RunConfig cfg = load_config(flags);
  cfg.engine.validate(resolve_problem(cfg).space.dims());
  const Problem problem = build_problem(cfg);
  const fs::path dir = resolve_out_dir(cfg, flags);

  // Echo the fully resolved configuration back to the run directory.
  std::ofstream(dir / "config.resolved.ini") << serialize_config(cfg);

  RunOptions options;
  options.log_path = (dir / "eval_log.jsonl").string();
  options.checkpoint_path = (dir / "checkpoint.json").string();

  RunResult result;
  if (resume_mode) {
    const std::string path =
        flags.checkpoint_path.empty() ? options.checkpoint_path : flags.checkpoint_path;
    std::ifstream in(path);
    if (!in) {
      std::cerr << "checkpoint '" << path << "' not found\n";
      return kExitValidation;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    result = resume(cfg.engine, problem.objective, state_from_json(buf.str()), options);
  } else {
    if (fs::exists(options.log_path)) fs::remove(options.log_path);
    result = run(cfg.engine, problem.objective, options);
  }

  write_reports(dir, result.state.completed);
  std::cout << summary_text(result.state.completed);
  std::cout << "makespan: " << result.makespan
            << (cfg.engine.duration_mode == DurationMode::simulated ? " (virtual)" : " s")
            << "\n";
  std::cout << "artifacts: " << dir.string() << "\n";
  return 0;
}

int evals_to_threshold(const std::vector<EvaluationRecord>& records, double threshold) {
  std::vector<const EvaluationRecord*> ordered;
  for (const auto& rec : records) ordered.push_back(&rec);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->completion_index < b->completion_index;
  });
  int count = 0;
  for (const auto* rec : ordered) {
    ++count;
    if (!rec->failed && rec->loss <= threshold) return count;
  }
  return static_cast<int>(ordered.size()) + 1;  // censored at budget
}

int cmd_compare(const CommonFlags& flags) {
  RunConfig cfg = load_config(flags);
  const std::size_t dims = resolve_problem(cfg).space.dims();
  cfg.engine.validate(dims);
  if (cfg.engine.max_evaluations < cfg.engine.resolved_initial_design(dims)) {
    std::cerr << "compare: budget smaller than the initial design\n";
    return kExitValidation;
  }
  const fs::path dir = resolve_out_dir(cfg, flags);

  std::vector<int> surrogate_hits, random_hits;
  std::ofstream curves(dir / "compare_curves.csv");
  curves.precision(17);
  curves << "method,seed,completion_index,best_so_far\n";

  for (int s = 0; s < cfg.compare.seeds; ++s) {
    RunConfig trial = cfg;
    trial.engine.seed = cfg.engine.seed + static_cast<std::uint64_t>(s);
    const Problem problem = build_problem(trial);
    const RunResult surrogate = run(trial.engine, problem.objective);
    const RunResult random = random_search(trial.engine, problem.objective);
    surrogate_hits.push_back(evals_to_threshold(surrogate.state.completed, cfg.compare.threshold));
    random_hits.push_back(evals_to_threshold(random.state.completed, cfg.compare.threshold));

    for (const auto* result : {&surrogate, &random}) {
      const char* method = result == &surrogate ? "surrogate" : "random";
      double best = std::numeric_limits<double>::infinity();
      for (const auto& rec : result->state.completed) {
        if (!rec.failed) best = std::min(best, rec.loss);
        curves << method << "," << trial.engine.seed << "," << rec.completion_index << ","
               << best << "\n";
      }
    }
  }

  auto median = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? static_cast<double>(v[v.size() / 2])
                        : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  const double med_s = median(surrogate_hits);
  const double med_r = median(random_hits);
  std::ostringstream summary;
  summary << "threshold: " << cfg.compare.threshold << "\n";
  summary << "seeds: " << cfg.compare.seeds << "\n";
  summary << "surrogate median evaluations-to-threshold: " << med_s << "\n";
  summary << "random median evaluations-to-threshold: " << med_r << "\n";
  summary << "ratio (surrogate / random): " << (med_r > 0 ? med_s / med_r : 0.0) << "\n";
  auto spread = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return std::pair<int, int>{v.front(), v.back()};
  };
  const auto [s_lo, s_hi] = spread(surrogate_hits);
  const auto [r_lo, r_hi] = spread(random_hits);
  summary << "surrogate range: [" << s_lo << ", " << s_hi << "]\n";
  summary << "random range: [" << r_lo << ", " << r_hi << "]\n";
  std::ofstream(dir / "compare_summary.txt") << summary.str();
  std::cout << summary.str();
  return 0;
}

int cmd_report(const std::string& log_path, const CommonFlags& flags) {
  const LogReadResult log = read_log(log_path);
  for (const auto& err : log.errors) std::cerr << log_path << ": " << err << "\n";
  fs::path dir = flags.out_dir.empty() ? fs::path(log_path).parent_path() : fs::path(flags.out_dir);
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  write_reports(dir, log.records);
  std::cout << summary_text(log.records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-based hyperparameter optimizer for integer lattices"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string log_path;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", flags.config_path, "Run configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--seed", flags.seed, "Override the config seed");
    cmd->add_option("--workers", flags.workers, "Override the worker count");
    cmd->add_flag("--simulate", flags.simulate, "Force simulated durations");
  };

  auto* run_cmd = app.add_subcommand("run", "Run the optimizer");
  add_common(run_cmd, true);
  auto* resume_cmd = app.add_subcommand("resume", "Resume from a checkpoint");
  add_common(resume_cmd, true);
  resume_cmd->add_option("--checkpoint", flags.checkpoint_path, "Checkpoint file");
  auto* compare_cmd = app.add_subcommand("compare", "Surrogate vs random-search comparison");
  add_common(compare_cmd, true);
  auto* report_cmd = app.add_subcommand("report", "Regenerate reports from an evaluation log");
  report_cmd->add_option("--log", log_path, "Evaluation log (JSONL)")->required();
  report_cmd->add_option("--out", flags.out_dir, "Output directory");
  auto* bench_cmd = app.add_subcommand("benchmarks", "List built-in benchmarks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench_cmd->parsed()) {
      for (const auto& name : benchmark_names()) std::cout << name << "\n";
      return 0;
    }
    if (run_cmd->parsed()) return cmd_run(flags, false);
    if (resume_cmd->parsed()) return cmd_run(flags, true);
    if (compare_cmd->parsed()) return cmd_compare(flags);
    if (report_cmd->parsed()) return cmd_report(log_path, flags);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
