#pragma once

#include <functional>
#include <optional>
#include <string>

#include "surropt/benchmarks.hpp"
#include "surropt/domain.hpp"
#include "surropt/sampler.hpp"
#include "surropt/surrogate.hpp"
#include "surropt/uq.hpp"

namespace surropt {

enum class SurrogateKind { rbf, rbf_ensemble, gp };
enum class DurationMode { real, simulated };

struct EngineConfig {
  SurrogateKind surrogate_kind = SurrogateKind::rbf;
  int initial_design_size = 0;  // 0 = max(10, dims + 2)
  int max_evaluations = 100;
  int workers = 1;
  UqConfig uq;
  SamplerConfig sampler;
  RegularizationConfig reg;
  GaConfig ga;
  int ensemble_members = 30;
  std::uint64_t seed = 0;
  DurationMode duration_mode = DurationMode::real;
  double sim_duration_mean = 1.0;
  double sim_duration_jitter = 0.5;  // uniform on mean * [1 - j, 1 + j]
  int trial_workers = 1;
  std::vector<HyperparameterSet> seed_points;  // optional biased initial design

  int resolved_initial_design(std::size_t dims) const;
  void validate(std::size_t dims) const;
};

// The expensive black box the engine drives. evaluate must fill point, loss,
// loss_std, interval and (optionally) regulated_loss / param_count.
struct EngineObjective {
  HyperparameterSpace space;
  std::function<EvaluationRecord(const HyperparameterSet&, std::uint64_t eval_seed)> evaluate;
};

EngineObjective make_benchmark_objective(const Benchmark& bench, const EngineConfig& cfg);

struct PendingEval {
  std::int64_t eval_id = 0;
  HyperparameterSet point;
  std::vector<std::int64_t> proposal_basis;
};

struct EngineState {
  std::vector<EvaluationRecord> completed;  // completion order
  std::vector<PendingEval> pending;
  std::int64_t next_eval_id = 1;
  std::int64_t next_completion_index = 1;
  std::size_t cycle_position = 0;
  int fallback_proposals = 0;

  // Incumbent among non-failed completions by surrogate-target value.
  std::optional<EvaluationRecord> incumbent() const;
};

struct RunOptions {
  std::string log_path;         // append-only JSONL, empty = no log
  std::string checkpoint_path;  // rewritten after every completion, empty = none
  int stop_after_completions = -1;  // emulates a crash: in-flight work is lost
  // Overrides the simulated duration draw; keyed by eval id.
  std::function<double(std::int64_t)> sim_duration_fn;
};

struct RunResult {
  EngineState state;
  double makespan = 0.0;  // virtual time in simulated mode, wall seconds otherwise
};

std::vector<HyperparameterSet> initial_design(const HyperparameterSpace& space, int count,
                                              Rng& rng);

// One surrogate proposal from the completed set; excludes completed and
// pending points. Falls back to a uniform-random unexplored point on fit
// failure (reported via fallback flag).
struct Proposal {
  HyperparameterSet point;
  bool fallback = false;
};

Proposal propose_next(const EngineConfig& cfg, const HyperparameterSpace& space,
                      const std::vector<EvaluationRecord>& completed,
                      const std::vector<PendingEval>& pending, std::size_t& cycle_position,
                      Rng& rng);

RunResult run(const EngineConfig& cfg, const EngineObjective& objective,
              const RunOptions& options = {});

RunResult resume(const EngineConfig& cfg, const EngineObjective& objective,
                 const EngineState& checkpoint, const RunOptions& options = {});

RunResult random_search(const EngineConfig& cfg, const EngineObjective& objective,
                        const RunOptions& options = {});

std::string state_to_json(const EngineState& state);
EngineState state_from_json(const std::string& text);

}  // namespace surropt
