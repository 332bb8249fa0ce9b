#include "surropt/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <queue>
#include <thread>

#include "json.hpp"

namespace surropt {

namespace {

std::uint64_t mix(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSaltInitial = 1;
constexpr std::uint64_t kSaltProposal = 2000;
constexpr std::uint64_t kSaltDuration = 3000;
constexpr std::uint64_t kSaltEval = 4000;
constexpr std::uint64_t kSaltRandom = 5000;

}  // namespace

int EngineConfig::resolved_initial_design(std::size_t dims) const {
  if (initial_design_size > 0) return initial_design_size;
  return std::max<int>(10, static_cast<int>(dims) + 2);
}

void EngineConfig::validate(std::size_t dims) const {
  const int n0 = resolved_initial_design(dims);
  if (n0 < static_cast<int>(dims) + 1) {
    throw std::invalid_argument("engine: initial design must have at least dims+1 points");
  }
  if (max_evaluations <= n0) {
    throw std::invalid_argument("engine: max_evaluations must exceed the initial design size");
  }
  if (workers < 1) throw std::invalid_argument("engine: workers must be >= 1");
  uq.validate();
  sampler.validate();
}

std::optional<EvaluationRecord> EngineState::incumbent() const {
  std::optional<EvaluationRecord> best;
  for (const auto& rec : completed) {
    if (rec.failed) continue;
    if (!best || rec.surrogate_value() < best->surrogate_value()) best = rec;
  }
  return best;
}

EngineObjective make_benchmark_objective(const Benchmark& bench, const EngineConfig& cfg) {
  EngineObjective obj;
  obj.space = bench.space;
  if (bench.kind == BenchmarkKind::analytic) {
    obj.evaluate = [&bench](const HyperparameterSet& point, std::uint64_t eval_seed) {
      EvaluationRecord rec;
      rec.point = point;
      double value = bench.true_value(point);
      if (bench.noise_sigma > 0.0) {
        Rng rng(eval_seed);
        std::normal_distribution<double> noise(0.0, bench.noise_sigma);
        value += noise(rng);
      }
      rec.loss = value;
      rec.loss_std = bench.noise_sigma;
      rec.interval = ConfidenceInterval{value, bench.noise_sigma};
      rec.trial_count = 1;
      rec.dropout_passes = 0;
      return rec;
    };
  } else {
    const UqConfig uq = cfg.uq;
    const RegularizationConfig reg = cfg.reg;
    const int trial_workers = cfg.trial_workers;
    obj.evaluate = [&bench, uq, reg, trial_workers](const HyperparameterSet& point,
                                                    std::uint64_t eval_seed) {
      TrainerWiring wiring = bench.wiring_for(bench, point);
      wiring.trial_workers = trial_workers;
      return quantify(point, uq, reg, wiring, eval_seed).record;
    };
  }
  return obj;
}

std::vector<HyperparameterSet> initial_design(const HyperparameterSpace& space, int count,
                                              Rng& rng) {
  const auto size = space.lattice_size();
  if (size && count > *size) {
    throw std::invalid_argument("initial design larger than the lattice");
  }
  EvaluatedSet seen;
  std::vector<HyperparameterSet> design;
  design.reserve(count);
  while (static_cast<int>(design.size()) < count) {
    HyperparameterSet p = random_point(space, rng);
    if (seen.insert(p).second) design.push_back(std::move(p));
  }
  return design;
}

namespace {

std::optional<HyperparameterSet> random_unexplored(const HyperparameterSpace& space,
                                                   const EvaluatedSet& excluded, Rng& rng) {
  for (int attempt = 0; attempt < 2000; ++attempt) {
    HyperparameterSet p = random_point(space, rng);
    if (!excluded.contains(p)) return p;
  }
  return std::nullopt;
}

}  // namespace

Proposal propose_next(const EngineConfig& cfg, const HyperparameterSpace& space,
                      const std::vector<EvaluationRecord>& completed,
                      const std::vector<PendingEval>& pending, std::size_t& cycle_position,
                      Rng& rng) {
  EvaluatedSet excluded;
  std::vector<HyperparameterSet> eval_points;
  std::vector<double> values;
  std::vector<ConfidenceInterval> intervals;
  for (const auto& rec : completed) {
    excluded.insert(rec.point);
    eval_points.push_back(rec.point);
    values.push_back(rec.surrogate_value());
    intervals.push_back(rec.interval);
  }
  for (const auto& p : pending) excluded.insert(p.point);

  auto fallback = [&]() -> Proposal {
    auto p = random_unexplored(space, excluded, rng);
    if (!p) throw SpaceExhausted();
    return Proposal{std::move(*p), true};
  };

  const auto best = [&]() {
    std::size_t bi = 0;
    for (std::size_t i = 1; i < completed.size(); ++i) {
      if (completed[i].failed) continue;
      if (completed[bi].failed ||
          completed[i].surrogate_value() < completed[bi].surrogate_value()) {
        bi = i;
      }
    }
    return bi;
  }();

  try {
    if (cfg.surrogate_kind == SurrogateKind::gp) {
      const GpModel model = gp_fit(eval_points, values);
      const double incumbent = completed[best].surrogate_value();
      auto acquisition = [&](const HyperparameterSet& p) {
        if (excluded.contains(p)) return -1e18;
        return expected_improvement(model, p, incumbent);
      };
      HyperparameterSet point = ga_maximize(acquisition, space, cfg.ga, rng);
      if (excluded.contains(point)) return fallback();
      return Proposal{std::move(point), false};
    }

    std::vector<HyperparameterSet> candidates =
        generate_candidates(space, completed[best].point, excluded, cfg.sampler, rng);

    std::vector<HyperparameterSet> kept;
    std::vector<double> dists;
    for (auto& cand : candidates) {
      const double d = distance_to_evaluated(cand, eval_points);
      if (d >= cfg.sampler.min_distance) {
        kept.push_back(std::move(cand));
        dists.push_back(d);
      }
    }
    if (kept.empty()) return fallback();

    WeightCycleState cycle{cycle_position};
    const double w = next_weight(cfg.sampler, cycle);
    cycle_position = cycle.position;

    std::vector<double> totals;
    if (cfg.surrogate_kind == SurrogateKind::rbf) {
      const RbfModel model = rbf_fit(eval_points, values);
      std::vector<double> preds(kept.size());
      for (std::size_t i = 0; i < kept.size(); ++i) preds[i] = rbf_predict(model, kept[i]);
      totals = score_weighted(preds, dists, w);
    } else {
      const RbfEnsemble ensemble =
          rbf_ensemble_fit(eval_points, intervals, cfg.ensemble_members, rng);
      std::vector<double> mu(kept.size()), sigma(kept.size());
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const EnsembleStats stats = rbf_ensemble_stats(ensemble, kept[i]);
        mu[i] = stats.mu;
        sigma[i] = stats.sigma;
      }
      totals = score_ensemble(mu, sigma, dists, cfg.sampler.alpha, w);
    }
    const std::size_t winner = select_candidate(totals, dists);
    return Proposal{kept[winner], false};
  } catch (const SpaceExhausted&) {
    throw;
  } catch (const FitError&) {
    return fallback();
  }
}

namespace {

class Coordinator {
 public:
  Coordinator(const EngineConfig& cfg, const EngineObjective& objective,
              const RunOptions& opts, bool random_mode)
      : cfg_(cfg), objective_(objective), opts_(opts), random_mode_(random_mode) {
    objective_.space.validate();
    if (!random_mode_) cfg_.validate(objective_.space.dims());
    n0_ = random_mode_ ? 0 : cfg_.resolved_initial_design(objective_.space.dims());
    if (!random_mode_) build_initial_list();
    if (!opts_.log_path.empty()) {
      log_.open(opts_.log_path, std::ios::app);
      if (!log_) throw std::runtime_error("cannot open evaluation log '" + opts_.log_path + "'");
    }
  }

  void restore(const EngineState& checkpoint) {
    state_ = checkpoint;
    for (const auto& rec : state_.completed) {
      if (rec.eval_id <= n0_) ++completed_initial_;
    }
  }

  RunResult run() {
    if (cfg_.duration_mode == DurationMode::simulated) return run_simulated();
    return run_real();
  }

 private:
  void build_initial_list() {
    EvaluatedSet seen;
    for (const auto& p : cfg_.seed_points) {
      if (!validate_point(objective_.space, p)) {
        throw std::invalid_argument("seed point outside the search space");
      }
      if (seen.insert(p).second) initial_list_.push_back(p);
    }
    if (static_cast<int>(initial_list_.size()) > n0_) {
      throw std::invalid_argument("more seed points than the initial design size");
    }
    Rng rng(mix(cfg_.seed, kSaltInitial));
    while (static_cast<int>(initial_list_.size()) < n0_) {
      HyperparameterSet p = random_point(objective_.space, rng);
      if (seen.insert(p).second) initial_list_.push_back(std::move(p));
    }
  }

  std::int64_t issued() const { return state_.next_eval_id - 1; }

  std::optional<PendingEval> next_dispatch() {
    if (issued() >= cfg_.max_evaluations) return std::nullopt;
    PendingEval eval;
    eval.eval_id = state_.next_eval_id;
    if (random_mode_) {
      EvaluatedSet excluded;
      for (const auto& rec : state_.completed) excluded.insert(rec.point);
      for (const auto& p : state_.pending) excluded.insert(p.point);
      Rng rng(mix(cfg_.seed, kSaltRandom + static_cast<std::uint64_t>(eval.eval_id)));
      auto p = random_unexplored(objective_.space, excluded, rng);
      if (!p) return std::nullopt;
      eval.point = std::move(*p);
    } else if (issued() < n0_) {
      eval.point = initial_list_[issued()];
    } else {
      if (completed_initial_ < n0_) return std::nullopt;  // initial-design barrier
      Rng rng(mix(cfg_.seed, kSaltProposal + static_cast<std::uint64_t>(eval.eval_id)));
      Proposal prop;
      try {
        prop = propose_next(cfg_, objective_.space, state_.completed, state_.pending,
                            state_.cycle_position, rng);
      } catch (const SpaceExhausted&) {
        return std::nullopt;
      }
      if (prop.fallback) ++state_.fallback_proposals;
      eval.point = std::move(prop.point);
      for (const auto& rec : state_.completed) eval.proposal_basis.push_back(rec.eval_id);
      std::sort(eval.proposal_basis.begin(), eval.proposal_basis.end());
    }
    ++state_.next_eval_id;
    state_.pending.push_back(eval);
    return eval;
  }

  EvaluationRecord execute(const PendingEval& eval) {
    EvaluationRecord rec;
    try {
      rec = objective_.evaluate(eval.point,
                                mix(cfg_.seed, kSaltEval + static_cast<std::uint64_t>(eval.eval_id)));
    } catch (const std::exception&) {
      rec.point = eval.point;
      rec.failed = true;
      rec.loss = kFailedLossSentinel;
      rec.interval = ConfidenceInterval{kFailedLossSentinel, 0.0};
    }
    rec.eval_id = eval.eval_id;
    rec.proposal_basis = eval.proposal_basis;
    return rec;
  }

  void complete(EvaluationRecord rec) {
    rec.completion_index = state_.next_completion_index++;
    std::erase_if(state_.pending,
                  [&](const PendingEval& p) { return p.eval_id == rec.eval_id; });
    if (rec.eval_id <= n0_ && !random_mode_) ++completed_initial_;
    if (log_.is_open()) {
      log_ << record_to_json(rec) << '\n';
      log_.flush();
    }
    state_.completed.push_back(std::move(rec));
    if (!opts_.checkpoint_path.empty()) {
      std::ofstream out(opts_.checkpoint_path, std::ios::trunc);
      out << state_to_json(state_) << '\n';
    }
  }

  bool reached_stop() const {
    return opts_.stop_after_completions >= 0 &&
           static_cast<int>(state_.completed.size()) >= opts_.stop_after_completions;
  }

  double duration_for(std::int64_t eval_id) {
    if (opts_.sim_duration_fn) return opts_.sim_duration_fn(eval_id);
    Rng rng(mix(cfg_.seed, kSaltDuration + static_cast<std::uint64_t>(eval_id)));
    const double j = std::clamp(cfg_.sim_duration_jitter, 0.0, 1.0);
    std::uniform_real_distribution<double> dist(cfg_.sim_duration_mean * (1.0 - j),
                                                cfg_.sim_duration_mean * (1.0 + j));
    return dist(rng);
  }

  RunResult run_simulated() {
    struct InFlight {
      std::int64_t eval_id;
      double finish;
      PendingEval eval;
    };
    double clock = 0.0;
    std::vector<InFlight> inflight;

    auto fill = [&]() {
      while (static_cast<int>(inflight.size()) < cfg_.workers) {
        auto eval = next_dispatch();
        if (!eval) break;
        const double d = duration_for(eval->eval_id);
        inflight.push_back(InFlight{eval->eval_id, clock + d, std::move(*eval)});
      }
    };

    // Re-dispatch work that was in flight at checkpoint time.
    for (const auto& eval : state_.pending) {
      inflight.push_back(InFlight{eval.eval_id, clock + duration_for(eval.eval_id), eval});
    }
    fill();

    while (!inflight.empty()) {
      auto next = std::min_element(inflight.begin(), inflight.end(),
                                   [](const InFlight& a, const InFlight& b) {
                                     return std::tie(a.finish, a.eval_id) <
                                            std::tie(b.finish, b.eval_id);
                                   });
      clock = next->finish;
      EvaluationRecord rec = execute(next->eval);
      rec.wall_time = duration_for(next->eval_id);
      inflight.erase(next);
      complete(std::move(rec));
      if (reached_stop()) break;
      fill();
    }
    return RunResult{std::move(state_), clock};
  }

  RunResult run_real() {
    struct Result {
      EvaluationRecord record;
    };
    std::mutex m;
    std::condition_variable cv;
    std::queue<Result> results;
    std::vector<std::thread> threads;
    int inflight = 0;

    auto launch = [&](PendingEval eval) {
      ++inflight;
      threads.emplace_back([this, eval = std::move(eval), &m, &cv, &results]() {
        const auto start = std::chrono::steady_clock::now();
        EvaluationRecord rec = execute(eval);
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        {
          std::lock_guard<std::mutex> lock(m);
          results.push(Result{std::move(rec)});
        }
        cv.notify_one();
      });
    };

    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& eval : state_.pending) launch(eval);
    auto fill = [&]() {
      while (inflight < cfg_.workers) {
        auto eval = next_dispatch();
        if (!eval) break;
        launch(std::move(*eval));
      }
    };
    fill();

    bool stopped = false;
    while (inflight > 0 && !stopped) {
      Result res;
      {
        std::unique_lock<std::mutex> lock(m);
        cv.wait(lock, [&] { return !results.empty(); });
        res = std::move(results.front());
        results.pop();
      }
      --inflight;
      complete(std::move(res.record));
      if (reached_stop()) {
        stopped = true;
        break;
      }
      fill();
    }

    for (auto& t : threads) t.join();
    const double makespan =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return RunResult{std::move(state_), makespan};
  }

  EngineConfig cfg_;
  EngineObjective objective_;
  RunOptions opts_;
  bool random_mode_;
  int n0_ = 0;
  int completed_initial_ = 0;
  std::vector<HyperparameterSet> initial_list_;
  EngineState state_;
  std::ofstream log_;
};

}  // namespace

RunResult run(const EngineConfig& cfg, const EngineObjective& objective,
              const RunOptions& options) {
  Coordinator coordinator(cfg, objective, options, /*random_mode=*/false);
  return coordinator.run();
}

RunResult resume(const EngineConfig& cfg, const EngineObjective& objective,
                 const EngineState& checkpoint, const RunOptions& options) {
  Coordinator coordinator(cfg, objective, options, /*random_mode=*/false);
  coordinator.restore(checkpoint);
  return coordinator.run();
}

RunResult random_search(const EngineConfig& cfg, const EngineObjective& objective,
                        const RunOptions& options) {
  Coordinator coordinator(cfg, objective, options, /*random_mode=*/true);
  return coordinator.run();
}

std::string state_to_json(const EngineState& state) {
  nlohmann::json j;
  j["completed"] = nlohmann::json::array();
  for (const auto& rec : state.completed) {
    j["completed"].push_back(nlohmann::json::parse(record_to_json(rec)));
  }
  j["pending"] = nlohmann::json::array();
  for (const auto& p : state.pending) {
    j["pending"].push_back({{"eval_id", p.eval_id},
                            {"point", p.point.values},
                            {"proposal_basis", p.proposal_basis}});
  }
  j["next_eval_id"] = state.next_eval_id;
  j["next_completion_index"] = state.next_completion_index;
  j["cycle_position"] = state.cycle_position;
  j["fallback_proposals"] = state.fallback_proposals;
  return j.dump();
}

EngineState state_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  EngineState state;
  for (const auto& item : j.at("completed")) {
    state.completed.push_back(record_from_json(item.dump()));
  }
  for (const auto& item : j.at("pending")) {
    PendingEval p;
    p.eval_id = item.at("eval_id").get<std::int64_t>();
    p.point.values = item.at("point").get<std::vector<std::int64_t>>();
    p.proposal_basis = item.at("proposal_basis").get<std::vector<std::int64_t>>();
    state.pending.push_back(std::move(p));
  }
  state.next_eval_id = j.at("next_eval_id").get<std::int64_t>();
  state.next_completion_index = j.at("next_completion_index").get<std::int64_t>();
  state.cycle_position = j.at("cycle_position").get<std::size_t>();
  state.fallback_proposals = j.value("fallback_proposals", 0);
  return state;
}

}  // namespace surropt
