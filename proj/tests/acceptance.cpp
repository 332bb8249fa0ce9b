// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses independent oracles
// (naive loops, exhaustive enumeration, numerical integration) rather than
// the library's own formulas.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "surropt/engine.hpp"
#include "surropt/report.hpp"
#include "surropt/surrogate.hpp"

namespace fs = std::filesystem;
using namespace surropt;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, double seconds, const std::string& detail = "") {
  std::printf("[%s] %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), seconds,
              detail.empty() ? "" : " ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct Timer {
  Clock::time_point start = Clock::now();
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

std::vector<HyperparameterSet> distinct_centers(int n, int dims, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> coord(-20, 20);
  std::set<std::vector<std::int64_t>> seen;
  std::vector<HyperparameterSet> centers;
  while (static_cast<int>(centers.size()) < n) {
    HyperparameterSet p;
    for (int k = 0; k < dims; ++k) p.values.push_back(coord(rng));
    if (seen.insert(p.values).second) centers.push_back(std::move(p));
  }
  return centers;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// 1. RBF exactness on random integer instances plus affine reproduction.
void criterion_rbf_exactness() {
  Timer timer;
  bool ok = true;
  Rng rng(101);
  std::uniform_real_distribution<double> uv(-10.0, 10.0);

  for (int inst = 0; inst < 200 && ok; ++inst) {
    const int dims = 1 + inst % 4;
    std::uniform_int_distribution<int> un(dims + 1, 30);
    const int n = un(rng);
    const auto centers = distinct_centers(n, dims, rng);

    const bool affine_case = inst % 2 == 1;
    std::vector<double> coeff(dims);
    double intercept = uv(rng);
    for (double& c : coeff) c = uv(rng);

    std::vector<double> values(n);
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      if (affine_case) {
        values[i] = intercept;
        for (int k = 0; k < dims; ++k) {
          values[i] += coeff[k] * static_cast<double>(centers[i].values[k]);
        }
      } else {
        values[i] = uv(rng);
      }
      scale = std::max(scale, std::abs(values[i]));
    }

    RbfModel model;
    try {
      model = rbf_fit(centers, values);
    } catch (const FitError&) {
      ok = false;
      break;
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(rbf_predict(model, centers[i]) - values[i]) > 1e-8 * scale) ok = false;
    }
    if (affine_case) {
      for (const double l : model.lambdas) {
        if (std::abs(l) > 1e-8) ok = false;
      }
    }
  }
  const double t = timer.elapsed();
  report("1 rbf-exactness", ok && t < 10.0, t);
}

// ---------------------------------------------------------------------------
// 2. Inverted-dropout scaling: exhaustive-mask expectation equals the plain
// forward pass for single-hidden-layer nets (linear past dropout).
void criterion_dropout_scaling() {
  Timer timer;
  bool ok = true;
  Rng rng(202);
  std::uniform_real_distribution<double> uw(-1.5, 1.5);
  std::uniform_real_distribution<double> up(0.05, 0.85);

  for (int inst = 0; inst < 20 && ok; ++inst) {
    MlpArchitecture arch;
    arch.input_dim = 1 + inst % 3;
    arch.hidden_layers = 1;
    arch.nodes_per_layer = 2 + inst % 11;  // up to 12 hidden nodes
    arch.output_dim = 1;
    arch.activation = inst % 2 ? Activation::tanh : Activation::relu;
    const double p = up(rng);
    arch.dropout_prob = p;

    ModelWeights w = init_weights(arch, 1000 + inst);
    for (auto& layer : w.weights) {
      for (double& v : layer) v = uw(rng);
    }
    for (auto& layer : w.biases) {
      for (double& v : layer) v = uw(rng);
    }

    std::vector<double> x(arch.input_dim);
    for (double& v : x) v = uw(rng);

    // Oracle: naive network math, every mask enumerated with its probability.
    const int h = arch.nodes_per_layer;
    std::vector<double> hidden(h);
    for (int j = 0; j < h; ++j) {
      double pre = w.biases[0][j];
      for (int i = 0; i < arch.input_dim; ++i) pre += w.weights[0][j * arch.input_dim + i] * x[i];
      hidden[j] = arch.activation == Activation::relu ? std::max(0.0, pre) : std::tanh(pre);
    }
    double expectation = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << h); ++mask) {
      double prob = 1.0;
      double out = w.biases[1][0];
      for (int j = 0; j < h; ++j) {
        const bool kept = mask & (1u << j);
        prob *= kept ? (1.0 - p) : p;
        if (kept) out += w.weights[1][j] * hidden[j] / (1.0 - p);
      }
      expectation += prob * out;
    }

    const double plain = forward(arch, w, x)[0];
    if (std::abs(expectation - plain) > 1e-10) ok = false;

    // Every sampled dropout output must coincide with some enumerated mask.
    Rng drop_rng(inst);
    for (int s = 0; s < 50 && ok; ++s) {
      const double y = forward_dropout(arch, w, x, p, drop_rng)[0];
      bool found = false;
      for (std::uint32_t mask = 0; mask < (1u << h) && !found; ++mask) {
        double out = w.biases[1][0];
        for (int j = 0; j < h; ++j) {
          if (mask & (1u << j)) out += w.weights[1][j] * hidden[j] / (1.0 - p);
        }
        if (std::abs(out - y) < 1e-9) found = true;
      }
      if (!found) ok = false;
    }
  }
  const double t = timer.elapsed();
  report("2 dropout-scaling", ok && t < 5.0, t);
}

// ---------------------------------------------------------------------------
// 3. UQ identities against naive double-loop oracles; loss-sample counting.
void criterion_uq_identities() {
  Timer timer;
  bool ok = true;
  Rng rng(303);
  std::uniform_real_distribution<double> uv(-2.0, 2.0);
  std::uniform_real_distribution<double> uwt(0.1, 0.9);

  for (int inst = 0; inst < 100 && ok; ++inst) {
    const int n = 1 + inst % 5;
    const int t = 1 + inst % 7;
    const int dim = 1 + inst % 3;
    UqConfig cfg;
    cfg.trials = n;
    cfg.passes = t;
    cfg.weight_trained = uwt(rng);
    cfg.weight_dropout = 1.0 - cfg.weight_trained;

    std::vector<std::vector<double>> trained(n, std::vector<double>(dim));
    std::vector<std::vector<std::vector<double>>> dropout(
        n, std::vector<std::vector<double>>(t, std::vector<double>(dim)));
    for (auto& y : trained) {
      for (double& v : y) v = uv(rng);
    }
    for (auto& trial : dropout) {
      for (auto& y : trial) {
        for (double& v : y) v = uv(rng);
      }
    }

    const auto mu = ensemble_mean(trained, dropout, cfg);
    const auto var = ensemble_variance(trained, dropout, mu, cfg);
    for (int j = 0; j < dim; ++j) {
      double mu_oracle = 0.0, var_oracle = 0.0;
      for (int i = 0; i < n; ++i) mu_oracle += cfg.weight_trained / n * trained[i][j];
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < t; ++s) {
          mu_oracle += cfg.weight_dropout / (n * t) * dropout[i][s][j];
        }
      }
      for (int i = 0; i < n; ++i) {
        const double d = mu_oracle - trained[i][j];
        var_oracle += cfg.weight_trained / n * d * d;
      }
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < t; ++s) {
          const double d = mu_oracle - dropout[i][s][j];
          var_oracle += cfg.weight_dropout / (n * t) * d * d;
        }
      }
      if (std::abs(mu[j] - mu_oracle) > 1e-12) ok = false;
      if (std::abs(var[j] - var_oracle) > 1e-12) ok = false;
    }

    // Outer loss and CI against direct loops.
    Dataset val;
    std::vector<std::vector<double>> mu_pred;
    for (int d2 = 0; d2 < 4; ++d2) {
      val.inputs.push_back({0.0});
      val.targets.push_back({uv(rng)});
      mu_pred.push_back({uv(rng)});
    }
    double loss_oracle = 0.0;
    for (int d2 = 0; d2 < 4; ++d2) {
      const double d = mu_pred[d2][0] - val.targets[d2][0];
      loss_oracle += d * d;
    }
    loss_oracle /= 2.0 * 4.0;
    if (std::abs(expected_outer_loss(mu_pred, val) - loss_oracle) > 1e-12) ok = false;

    std::vector<double> samples;
    for (int s = 0; s < 5; ++s) samples.push_back(uv(rng));
    double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
    double v2 = 0.0;
    for (const double s : samples) v2 += (s - mean) * (s - mean);
    v2 /= samples.size();
    const ConfidenceInterval ci = confidence_interval(samples, loss_oracle);
    if (std::abs(ci.radius - std::sqrt(v2)) > 1e-12) ok = false;
    if (ci.center != loss_oracle) ok = false;
  }

  // Sample counting with the paper-style defaults, on a tiny real problem.
  Dataset train_set, val_set;
  Rng data_rng(9);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    const double x = ux(data_rng);
    Dataset& dst = i < 8 ? train_set : val_set;
    dst.inputs.push_back({x});
    dst.targets.push_back({x * x});
  }
  TrainerWiring wiring;
  wiring.arch.input_dim = 1;
  wiring.arch.hidden_layers = 1;
  wiring.arch.nodes_per_layer = 4;
  wiring.arch.dropout_prob = 0.2;
  wiring.arch.activation = Activation::tanh;
  wiring.train_cfg.epochs = 3;
  wiring.train_cfg.batch_size = 4;
  wiring.train = &train_set;
  wiring.val = &val_set;
  UqConfig defaults;  // N = 5, T = 30
  const QuantifyResult q = quantify({{1}}, defaults, RegularizationConfig{}, wiring, 7);
  if (q.summary.loss_samples.size() != 5 + 5 * 30) ok = false;

  // p = 0 with N = 1: every loss sample is identical, so the radius is 0.
  TrainerWiring det = wiring;
  det.arch.dropout_prob = 0.0;
  UqConfig one;
  one.trials = 1;
  one.passes = 10;
  const QuantifyResult qd = quantify({{1}}, one, RegularizationConfig{}, det, 7);
  if (qd.record.interval.radius != 0.0) ok = false;

  report("3 uq-identities", ok, timer.elapsed());
}

// ---------------------------------------------------------------------------
// 4. Expected improvement: closed form vs numerical integration, positivity.
void criterion_ei() {
  Timer timer;
  bool ok = true;

  if (expected_improvement_value(3.0, 0.0, 5.0) != 2.0) ok = false;
  if (expected_improvement_value(7.0, 0.0, 5.0) != 0.0) ok = false;

  // mu = incumbent, sigma = 1: integrate E[max(0, inc - X)] numerically.
  {
    const double inc = 0.0, mean = 0.0, sigma = 1.0;
    const int steps = 400000;
    const double lo = mean - 12.0 * sigma, hi = mean + 12.0 * sigma;
    const double h = (hi - lo) / steps;
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + h * i;
      const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
      const double f = std::max(0.0, inc - x) * pdf;
      integral += (i == 0 || i == steps) ? 0.5 * f : f;
    }
    integral *= h;
    const double ei = expected_improvement_value(mean, sigma * sigma, inc);
    if (std::abs(ei - integral) > 1e-9) ok = false;
    if (std::abs(ei - 1.0 / std::sqrt(2.0 * M_PI)) > 1e-9) ok = false;
  }

  Rng rng(404);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> uv(0.0, 9.0);
  for (int i = 0; i < 10000; ++i) {
    if (expected_improvement_value(u(rng), uv(rng), u(rng)) < 0.0) ok = false;
  }
  report("4 expected-improvement", ok, timer.elapsed());
}

// ---------------------------------------------------------------------------
// 5. Convergence speed on the noisy quadratic: surrogate vs random search.
int evals_to_true_threshold(const Benchmark& bench, const std::vector<EvaluationRecord>& records,
                            double threshold, int budget) {
  std::vector<const EvaluationRecord*> ordered;
  for (const auto& rec : records) ordered.push_back(&rec);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->completion_index < b->completion_index;
  });
  int count = 0;
  for (const auto* rec : ordered) {
    ++count;
    if (!rec->failed && bench.true_value(rec->point) <= threshold) return count;
  }
  return budget + 1;  // censored
}

void criterion_convergence() {
  Timer timer;
  const Benchmark bench = load_benchmark("noisy-quadratic", 1);
  const int budget = 150;

  EngineConfig cfg;
  cfg.max_evaluations = budget;
  cfg.duration_mode = DurationMode::simulated;
  cfg.sampler.n_candidates = 500;
  const EngineObjective objective = make_benchmark_objective(bench, cfg);

  std::vector<double> surrogate_hits, random_hits;
  for (int s = 0; s < 20; ++s) {
    EngineConfig trial = cfg;
    trial.seed = 1000 + static_cast<std::uint64_t>(s);
    const RunResult sur = run(trial, objective);
    const RunResult rnd = random_search(trial, objective);
    surrogate_hits.push_back(evals_to_true_threshold(bench, sur.state.completed, 1.0, budget));
    random_hits.push_back(evals_to_true_threshold(bench, rnd.state.completed, 1.0, budget));
  }
  const double med_s = median(surrogate_hits);
  const double med_r = median(random_hits);
  const double t = timer.elapsed();
  std::ostringstream detail;
  detail << "median surrogate=" << med_s << " random=" << med_r;
  report("5 convergence-speed", med_s <= med_r / 5.0 && t < 120.0, t, detail.str());
}

// ---------------------------------------------------------------------------
// 6. Async semantics: proposal bases under out-of-order completion, the W=1
// sequential collapse, and byte-identical deterministic replay.
std::string log_bytes(const std::vector<EvaluationRecord>& records) {
  std::string out;
  for (const auto& rec : records) out += record_to_json(rec) + "\n";
  return out;
}

void criterion_async() {
  Timer timer;
  bool ok = true;

  HyperparameterSpace space;
  space.names = {"a", "b", "c"};
  space.lower = {0, 0, 0};
  space.upper = {30, 30, 30};
  space.codecs.resize(3);
  EngineObjective objective;
  objective.space = space;
  objective.evaluate = [](const HyperparameterSet& p, std::uint64_t) {
    EvaluationRecord rec;
    rec.point = p;
    double acc = 0.0;
    for (const auto v : p.values) acc += static_cast<double>((v - 10) * (v - 10));
    rec.loss = acc;
    rec.interval = ConfidenceInterval{acc, 0.5};
    rec.loss_std = 0.5;
    return rec;
  };

  EngineConfig cfg;
  cfg.initial_design_size = 16;
  cfg.max_evaluations = 30;
  cfg.workers = 4;
  cfg.duration_mode = DurationMode::simulated;
  cfg.sampler.n_candidates = 200;

  RunOptions opts;
  // The first post-barrier wave is evals 17-20; eval 18 finishes well before
  // its siblings, so proposal 21 sees {1..16, 18} exactly.
  opts.sim_duration_fn = [](std::int64_t id) {
    if (id <= 16) return 1.0;
    return id == 18 ? 1.0 : 10.0;
  };
  const RunResult result = run(cfg, objective, opts);
  if (result.state.completed.size() != 30) ok = false;

  std::vector<std::int64_t> expected_basis;
  for (std::int64_t id = 1; id <= 16; ++id) expected_basis.push_back(id);
  expected_basis.push_back(18);
  bool saw_21 = false;
  for (const auto& rec : result.state.completed) {
    if (rec.eval_id == 21) {
      saw_21 = true;
      if (rec.proposal_basis != expected_basis) ok = false;
    }
  }
  if (!saw_21) ok = false;

  // W = 1 collapses to strictly sequential bases.
  EngineConfig seq = cfg;
  seq.workers = 1;
  const RunResult sequential = run(seq, objective);
  for (const auto& rec : sequential.state.completed) {
    if (rec.eval_id <= 16) {
      if (!rec.proposal_basis.empty()) ok = false;
    } else {
      std::vector<std::int64_t> expect(rec.eval_id - 1);
      std::iota(expect.begin(), expect.end(), 1);
      if (rec.proposal_basis != expect) ok = false;
    }
  }

  // Deterministic replay: two seeded simulated runs, byte-identical logs.
  cfg.seed = 77;
  const RunResult a = run(cfg, objective);
  const RunResult b = run(cfg, objective);
  if (log_bytes(a.state.completed) != log_bytes(b.state.completed)) ok = false;

  report("6 async-semantics", ok, timer.elapsed());
}

// ---------------------------------------------------------------------------
// 7. Scheduler speedup: virtual makespan within 20% of serial/W.
void criterion_speedup() {
  Timer timer;
  bool ok = true;

  HyperparameterSpace space;
  space.names = {"a", "b", "c", "d"};
  space.lower = {1, 1, 1, 1};
  space.upper = {15, 15, 15, 15};
  space.codecs.resize(4);
  EngineObjective objective;
  objective.space = space;
  objective.evaluate = [](const HyperparameterSet& p, std::uint64_t) {
    EvaluationRecord rec;
    rec.point = p;
    rec.loss = static_cast<double>(p.values[0]);
    rec.interval = ConfidenceInterval{rec.loss, 0.0};
    return rec;
  };

  std::ostringstream detail;
  for (int trial = 0; trial < 5; ++trial) {
    EngineConfig cfg;
    // 50 hyperparameter sets x 5 repeat trials worth of work per run.
    cfg.max_evaluations = 250;
    cfg.duration_mode = DurationMode::simulated;
    cfg.sim_duration_mean = 1.0;
    cfg.sim_duration_jitter = 0.5;
    cfg.seed = 500 + static_cast<std::uint64_t>(trial);

    cfg.workers = 1;
    const double serial = random_search(cfg, objective).makespan;
    for (const int w : {2, 4, 8, 16}) {
      cfg.workers = w;
      const double makespan = random_search(cfg, objective).makespan;
      const double ratio = makespan / (serial / w);
      if (ratio > 1.2 || makespan + 1e-9 < serial / w) {
        ok = false;
        detail << " trial" << trial << ":W" << w << "=" << ratio;
      }
    }
  }
  report("7 scheduler-speedup", ok, timer.elapsed(), detail.str());
}

// ---------------------------------------------------------------------------
// 8. End-to-end small MLP study with kill/resume.
void criterion_end_to_end() {
  Timer timer;
  bool ok = true;

  Benchmark bench = load_benchmark("polyfit6", 3);
  // Keep the study inside the criterion's time budget: small nets, few epochs.
  bench.space.upper = {6, 2, 4, 20, 4, 5};

  EngineConfig cfg;
  cfg.max_evaluations = 40;
  cfg.duration_mode = DurationMode::simulated;
  cfg.uq.trials = 3;
  cfg.uq.passes = 10;
  cfg.sampler.n_candidates = 300;
  cfg.seed = 11;
  const EngineObjective objective = make_benchmark_objective(bench, cfg);

  const fs::path dir = fs::temp_directory_path() / "surropt_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  RunOptions opts;
  opts.log_path = (dir / "eval_log.jsonl").string();
  opts.checkpoint_path = (dir / "checkpoint.json").string();

  // Kill after 20 completions (in-flight work is lost), then resume.
  RunOptions first = opts;
  first.stop_after_completions = 20;
  const RunResult partial = run(cfg, objective, first);
  if (partial.state.completed.size() != 20) ok = false;

  std::ifstream ckpt(opts.checkpoint_path);
  std::stringstream buf;
  buf << ckpt.rdbuf();
  const RunResult full = resume(cfg, objective, state_from_json(buf.str()), opts);
  if (full.state.completed.size() != 40) ok = false;

  // Exactly 40 completions in the log, one per eval id.
  const LogReadResult log = read_log(opts.log_path);
  if (!log.errors.empty()) ok = false;
  if (log.records.size() != 40) ok = false;
  std::set<std::int64_t> ids;
  for (const auto& rec : log.records) ids.insert(rec.eval_id);
  if (ids.size() != 40 || *ids.begin() != 1 || *ids.rbegin() != 40) ok = false;

  // Monotone best-so-far curve.
  const std::string csv = convergence_table(log.records);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  double prev_best = 1e300;
  while (std::getline(in, line)) {
    std::int64_t index;
    double loss, lo, hi, best;
    if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf", &index, &loss, &lo, &hi, &best) != 5) {
      ok = false;
      break;
    }
    if (best > prev_best + 1e-15) ok = false;
    prev_best = best;
  }

  if (pareto_set(log.records).empty()) ok = false;
  if (!full.state.incumbent().has_value()) ok = false;

  const double t = timer.elapsed();
  report("8 end-to-end-mlp", ok && t < 900.0, t);
}

// ---------------------------------------------------------------------------
// 9. GA vs exhaustive enumeration on random unimodal lattice objectives.
void criterion_ga() {
  Timer timer;
  bool ok = true;
  int exact = 0;
  Rng rng(909);

  for (int inst = 0; inst < 20; ++inst) {
    const int dims = 1 + inst % 4;
    // Per-dimension sizes keep the lattice at or under 1e4 points.
    const std::int64_t per_dim =
        dims == 1 ? 10000 : dims == 2 ? 100 : dims == 3 ? 21 : 10;
    HyperparameterSpace space;
    std::int64_t total = 1;
    for (int k = 0; k < dims; ++k) {
      space.names.push_back("g" + std::to_string(k));
      space.lower.push_back(0);
      space.upper.push_back(per_dim - 1);
      total *= per_dim;
    }
    space.codecs.resize(dims);
    if (total > 10000) {
      ok = false;
      break;
    }

    std::vector<double> weight(dims), center(dims);
    std::uniform_real_distribution<double> uw(0.5, 2.0);
    for (int k = 0; k < dims; ++k) {
      weight[k] = uw(rng);
      std::uniform_real_distribution<double> uc(0.0, static_cast<double>(per_dim - 1));
      center[k] = uc(rng);
    }
    const auto objective = [&](const HyperparameterSet& p) {
      double acc = 0.0;
      for (int k = 0; k < dims; ++k) {
        acc -= weight[k] * std::pow(std::abs(static_cast<double>(p.values[k]) - center[k]), 1.5);
      }
      return acc;
    };

    // Exhaustive oracle.
    HyperparameterSet best;
    double best_val = -1e300;
    std::vector<std::int64_t> idx(dims, 0);
    while (true) {
      HyperparameterSet p;
      p.values = idx;
      const double v = objective(p);
      if (v > best_val) {
        best_val = v;
        best = p;
      }
      int k = 0;
      while (k < dims && ++idx[k] >= per_dim) idx[k++] = 0;
      if (k == dims) break;
    }

    Rng ga_rng(inst);
    const HyperparameterSet found = ga_maximize(objective, space, GaConfig{}, ga_rng);
    if (!validate_point(space, found)) ok = false;
    if (found == best) ++exact;
  }

  std::ostringstream detail;
  detail << "exact " << exact << "/20";
  report("9 ga-oracle", ok && exact >= 18, timer.elapsed(), detail.str());
}

}  // namespace

int main() {
  criterion_rbf_exactness();
  criterion_dropout_scaling();
  criterion_uq_identities();
  criterion_ei();
  criterion_convergence();
  criterion_async();
  criterion_speedup();
  criterion_end_to_end();
  criterion_ga();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
