#include "surropt/uq.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "surropt/kernels.hpp"

namespace surropt {

namespace {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double half_scaled_mse(const std::vector<std::vector<double>>& outputs, const Dataset& val) {
  double total = 0.0;
  for (std::size_t d = 0; d < val.size(); ++d) {
    total += kernels::squared_distance(outputs[d].data(), val.targets[d].data(),
                                       outputs[d].size());
  }
  return total / (2.0 * static_cast<double>(val.size()));
}

}  // namespace

void UqConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("uq: trials must be >= 1");
  if (passes < 0) throw std::invalid_argument("uq: passes must be >= 0");
  if (weight_trained < 0.0) throw std::invalid_argument("uq: weight_trained must be >= 0");
  if (weight_dropout <= 0.0) throw std::invalid_argument("uq: weight_dropout must be > 0");
  if (std::abs(weight_trained + weight_dropout - 1.0) > 1e-12) {
    throw std::invalid_argument("uq: weight_trained + weight_dropout must equal 1");
  }
}

DropoutStats dropout_stats(const std::vector<std::vector<double>>& passes) {
  if (passes.empty()) throw std::invalid_argument("dropout_stats: no passes");
  const std::size_t dim = passes.front().size();
  const double t = static_cast<double>(passes.size());
  DropoutStats stats;
  stats.mean.assign(dim, 0.0);
  stats.variance.assign(dim, 0.0);
  for (const auto& pass : passes) {
    if (pass.size() != dim) throw std::invalid_argument("dropout_stats: pass lengths disagree");
    kernels::axpy(1.0 / t, pass.data(), stats.mean.data(), dim);
  }
  for (const auto& pass : passes) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = pass[j] - stats.mean[j];
      stats.variance[j] += d * d / t;
    }
  }
  return stats;
}

std::vector<double> ensemble_mean(const std::vector<std::vector<double>>& trained_outputs,
                                  const std::vector<std::vector<std::vector<double>>>& dropout_outputs,
                                  const UqConfig& cfg) {
  const std::size_t n = trained_outputs.size();
  if (n == 0) throw std::invalid_argument("ensemble_mean: no trained outputs");
  if (dropout_outputs.size() != n) {
    throw std::invalid_argument("ensemble_mean: trained/dropout trial counts disagree");
  }
  const std::size_t t = dropout_outputs.front().size();
  if (t == 0 && cfg.weight_dropout > 0.0) {
    throw std::invalid_argument("ensemble_mean: no dropout passes with weight_dropout > 0");
  }
  const std::size_t dim = trained_outputs.front().size();
  std::vector<double> mu(dim, 0.0);
  const double wt = cfg.weight_trained / static_cast<double>(n);
  for (const auto& y : trained_outputs) kernels::axpy(wt, y.data(), mu.data(), dim);
  const double wd = cfg.weight_dropout / static_cast<double>(n * t);
  for (const auto& trial : dropout_outputs) {
    for (const auto& y : trial) kernels::axpy(wd, y.data(), mu.data(), dim);
  }
  return mu;
}

std::vector<double> ensemble_variance(const std::vector<std::vector<double>>& trained_outputs,
                                      const std::vector<std::vector<std::vector<double>>>& dropout_outputs,
                                      const std::vector<double>& mu_pred, const UqConfig& cfg) {
  const std::size_t n = trained_outputs.size();
  const std::size_t t = dropout_outputs.empty() ? 0 : dropout_outputs.front().size();
  const std::size_t dim = mu_pred.size();
  std::vector<double> var(dim, 0.0);
  const double wt = cfg.weight_trained / static_cast<double>(n);
  for (const auto& y : trained_outputs) {
    if (y.size() != dim) throw std::invalid_argument("ensemble_variance: dimension mismatch");
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = mu_pred[j] - y[j];
      var[j] += wt * d * d;
    }
  }
  const double wd = cfg.weight_dropout / static_cast<double>(n * t);
  for (const auto& trial : dropout_outputs) {
    for (const auto& y : trial) {
      if (y.size() != dim) throw std::invalid_argument("ensemble_variance: dimension mismatch");
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = mu_pred[j] - y[j];
        var[j] += wd * d * d;
      }
    }
  }
  return var;
}

double expected_outer_loss(const std::vector<std::vector<double>>& mu_pred, const Dataset& val) {
  if (val.size() == 0) throw std::invalid_argument("expected_outer_loss: empty validation set");
  if (mu_pred.size() != val.size()) {
    throw std::invalid_argument("expected_outer_loss: mu_pred size disagrees with validation set");
  }
  return half_scaled_mse(mu_pred, val);
}

ConfidenceInterval confidence_interval(const std::vector<double>& loss_samples,
                                       double center_loss) {
  if (loss_samples.size() < 2) {
    throw std::invalid_argument("confidence_interval: need at least 2 loss samples");
  }
  const std::size_t n = loss_samples.size();
  const auto [lo, hi] = std::minmax_element(loss_samples.begin(), loss_samples.end());
  if (*lo == *hi) return ConfidenceInterval{center_loss, 0.0};  // exact for constant samples
  const double mean = kernels::sum(loss_samples.data(), n) / static_cast<double>(n);
  const double var = kernels::sum_sq_dev(loss_samples.data(), mean, n) / static_cast<double>(n);
  return ConfidenceInterval{center_loss, std::sqrt(var)};
}

double regulated_loss(double ell1, const std::vector<std::vector<double>>& v_model,
                      const RegularizationConfig& cfg) {
  if (cfg.g_kind == GKind::none) return ell1;
  if (cfg.gamma <= 0.0) throw std::invalid_argument("regularization: gamma must be > 0");
  double penalty = 0.0;
  for (const auto& v : v_model) {
    if (cfg.g_kind == GKind::rectified_norm) {
      double acc = 0.0;
      for (const double x : v) {
        const double r = x > 0.0 ? x : 0.0;
        acc += r * r;
      }
      penalty += std::sqrt(acc);
    } else {
      penalty += kernels::sum(v.data(), v.size());
    }
  }
  return ell1 + cfg.gamma * penalty;
}

QuantifyResult quantify(const HyperparameterSet& point, const UqConfig& uq,
                        const RegularizationConfig& reg, const TrainerWiring& wiring,
                        std::uint64_t seed) {
  uq.validate();
  if (!wiring.train || !wiring.val) throw std::invalid_argument("quantify: missing datasets");
  const Dataset& val = *wiring.val;
  const int n = uq.trials;
  const int t = uq.passes;

  struct TrialOutput {
    bool diverged = false;
    std::vector<std::vector<double>> trained;                // per val input
    std::vector<std::vector<std::vector<double>>> dropout;   // [t][input]
  };

  auto run_trial = [&](int i) {
    TrialOutput out;
    TrainingConfig cfg = wiring.train_cfg;
    cfg.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    const TrainResult trained = train(wiring.arch, *wiring.train, cfg);
    if (trained.diverged) {
      out.diverged = true;
      return out;
    }
    out.trained.reserve(val.size());
    for (const auto& x : val.inputs) out.trained.push_back(forward(wiring.arch, trained.weights, x));
    Rng drop_rng(mix_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
    out.dropout.resize(t);
    for (int pass = 0; pass < t; ++pass) {
      out.dropout[pass].reserve(val.size());
      for (const auto& x : val.inputs) {
        out.dropout[pass].push_back(
            forward_dropout(wiring.arch, trained.weights, x, wiring.arch.dropout_prob, drop_rng));
      }
    }
    return out;
  };

  std::vector<TrialOutput> trials(n);
  if (wiring.trial_workers > 1) {
    std::vector<std::future<TrialOutput>> futures;
    futures.reserve(n);
    for (int i = 0; i < n; ++i) {
      futures.push_back(std::async(std::launch::async, run_trial, i));
    }
    for (int i = 0; i < n; ++i) trials[i] = futures[i].get();
  } else {
    for (int i = 0; i < n; ++i) trials[i] = run_trial(i);
  }

  QuantifyResult result;
  EvaluationRecord& rec = result.record;
  rec.point = point;
  rec.trial_count = n;
  rec.dropout_passes = t;
  rec.param_count = wiring.arch.param_count();

  // Divergent trials are dropped from all statistics.
  std::vector<std::vector<std::vector<double>>> trained_by_input;  // [input][trial]
  std::vector<const TrialOutput*> ok;
  for (const auto& trial : trials) {
    if (!trial.diverged) ok.push_back(&trial);
  }
  if (ok.empty()) {
    rec.failed = true;
    rec.loss = kFailedLossSentinel;
    rec.loss_std = 0.0;
    rec.interval = ConfidenceInterval{kFailedLossSentinel, 0.0};
    return result;
  }

  UqConfig effective = uq;
  effective.trials = static_cast<int>(ok.size());

  UqSummary& summary = result.summary;
  summary.mu_pred.resize(val.size());
  summary.v_model.resize(val.size());
  for (std::size_t d = 0; d < val.size(); ++d) {
    std::vector<std::vector<double>> trained_d;
    std::vector<std::vector<std::vector<double>>> dropout_d;
    trained_d.reserve(ok.size());
    dropout_d.reserve(ok.size());
    for (const TrialOutput* trial : ok) {
      trained_d.push_back(trial->trained[d]);
      std::vector<std::vector<double>> passes_d;
      passes_d.reserve(t);
      for (int pass = 0; pass < t; ++pass) passes_d.push_back(trial->dropout[pass][d]);
      dropout_d.push_back(std::move(passes_d));
    }
    summary.mu_pred[d] = ensemble_mean(trained_d, dropout_d, effective);
    summary.v_model[d] = ensemble_variance(trained_d, dropout_d, summary.mu_pred[d], effective);
  }

  // One loss sample per trained model and one per dropout mask set.
  for (const TrialOutput* trial : ok) {
    summary.loss_samples.push_back(half_scaled_mse(trial->trained, val));
    for (int pass = 0; pass < t; ++pass) {
      summary.loss_samples.push_back(half_scaled_mse(trial->dropout[pass], val));
    }
  }

  const double center = expected_outer_loss(summary.mu_pred, val);
  summary.interval = summary.loss_samples.size() >= 2
                         ? confidence_interval(summary.loss_samples, center)
                         : ConfidenceInterval{center, 0.0};
  rec.loss = center;
  rec.interval = summary.interval;
  rec.loss_std = summary.interval.radius;
  if (reg.g_kind != GKind::none) {
    rec.regulated_loss = regulated_loss(center, summary.v_model, reg);
  }
  return result;
}

}  // namespace surropt
