#pragma once

#include <cstdint>
#include <vector>

#include "surropt/domain.hpp"
#include "surropt/mlp.hpp"

namespace surropt {

struct UqConfig {
  int trials = 5;         // N independent trainings
  int passes = 30;        // T dropout passes per trained model
  double weight_trained = 0.5;  // w_T
  double weight_dropout = 0.5;  // w_D

  // Throws std::invalid_argument if N < 1, T < 0 or w_T + w_D != 1.
  void validate() const;
};

struct DropoutStats {
  std::vector<double> mean;
  std::vector<double> variance;  // population variance, element-wise
};

struct UqSummary {
  std::vector<std::vector<double>> mu_pred;  // one vector per validation input
  std::vector<std::vector<double>> v_model;
  std::vector<double> loss_samples;  // N + N*T values
  ConfidenceInterval interval;
};

enum class GKind { rectified_norm, sum, none };

struct RegularizationConfig {
  double gamma = 1.0;
  GKind g_kind = GKind::none;
};

// Sample mean and population variance over T dropout passes for one input.
DropoutStats dropout_stats(const std::vector<std::vector<double>>& passes);

// mu_pred = (w_T/N) sum_i y^i + (w_D/(N T)) sum_j sum_t y_t^j, element-wise.
std::vector<double> ensemble_mean(const std::vector<std::vector<double>>& trained_outputs,
                                  const std::vector<std::vector<std::vector<double>>>& dropout_outputs,
                                  const UqConfig& cfg);

// V_model: weighted squared deviations from mu_pred, element-wise.
std::vector<double> ensemble_variance(const std::vector<std::vector<double>>& trained_outputs,
                                      const std::vector<std::vector<std::vector<double>>>& dropout_outputs,
                                      const std::vector<double>& mu_pred, const UqConfig& cfg);

// (1/2D) sum_d ||z^d - mu_pred(x^d)||^2
double expected_outer_loss(const std::vector<std::vector<double>>& mu_pred, const Dataset& val);

// Center is the mu_pred-based outer loss; radius is the population standard
// deviation of the loss samples.
ConfidenceInterval confidence_interval(const std::vector<double>& loss_samples,
                                       double center_loss);

double regulated_loss(double ell1, const std::vector<std::vector<double>>& v_model,
                      const RegularizationConfig& cfg);

struct TrainerWiring {
  MlpArchitecture arch;
  TrainingConfig train_cfg;  // seed acts as a base; per-trial seeds are derived
  const Dataset* train = nullptr;
  const Dataset* val = nullptr;
  int trial_workers = 1;
};

struct QuantifyResult {
  UqSummary summary;
  EvaluationRecord record;
};

// Trains N models with fresh seeds, runs T dropout passes each over the
// validation set, and assembles the summary and evaluation record.
QuantifyResult quantify(const HyperparameterSet& point, const UqConfig& uq,
                        const RegularizationConfig& reg, const TrainerWiring& wiring,
                        std::uint64_t seed);

}  // namespace surropt
