#pragma once

#include <functional>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

// Cubic RBF interpolant with a linear polynomial tail:
//   m(theta) = sum_j lambda_j * ||theta - theta_j||^3 + beta0 + beta . theta
struct RbfModel {
  std::vector<HyperparameterSet> centers;
  std::vector<double> lambdas;
  double beta0 = 0.0;
  std::vector<double> beta;
};

struct RbfEnsemble {
  std::vector<RbfModel> members;

  std::size_t member_count() const { return members.size(); }
};

struct GpModel {
  double nu = 0.0;  // process mean
  double s2 = 1.0;  // process variance
  std::vector<double> lengthscales;
  std::vector<HyperparameterSet> centers;
  std::vector<double> values;
  double nugget = 1e-8;
  // Cached Cholesky solve products, filled by gp_fit.
  std::vector<double> alpha;          // R^{-1} (y - nu 1)
  std::vector<double> chol;           // lower Cholesky factor of R, row-major
};

struct GaConfig {
  int population = 50;
  int generations = 60;
  double mutation_prob = 0.0;  // 0 means 1/dims
  double crossover_prob = 0.9;
  int elitism = 2;
  int tournament = 3;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RbfModel rbf_fit(const std::vector<HyperparameterSet>& centers,
                 const std::vector<double>& values);

double rbf_predict(const RbfModel& model, const HyperparameterSet& point);

RbfEnsemble rbf_ensemble_fit(const std::vector<HyperparameterSet>& centers,
                             const std::vector<ConfidenceInterval>& intervals,
                             int member_count, Rng& rng);

struct EnsembleStats {
  double mu = 0.0;
  double sigma = 0.0;
};

EnsembleStats rbf_ensemble_stats(const RbfEnsemble& ensemble, const HyperparameterSet& point);

// Squared-exponential correlation with per-dimension lengthscales; nu, s2
// and lengthscales fitted by maximizing the concentrated log marginal
// likelihood over log-lengthscales (multi-start coordinate search).
GpModel gp_fit(const std::vector<HyperparameterSet>& centers, const std::vector<double>& values);

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

GpPrediction gp_predict(const GpModel& model, const HyperparameterSet& point);

// Expected improvement for minimization below the incumbent.
double expected_improvement(const GpModel& model, const HyperparameterSet& point,
                            double incumbent);

double expected_improvement_value(double mean, double variance, double incumbent);

// Integer GA: tournament selection, uniform crossover, bounded random-reset
// mutation, elitism. Best-effort maximizer over the lattice.
HyperparameterSet ga_maximize(const std::function<double(const HyperparameterSet&)>& objective,
                              const HyperparameterSpace& space, const GaConfig& cfg, Rng& rng);

}  // namespace surropt
