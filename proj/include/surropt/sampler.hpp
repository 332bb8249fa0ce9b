#pragma once

#include <unordered_set>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

struct SamplerConfig {
  int n_candidates = 0;           // 0 = min(500 * dims, 5000)
  double perturb_fraction = 0.5;  // fraction generated by perturbing the best point
  double perturb_sigma = 0.0;     // lattice steps; 0 = max(1, ceil(0.1 * extent)) per dim
  std::vector<double> weight_cycle{0.3, 0.5, 0.8, 0.95};
  double alpha = 0.0;  // in [-2, 2]
  double min_distance = 1.0;

  void validate() const;
  int resolved_candidates(std::size_t dims) const;
  double resolved_sigma(std::int64_t lower, std::int64_t upper) const;
};

struct WeightCycleState {
  std::size_t position = 0;
};

using EvaluatedSet = std::unordered_set<HyperparameterSet, PointHash>;

// Thrown when every lattice point has already been evaluated.
struct SpaceExhausted : std::runtime_error {
  SpaceExhausted() : std::runtime_error("search space exhausted: all lattice points evaluated") {}
};

std::vector<HyperparameterSet> generate_candidates(const HyperparameterSpace& space,
                                                   const HyperparameterSet& best,
                                                   const EvaluatedSet& evaluated,
                                                   const SamplerConfig& cfg, Rng& rng);

// Min-max normalizes both criteria over the batch and combines them:
// total = w * value_norm + (1 - w) * dist_norm. Lower total is better.
std::vector<double> score_weighted(const std::vector<double>& values,
                                   const std::vector<double>& distances, double weight);

// Value criterion mu + alpha * sigma, then combined as in score_weighted.
std::vector<double> score_ensemble(const std::vector<double>& mu,
                                   const std::vector<double>& sigma,
                                   const std::vector<double>& distances, double alpha,
                                   double weight);

// Index of the winning candidate: lowest total, ties broken by larger raw
// distance, then by index.
std::size_t select_candidate(const std::vector<double>& totals,
                             const std::vector<double>& distances);

double next_weight(const SamplerConfig& cfg, WeightCycleState& state);

// Distance from point to the nearest member of the evaluated set.
double distance_to_evaluated(const HyperparameterSet& point,
                             const std::vector<HyperparameterSet>& evaluated);

}  // namespace surropt
