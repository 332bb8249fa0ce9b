#include "surropt/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace surropt {

void SamplerConfig::validate() const {
  if (perturb_fraction <= 0.0 || perturb_fraction > 1.0) {
    throw std::invalid_argument("sampler: perturb_fraction must be in (0, 1]");
  }
  if (weight_cycle.empty()) throw std::invalid_argument("sampler: weight_cycle must be nonempty");
  for (const double w : weight_cycle) {
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("sampler: cycle weights must be in [0, 1]");
  }
  if (alpha < -2.0 || alpha > 2.0) throw std::invalid_argument("sampler: alpha must be in [-2, 2]");
  if (min_distance <= 0.0) throw std::invalid_argument("sampler: min_distance must be > 0");
}

int SamplerConfig::resolved_candidates(std::size_t dims) const {
  if (n_candidates > 0) return n_candidates;
  return static_cast<int>(std::min<std::size_t>(500 * dims, 5000));
}

double SamplerConfig::resolved_sigma(std::int64_t lower, std::int64_t upper) const {
  if (perturb_sigma > 0.0) return perturb_sigma;
  return std::max(1.0, std::ceil(0.1 * static_cast<double>(upper - lower)));
}

std::vector<HyperparameterSet> generate_candidates(const HyperparameterSpace& space,
                                                   const HyperparameterSet& best,
                                                   const EvaluatedSet& evaluated,
                                                   const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  if (const auto size = space.lattice_size();
      size && static_cast<std::int64_t>(evaluated.size()) >= *size) {
    throw SpaceExhausted();
  }

  const std::size_t d = space.dims();
  const int total = cfg.resolved_candidates(d);
  const int n_perturb = static_cast<int>(std::ceil(cfg.perturb_fraction * total));

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> dim_pick(0, d - 1);

  auto perturbed = [&]() {
    HyperparameterSet p = best;
    bool changed = false;
    for (std::size_t k = 0; k < d; ++k) {
      const double sigma = cfg.resolved_sigma(space.lower[k], space.upper[k]);
      const std::int64_t delta = std::llround(gauss(rng) * sigma);
      const std::int64_t v =
          std::clamp(best.values[k] + delta, space.lower[k], space.upper[k]);
      if (v != best.values[k]) changed = true;
      p.values[k] = v;
    }
    if (!changed) {
      // Force a unit step in a random direction on a random coordinate.
      const std::size_t k = dim_pick(rng);
      std::int64_t v = p.values[k] + (unit(rng) < 0.5 ? 1 : -1);
      if (v < space.lower[k] || v > space.upper[k]) v = 2 * p.values[k] - v;
      p.values[k] = std::clamp(v, space.lower[k], space.upper[k]);
    }
    return p;
  };

  constexpr int kRetryCap = 10;
  std::vector<HyperparameterSet> candidates;
  candidates.reserve(total);
  for (int i = 0; i < total; ++i) {
    const bool from_perturbation = i < n_perturb;
    HyperparameterSet cand;
    bool accepted = false;
    for (int attempt = 0; attempt < kRetryCap; ++attempt) {
      cand = from_perturbation ? perturbed() : random_point(space, rng);
      if (!evaluated.contains(cand)) {
        accepted = true;
        break;
      }
    }
    if (accepted) candidates.push_back(std::move(cand));
  }
  if (candidates.empty()) throw SpaceExhausted();
  return candidates;
}

namespace {

std::vector<double> min_max_ascending(const std::vector<double>& v) {
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(v.size(), 0.0);
  if (hi > lo) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) / (hi - lo);
  }
  return out;
}

}  // namespace

std::vector<double> score_weighted(const std::vector<double>& values,
                                   const std::vector<double>& distances, double weight) {
  if (values.size() != distances.size() || values.empty()) {
    throw std::invalid_argument("score_weighted: values/distances must be same nonzero length");
  }
  const std::vector<double> value_norm = min_max_ascending(values);
  std::vector<double> dist_norm = min_max_ascending(distances);
  // Larger distance is better, so flip to make lower better.
  for (double& x : dist_norm) x = 1.0 - x;
  std::vector<double> totals(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    totals[i] = weight * value_norm[i] + (1.0 - weight) * dist_norm[i];
  }
  return totals;
}

std::vector<double> score_ensemble(const std::vector<double>& mu,
                                   const std::vector<double>& sigma,
                                   const std::vector<double>& distances, double alpha,
                                   double weight) {
  if (mu.size() != sigma.size()) {
    throw std::invalid_argument("score_ensemble: mu/sigma length mismatch");
  }
  std::vector<double> values(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) values[i] = mu[i] + alpha * sigma[i];
  return score_weighted(values, distances, weight);
}

std::size_t select_candidate(const std::vector<double>& totals,
                             const std::vector<double>& distances) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < totals.size(); ++i) {
    if (totals[i] < totals[best] ||
        (totals[i] == totals[best] && distances[i] > distances[best])) {
      best = i;
    }
  }
  return best;
}

double next_weight(const SamplerConfig& cfg, WeightCycleState& state) {
  if (cfg.weight_cycle.empty()) throw std::invalid_argument("next_weight: empty weight cycle");
  const double w = cfg.weight_cycle[state.position % cfg.weight_cycle.size()];
  ++state.position;
  return w;
}

double distance_to_evaluated(const HyperparameterSet& point,
                             const std::vector<HyperparameterSet>& evaluated) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : evaluated) best = std::min(best, distance(point, e));
  return best;
}

}  // namespace surropt
