#include "surropt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "surropt/kernels.hpp"

namespace surropt {

namespace {

std::vector<double> to_real(const HyperparameterSet& p) {
  std::vector<double> out(p.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(p.values[i]);
  return out;
}

void check_distinct(const std::vector<HyperparameterSet>& centers) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (centers[i] == centers[j]) {
        throw FitError("duplicate centers at indices " + std::to_string(i) + " and " +
                       std::to_string(j));
      }
    }
  }
}

double std_normal_pdf(double u) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * u * u);
}

double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / std::sqrt(2.0)); }

double sq_exp_correlation(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& lengthscales) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = (a[j] - b[j]) / lengthscales[j];
    acc += d * d;
  }
  return std::exp(-0.5 * acc);
}

struct GpLikelihood {
  double log_likelihood = -std::numeric_limits<double>::infinity();
  double nu = 0.0;
  double s2 = 0.0;
  double nugget = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt;
  bool ok = false;
};

GpLikelihood evaluate_gp(const std::vector<std::vector<double>>& pts,
                         const Eigen::VectorXd& y, const std::vector<double>& lengthscales) {
  const int n = static_cast<int>(pts.size());
  Eigen::MatrixXd corr(n, n);
  for (int i = 0; i < n; ++i) {
    corr(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      corr(i, j) = corr(j, i) = sq_exp_correlation(pts[i], pts[j], lengthscales);
    }
  }

  GpLikelihood result;
  for (double nugget = 1e-8; nugget <= 1e-2 * 1.0001; nugget *= 10.0) {
    Eigen::MatrixXd r = corr;
    r.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(r);
    if (llt.info() != Eigen::Success) continue;

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd rinv_y = llt.solve(y);
    const Eigen::VectorXd rinv_1 = llt.solve(ones);
    const double denom = ones.dot(rinv_1);
    if (denom <= 0.0) continue;
    const double nu = ones.dot(rinv_y) / denom;
    const Eigen::VectorXd resid = y.array() - nu;
    double s2 = resid.dot(llt.solve(resid)) / n;
    s2 = std::max(s2, 1e-12);

    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));

    result.log_likelihood = -0.5 * (n * std::log(s2) + log_det);
    result.nu = nu;
    result.s2 = s2;
    result.nugget = nugget;
    result.llt = llt;
    result.ok = true;
    return result;
  }
  return result;
}

}  // namespace

RbfModel rbf_fit(const std::vector<HyperparameterSet>& centers,
                 const std::vector<double>& values) {
  if (centers.size() != values.size()) throw FitError("rbf_fit: centers/values length mismatch");
  if (centers.empty()) throw FitError("rbf_fit: no centers");
  const int n = static_cast<int>(centers.size());
  const int d = static_cast<int>(centers.front().values.size());
  if (n < d + 1) {
    throw FitError("rbf_fit: need at least dims+1 centers (" + std::to_string(d + 1) +
                   "), got " + std::to_string(n));
  }
  check_distinct(centers);

  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (const auto& c : centers) pts.push_back(to_real(c));

  const int m = n + d + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double r2 = kernels::squared_distance(pts[i].data(), pts[j].data(), d);
      const double phi = std::pow(r2, 1.5);  // r^3
      a(i, j) = a(j, i) = phi;
    }
    a(i, n) = a(n, i) = 1.0;
    for (int k = 0; k < d; ++k) a(i, n + 1 + k) = a(n + 1 + k, i) = pts[i][k];
    rhs(i) = values[i];
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw FitError("rbf_fit: singular interpolation system (degenerate center geometry)");
  }
  const Eigen::VectorXd sol = lu.solve(rhs);

  RbfModel model;
  model.centers = centers;
  model.lambdas.assign(sol.data(), sol.data() + n);
  model.beta0 = sol(n);
  model.beta.assign(sol.data() + n + 1, sol.data() + m);
  return model;
}

double rbf_predict(const RbfModel& model, const HyperparameterSet& point) {
  const std::size_t d = model.beta.size();
  if (point.values.size() != d) throw std::invalid_argument("rbf_predict: dimension mismatch");
  const std::vector<double> x = to_real(point);
  double acc = model.beta0 + kernels::dot(model.beta.data(), x.data(), d);
  for (std::size_t j = 0; j < model.centers.size(); ++j) {
    const std::vector<double> c = to_real(model.centers[j]);
    const double r2 = kernels::squared_distance(x.data(), c.data(), d);
    acc += model.lambdas[j] * std::pow(r2, 1.5);
  }
  return acc;
}

RbfEnsemble rbf_ensemble_fit(const std::vector<HyperparameterSet>& centers,
                             const std::vector<ConfidenceInterval>& intervals,
                             int member_count, Rng& rng) {
  if (member_count < 2) throw FitError("rbf_ensemble_fit: member_count must be >= 2");
  if (intervals.size() != centers.size()) {
    throw FitError("rbf_ensemble_fit: one interval per center required");
  }
  std::uniform_int_distribution<int> pick(0, 2);
  RbfEnsemble ensemble;
  ensemble.members.reserve(member_count);
  std::vector<double> values(centers.size());
  for (int m = 0; m < member_count; ++m) {
    for (std::size_t i = 0; i < centers.size(); ++i) {
      switch (pick(rng)) {
        case 0: values[i] = intervals[i].lower(); break;
        case 1: values[i] = intervals[i].center; break;
        default: values[i] = intervals[i].upper(); break;
      }
    }
    ensemble.members.push_back(rbf_fit(centers, values));
  }
  return ensemble;
}

EnsembleStats rbf_ensemble_stats(const RbfEnsemble& ensemble, const HyperparameterSet& point) {
  const std::size_t m = ensemble.members.size();
  std::vector<double> preds(m);
  for (std::size_t i = 0; i < m; ++i) preds[i] = rbf_predict(ensemble.members[i], point);
  EnsembleStats stats;
  stats.mu = kernels::sum(preds.data(), m) / static_cast<double>(m);
  stats.sigma = std::sqrt(kernels::sum_sq_dev(preds.data(), stats.mu, m) / static_cast<double>(m));
  return stats;
}

GpModel gp_fit(const std::vector<HyperparameterSet>& centers, const std::vector<double>& values) {
  if (centers.size() != values.size()) throw FitError("gp_fit: centers/values length mismatch");
  if (centers.size() < 2) throw FitError("gp_fit: need at least 2 centers");
  check_distinct(centers);

  const int n = static_cast<int>(centers.size());
  const int d = static_cast<int>(centers.front().values.size());
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (const auto& c : centers) pts.push_back(to_real(c));
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = values[i];

  // Per-dimension coordinate ranges bound the lengthscale search.
  std::vector<double> range(d, 1.0);
  for (int k = 0; k < d; ++k) {
    double lo = pts[0][k], hi = pts[0][k];
    for (const auto& p : pts) {
      lo = std::min(lo, p[k]);
      hi = std::max(hi, p[k]);
    }
    range[k] = std::max(hi - lo, 1.0);
  }

  Rng rng(0xc0ffee);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int starts = 6;
  std::vector<double> best_ls;
  GpLikelihood best;

  for (int s = 0; s < starts; ++s) {
    std::vector<double> log_ls(d);
    for (int k = 0; k < d; ++k) {
      const double lo = std::log(0.1 * range[k]);
      const double hi = std::log(2.0 * range[k]);
      log_ls[k] = s == 0 ? std::log(0.5 * range[k]) : lo + unit(rng) * (hi - lo);
    }
    auto score = [&](const std::vector<double>& lls) {
      std::vector<double> ls(d);
      for (int k = 0; k < d; ++k) ls[k] = std::exp(lls[k]);
      return evaluate_gp(pts, y, ls);
    };
    GpLikelihood cur = score(log_ls);
    double step = 0.5;
    for (int iter = 0; iter < 30 && step > 1e-3; ++iter) {
      bool improved = false;
      for (int k = 0; k < d; ++k) {
        for (const double delta : {step, -step}) {
          std::vector<double> trial = log_ls;
          trial[k] += delta;
          GpLikelihood cand = score(trial);
          if (cand.ok && cand.log_likelihood > cur.log_likelihood) {
            cur = std::move(cand);
            log_ls = std::move(trial);
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur.ok && cur.log_likelihood > best.log_likelihood) {
      best = std::move(cur);
      best_ls.resize(d);
      for (int k = 0; k < d; ++k) best_ls[k] = std::exp(log_ls[k]);
    }
  }

  if (!best.ok) throw FitError("gp_fit: covariance not positive definite after nugget escalation");

  GpModel model;
  model.nu = best.nu;
  model.s2 = best.s2;
  model.lengthscales = best_ls;
  model.centers = centers;
  model.values = values;
  model.nugget = best.nugget;

  const Eigen::VectorXd resid = y.array() - best.nu;
  const Eigen::VectorXd alpha = best.llt.solve(resid);
  model.alpha.assign(alpha.data(), alpha.data() + n);
  const Eigen::MatrixXd l = best.llt.matrixL();
  model.chol.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) model.chol[static_cast<std::size_t>(i) * n + j] = l(i, j);
  }
  return model;
}

GpPrediction gp_predict(const GpModel& model, const HyperparameterSet& point) {
  const int n = static_cast<int>(model.centers.size());
  const int d = static_cast<int>(model.lengthscales.size());
  if (static_cast<int>(point.values.size()) != d) {
    throw std::invalid_argument("gp_predict: dimension mismatch");
  }
  const std::vector<double> x = to_real(point);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    r(i) = sq_exp_correlation(x, to_real(model.centers[i]), model.lengthscales);
  }

  GpPrediction pred;
  pred.mean = model.nu + kernels::dot(r.data(), model.alpha.data(), n);

  // v = L^{-1} r by forward substitution; variance = s2 (1 - v.v), clamped.
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    double acc = r(i);
    for (int j = 0; j < i; ++j) acc -= model.chol[static_cast<std::size_t>(i) * n + j] * v(j);
    v(i) = acc / model.chol[static_cast<std::size_t>(i) * n + i];
  }
  const double reduction = v.squaredNorm();
  pred.variance = std::clamp(model.s2 * (1.0 - reduction), 0.0, model.s2);
  return pred;
}

double expected_improvement_value(double mean, double variance, double incumbent) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  if (sigma <= 0.0) return std::max(0.0, incumbent - mean);
  const double u = (incumbent - mean) / sigma;
  // Clamp: far in the tail the two terms cancel and can round below zero.
  return std::max(0.0, (incumbent - mean) * std_normal_cdf(u) + sigma * std_normal_pdf(u));
}

double expected_improvement(const GpModel& model, const HyperparameterSet& point,
                            double incumbent) {
  const GpPrediction pred = gp_predict(model, point);
  return expected_improvement_value(pred.mean, pred.variance, incumbent);
}

HyperparameterSet ga_maximize(const std::function<double(const HyperparameterSet&)>& objective,
                              const HyperparameterSpace& space, const GaConfig& cfg, Rng& rng) {
  space.validate();
  const std::size_t d = space.dims();
  const double mutation =
      cfg.mutation_prob > 0.0 ? cfg.mutation_prob : 1.0 / static_cast<double>(d);
  const int pop_size = std::max(cfg.population, 4);

  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<HyperparameterSet> population;
  population.reserve(pop_size);
  for (int i = 0; i < pop_size; ++i) population.push_back(random_point(space, rng));

  std::vector<double> fitness(pop_size);
  auto evaluate_all = [&]() {
    for (int i = 0; i < pop_size; ++i) fitness[i] = objective(population[i]);
  };
  evaluate_all();

  auto best_index = [&]() {
    return static_cast<int>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
  };
  HyperparameterSet best = population[best_index()];
  double best_fitness = fitness[best_index()];

  std::uniform_int_distribution<int> pick(0, pop_size - 1);
  auto tournament = [&]() -> const HyperparameterSet& {
    int winner = pick(rng);
    for (int t = 1; t < cfg.tournament; ++t) {
      const int challenger = pick(rng);
      if (fitness[challenger] > fitness[winner]) winner = challenger;
    }
    return population[winner];
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<HyperparameterSet> next;
    next.reserve(pop_size);

    // Elites carry over unchanged.
    std::vector<int> order(pop_size);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + std::min(cfg.elitism, pop_size), order.end(),
                      [&](int a, int b) { return fitness[a] > fitness[b]; });
    for (int e = 0; e < std::min(cfg.elitism, pop_size); ++e) next.push_back(population[order[e]]);

    while (static_cast<int>(next.size()) < pop_size) {
      HyperparameterSet child = tournament();
      if (unit(rng) < cfg.crossover_prob) {
        const HyperparameterSet& other = tournament();
        for (std::size_t k = 0; k < d; ++k) {
          if (unit(rng) < 0.5) child.values[k] = other.values[k];
        }
      }
      for (std::size_t k = 0; k < d; ++k) {
        if (unit(rng) < mutation) {
          std::uniform_int_distribution<std::int64_t> gene(space.lower[k], space.upper[k]);
          child.values[k] = gene(rng);
        }
      }
      next.push_back(std::move(child));
    }

    population = std::move(next);
    evaluate_all();
    const int bi = best_index();
    if (fitness[bi] > best_fitness) {
      best_fitness = fitness[bi];
      best = population[bi];
    }
  }

  // Deterministic unit-step polish so nearby lattice optima are hit exactly.
  for (int step = 0; step < 10000; ++step) {
    bool improved = false;
    for (std::size_t k = 0; k < d && !improved; ++k) {
      for (const std::int64_t delta : {std::int64_t{1}, std::int64_t{-1}}) {
        HyperparameterSet trial = best;
        trial.values[k] = std::clamp(trial.values[k] + delta, space.lower[k], space.upper[k]);
        if (trial.values[k] == best.values[k]) continue;
        const double v = objective(trial);
        if (v > best_fitness) {
          best_fitness = v;
          best = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace surropt
