#pragma once

#include <functional>
#include <string>

#include "surropt/domain.hpp"
#include "surropt/mlp.hpp"
#include "surropt/uq.hpp"

namespace surropt {

enum class BenchmarkKind { mlp, analytic };

// A built-in benchmark: either an MLP training problem (the expensive inner
// problem) or an analytic objective evaluated directly.
struct Benchmark {
  std::string name;
  BenchmarkKind kind = BenchmarkKind::analytic;
  HyperparameterSpace space;

  // MLP benchmarks.
  Dataset train;
  Dataset val;
  std::function<TrainerWiring(const Benchmark&, const HyperparameterSet&)> wiring_for;

  // Analytic benchmarks.
  std::function<double(const HyperparameterSet&)> true_value;
  double noise_sigma = 0.0;
  HyperparameterSet known_argmin;
};

// name in {"polyfit6", "timeseries", "noisy-quadratic"}; throws
// std::invalid_argument otherwise. data_seed makes the generated datasets
// reproducible.
Benchmark load_benchmark(const std::string& name, std::uint64_t data_seed);

std::vector<std::string> benchmark_names();

}  // namespace surropt
