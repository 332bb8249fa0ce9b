#pragma once

#include <cstdint>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

enum class Activation { relu, tanh };

struct MlpArchitecture {
  int input_dim = 1;
  int hidden_layers = 1;
  int nodes_per_layer = 8;
  int output_dim = 1;
  double dropout_prob = 0.0;  // p in [0,1)
  Activation activation = Activation::relu;

  std::int64_t param_count() const;
};

// Dense layers stored row-major: weights[l] has out_size[l] x in_size[l] entries.
struct ModelWeights {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  std::vector<int> in_size;
  std::vector<int> out_size;

  std::size_t layers() const { return weights.size(); }
};

struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;

  std::size_t size() const { return inputs.size(); }
};

struct TrainingConfig {
  int epochs = 100;
  int batch_size = 16;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ModelWeights weights;
  bool diverged = false;
};

// Glorot-style scaled-uniform init: U(-s, s) with s = sqrt(6 / (fan_in + fan_out)).
ModelWeights init_weights(const MlpArchitecture& arch, std::uint64_t seed);

// Deterministic forward pass, no dropout.
std::vector<double> forward(const MlpArchitecture& arch, const ModelWeights& w,
                            const std::vector<double>& x);

// Forward pass with inverted dropout on hidden layers: each hidden node is
// zeroed with probability p, survivors scaled by 1/(1-p). Output layer is
// never dropped.
std::vector<double> forward_dropout(const MlpArchitecture& arch, const ModelWeights& w,
                                    const std::vector<double>& x, double p, Rng& rng);

// Mini-batch SGD on mean-squared loss, dropout active during training.
TrainResult train(const MlpArchitecture& arch, const Dataset& data, const TrainingConfig& cfg);

// Mean over the dataset of ||z - y||^2, no dropout.
double inner_loss(const MlpArchitecture& arch, const ModelWeights& w, const Dataset& data);

}  // namespace surropt
