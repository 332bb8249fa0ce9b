#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "surropt/mlp.hpp"

using namespace surropt;

namespace {

// Hand-set 2-2-1 relu network used by several oracle checks.
MlpArchitecture tiny_arch(Activation act = Activation::relu) {
  MlpArchitecture arch;
  arch.input_dim = 2;
  arch.hidden_layers = 1;
  arch.nodes_per_layer = 2;
  arch.output_dim = 1;
  arch.activation = act;
  return arch;
}

ModelWeights tiny_weights() {
  ModelWeights w;
  w.weights = {{1.0, -1.0, 0.5, 2.0}, {1.0, 1.0}};
  w.biases = {{0.0, -1.0}, {0.25}};
  w.in_size = {2, 2};
  w.out_size = {2, 1};
  return w;
}

Dataset line_dataset(int n) {
  // y = 0.5 x + 0.2 on [-1, 1], exactly representable by a linear map.
  Dataset d;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * i / (n - 1);
    d.inputs.push_back({x});
    d.targets.push_back({0.5 * x + 0.2});
  }
  return d;
}

}  // namespace

TEST_CASE("param_count matches the closed form") {
  MlpArchitecture arch;
  arch.input_dim = 2;
  arch.hidden_layers = 2;
  arch.nodes_per_layer = 3;
  arch.output_dim = 1;
  // (2*3+3) + (3*3+3) + (3*1+1)
  CHECK(arch.param_count() == 25);
  arch.hidden_layers = 1;
  arch.nodes_per_layer = 1;
  arch.input_dim = 1;
  CHECK(arch.param_count() == 4);
}

TEST_CASE("init_weights respects scaled-uniform bounds and zero biases") {
  MlpArchitecture arch;
  arch.input_dim = 4;
  arch.hidden_layers = 2;
  arch.nodes_per_layer = 6;
  arch.output_dim = 1;
  const ModelWeights w = init_weights(arch, 5);
  REQUIRE(w.layers() == 3);
  for (std::size_t l = 0; l < w.layers(); ++l) {
    const double s = std::sqrt(6.0 / (w.in_size[l] + w.out_size[l]));
    for (const double v : w.weights[l]) {
      CHECK(std::abs(v) <= s);
    }
    for (const double b : w.biases[l]) CHECK(b == 0.0);
  }
  // Deterministic per seed, different across seeds.
  const ModelWeights w2 = init_weights(arch, 5);
  CHECK(w.weights[0] == w2.weights[0]);
  const ModelWeights w3 = init_weights(arch, 6);
  CHECK(w.weights[0] != w3.weights[0]);
}

TEST_CASE("forward matches a hand computation") {
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  // x = (1, 2): pre = (1-2, 0.5+4-1) = (-1, 3.5); relu -> (0, 3.5); out = 0+3.5+0.25
  const auto y = forward(arch, w, {1.0, 2.0});
  REQUIRE(y.size() == 1);
  CHECK(y[0] == doctest::Approx(3.75).epsilon(1e-15));

  const auto arch_t = tiny_arch(Activation::tanh);
  const auto yt = forward(arch_t, w, {1.0, 2.0});
  CHECK(yt[0] == doctest::Approx(std::tanh(-1.0) + std::tanh(3.5) + 0.25).epsilon(1e-15));

  CHECK_THROWS_AS(forward(arch, w, {1.0}), std::invalid_argument);
}

TEST_CASE("forward_dropout with p=0 equals forward") {
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  Rng rng(1);
  const auto plain = forward(arch, w, {0.3, -0.7});
  const auto dropped = forward_dropout(arch, w, {0.3, -0.7}, 0.0, rng);
  CHECK(dropped[0] == plain[0]);
}

TEST_CASE("forward_dropout rejects invalid probabilities") {
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  Rng rng(1);
  CHECK_THROWS_AS(forward_dropout(arch, w, {0.0, 0.0}, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(forward_dropout(arch, w, {0.0, 0.0}, -0.1, rng), std::invalid_argument);
}

TEST_CASE("inverted dropout is unbiased: Monte Carlo mean approaches forward") {
  // Single hidden layer: the output is linear in the mask, so the
  // expectation over masks equals the deterministic forward pass.
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  const std::vector<double> x{1.0, 2.0};
  const double truth = forward(arch, w, x)[0];
  Rng rng(77);
  const int passes = 200000;
  double acc = 0.0;
  for (int t = 0; t < passes; ++t) acc += forward_dropout(arch, w, x, 0.4, rng)[0];
  CHECK(acc / passes == doctest::Approx(truth).epsilon(0.02));
}

TEST_CASE("dropout outputs take only the expected support values") {
  // With one hidden unit active per mask, enumerate the four possible outputs.
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  const std::vector<double> x{1.0, 2.0};
  const double scale = 1.0 / (1.0 - 0.5);
  // relu hidden activations: (0, 3.5); output = h0*m0 + h1*m1 + 0.25
  const std::vector<double> support{0.25, 0.25 + 3.5 * scale};
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const double y = forward_dropout(arch, w, x, 0.5, rng)[0];
    bool found = false;
    for (const double s : support) {
      if (std::abs(y - s) < 1e-12) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("inner_loss matches a naive oracle") {
  const auto arch = tiny_arch();
  const auto w = tiny_weights();
  Dataset data;
  data.inputs = {{1.0, 2.0}, {0.0, 0.0}};
  data.targets = {{3.0}, {1.0}};
  // outputs: 3.75 and 0.25 -> ((0.75)^2 + (0.75)^2) / 2
  CHECK(inner_loss(arch, w, data) == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK_THROWS_AS(inner_loss(arch, w, Dataset{}), std::invalid_argument);
}

TEST_CASE("train fits a linear target and is deterministic per seed") {
  MlpArchitecture arch;
  arch.input_dim = 1;
  arch.hidden_layers = 1;
  arch.nodes_per_layer = 8;
  arch.output_dim = 1;
  arch.activation = Activation::tanh;

  const Dataset data = line_dataset(32);
  TrainingConfig cfg;
  cfg.epochs = 300;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.05;
  cfg.seed = 3;

  const TrainResult a = train(arch, data, cfg);
  REQUIRE_FALSE(a.diverged);
  const double fitted = inner_loss(arch, a.weights, data);
  const double at_init = inner_loss(arch, init_weights(arch, cfg.seed), data);
  CHECK(fitted < 1e-3);
  CHECK(fitted < at_init);

  const TrainResult b = train(arch, data, cfg);
  CHECK(a.weights.weights == b.weights.weights);
  CHECK(a.weights.biases == b.weights.biases);
}

TEST_CASE("train flags divergence under an absurd learning rate") {
  MlpArchitecture arch;
  arch.input_dim = 1;
  arch.hidden_layers = 2;
  arch.nodes_per_layer = 8;
  arch.output_dim = 1;

  TrainingConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 4;
  cfg.learning_rate = 1e12;
  cfg.seed = 1;

  const TrainResult r = train(arch, line_dataset(16), cfg);
  CHECK(r.diverged);
}

TEST_CASE("train validates inputs") {
  const auto arch = tiny_arch();
  TrainingConfig cfg;
  CHECK_THROWS_AS(train(arch, Dataset{}, cfg), std::invalid_argument);
  Dataset one;
  one.inputs = {{0.0, 0.0}};
  one.targets = {{0.0}};
  cfg.batch_size = 2;
  CHECK_THROWS_AS(train(arch, one, cfg), std::invalid_argument);
}
