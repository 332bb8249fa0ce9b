#include "surropt/benchmarks.hpp"

#include <cmath>

namespace surropt {

namespace {

Dataset make_poly_data(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.02);
  Dataset data;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = xs(rng);
    data.inputs.push_back({x});
    data.targets.push_back({x * x * x - 0.5 * x + noise(rng)});
  }
  return data;
}

TrainerWiring mlp_wiring(const HyperparameterSpace& space, const HyperparameterSet& point,
                         const Dataset* train, const Dataset* val, int input_dim) {
  TrainerWiring w;
  w.arch.input_dim = input_dim;
  w.arch.output_dim = 1;
  w.arch.nodes_per_layer = static_cast<int>(point.values[0]);
  w.arch.hidden_layers = static_cast<int>(point.values[1]);
  w.arch.dropout_prob = space.codecs[2].decode(point.values[2]);
  w.arch.activation = Activation::tanh;
  w.train_cfg.learning_rate = space.codecs[3].decode(point.values[3]);
  w.train_cfg.epochs = static_cast<int>(std::llround(space.codecs[4].decode(point.values[4])));
  const int batch = static_cast<int>(std::llround(space.codecs[5].decode(point.values[5])));
  w.train_cfg.batch_size = std::min<int>(batch, static_cast<int>(train->size()));
  w.train = train;
  w.val = val;
  return w;
}

Benchmark make_polyfit6(std::uint64_t data_seed) {
  Benchmark b;
  b.name = "polyfit6";
  b.kind = BenchmarkKind::mlp;
  b.space.names = {"nodes_per_layer", "hidden_layers", "dropout_idx",
                   "learning_rate_idx", "epochs_idx", "batch_idx"};
  b.space.lower = {1, 1, 0, 1, 1, 1};
  b.space.upper = {16, 3, 8, 20, 20, 5};
  b.space.codecs.resize(6);
  b.space.codecs[2] = DimCodec{0.0, 0.05};   // dropout 0 .. 0.4
  b.space.codecs[3] = DimCodec{0.0, 0.0005}; // learning rate 0.0005 .. 0.01
  b.space.codecs[4] = DimCodec{0.0, 5.0};    // epochs 5 .. 100
  b.space.codecs[5] = DimCodec{0.0, 8.0};    // batch size 8 .. 40
  b.train = make_poly_data(data_seed, 100);
  b.val = make_poly_data(data_seed ^ 0x5eedull, 50);
  b.wiring_for = [](const Benchmark& self, const HyperparameterSet& p) {
    return mlp_wiring(self.space, p, &self.train, &self.val, 1);
  };
  return b;
}

Benchmark make_timeseries(std::uint64_t data_seed) {
  Benchmark b;
  b.name = "timeseries";
  b.kind = BenchmarkKind::mlp;
  b.space.names = {"nodes_per_layer", "hidden_layers", "dropout_idx",
                   "learning_rate_idx", "epochs_idx", "batch_idx"};
  b.space.lower = {1, 1, 0, 1, 1, 1};
  b.space.upper = {12, 2, 6, 20, 12, 4};
  b.space.codecs.resize(6);
  b.space.codecs[2] = DimCodec{0.0, 0.05};
  b.space.codecs[3] = DimCodec{0.0, 0.0005};
  b.space.codecs[4] = DimCodec{0.0, 5.0};
  b.space.codecs[5] = DimCodec{0.0, 8.0};

  // Sine series with additive noise, windowed into one-step-ahead pairs.
  constexpr int kWindow = 8;
  constexpr int kSeries = 220;
  Rng rng(data_seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> series(kSeries);
  for (int t = 0; t < kSeries; ++t) series[t] = std::sin(0.2 * t) + noise(rng);
  Dataset all;
  for (int t = kWindow; t < kSeries; ++t) {
    std::vector<double> window(series.begin() + (t - kWindow), series.begin() + t);
    all.inputs.push_back(std::move(window));
    all.targets.push_back({series[t]});
  }
  const std::size_t split = all.size() * 3 / 4;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Dataset& dst = i < split ? b.train : b.val;
    dst.inputs.push_back(all.inputs[i]);
    dst.targets.push_back(all.targets[i]);
  }
  b.wiring_for = [](const Benchmark& self, const HyperparameterSet& p) {
    return mlp_wiring(self.space, p, &self.train, &self.val, 8);
  };
  return b;
}

Benchmark make_noisy_quadratic() {
  Benchmark b;
  b.name = "noisy-quadratic";
  b.kind = BenchmarkKind::analytic;
  b.space.names = {"x1", "x2", "x3", "x4"};
  b.space.lower = {1, 1, 1, 1};
  b.space.upper = {15, 15, 15, 15};
  b.space.codecs.resize(4);
  b.known_argmin.values = {8, 8, 8, 8};
  b.true_value = [](const HyperparameterSet& p) {
    double acc = 0.0;
    for (const auto v : p.values) {
      const double d = static_cast<double>(v) - 8.0;
      acc += d * d;
    }
    return acc;
  };
  // 5% of the objective's range over the lattice (max 4 * 49, min 0).
  b.noise_sigma = 0.05 * 196.0;
  return b;
}

}  // namespace

Benchmark load_benchmark(const std::string& name, std::uint64_t data_seed) {
  if (name == "polyfit6") return make_polyfit6(data_seed);
  if (name == "timeseries") return make_timeseries(data_seed);
  if (name == "noisy-quadratic") return make_noisy_quadratic();
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

std::vector<std::string> benchmark_names() {
  return {"polyfit6", "timeseries", "noisy-quadratic"};
}

}  // namespace surropt
