#include "surropt/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surropt/kernels.hpp"

namespace surropt {

namespace {

double activate(Activation act, double v) {
  switch (act) {
    case Activation::relu:
      return v > 0.0 ? v : 0.0;
    case Activation::tanh:
      return std::tanh(v);
  }
  return v;
}

double activate_grad(Activation act, double pre, double post) {
  switch (act) {
    case Activation::relu:
      return pre > 0.0 ? 1.0 : 0.0;
    case Activation::tanh:
      return 1.0 - post * post;
  }
  return 1.0;
}

std::vector<int> layer_sizes(const MlpArchitecture& arch) {
  std::vector<int> sizes;
  sizes.push_back(arch.input_dim);
  for (int l = 0; l < arch.hidden_layers; ++l) sizes.push_back(arch.nodes_per_layer);
  sizes.push_back(arch.output_dim);
  return sizes;
}

void matvec(const std::vector<double>& w, const std::vector<double>& b, int rows, int cols,
            const double* x, double* out) {
  for (int r = 0; r < rows; ++r) {
    out[r] = b[r] + kernels::dot(w.data() + static_cast<std::size_t>(r) * cols, x,
                                 static_cast<std::size_t>(cols));
  }
}

}  // namespace

std::int64_t MlpArchitecture::param_count() const {
  const auto sizes = layer_sizes(*this);
  std::int64_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    total += static_cast<std::int64_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }
  return total;
}

ModelWeights init_weights(const MlpArchitecture& arch, std::uint64_t seed) {
  Rng rng(seed);
  const auto sizes = layer_sizes(arch);
  ModelWeights w;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double s = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> dist(-s, s);
    std::vector<double> mat(static_cast<std::size_t>(in) * out);
    for (double& v : mat) v = dist(rng);
    w.weights.push_back(std::move(mat));
    w.biases.emplace_back(out, 0.0);
    w.in_size.push_back(in);
    w.out_size.push_back(out);
  }
  return w;
}

std::vector<double> forward(const MlpArchitecture& arch, const ModelWeights& w,
                            const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != arch.input_dim) {
    throw std::invalid_argument("forward: input size does not match architecture");
  }
  std::vector<double> cur = x;
  for (std::size_t l = 0; l < w.layers(); ++l) {
    std::vector<double> next(w.out_size[l]);
    matvec(w.weights[l], w.biases[l], w.out_size[l], w.in_size[l], cur.data(), next.data());
    if (l + 1 < w.layers()) {
      for (double& v : next) v = activate(arch.activation, v);
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> forward_dropout(const MlpArchitecture& arch, const ModelWeights& w,
                                    const std::vector<double>& x, double p, Rng& rng) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("dropout probability must be in [0,1)");
  if (static_cast<int>(x.size()) != arch.input_dim) {
    throw std::invalid_argument("forward_dropout: input size does not match architecture");
  }
  const double keep_scale = 1.0 / (1.0 - p);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cur = x;
  for (std::size_t l = 0; l < w.layers(); ++l) {
    std::vector<double> next(w.out_size[l]);
    matvec(w.weights[l], w.biases[l], w.out_size[l], w.in_size[l], cur.data(), next.data());
    if (l + 1 < w.layers()) {
      for (double& v : next) {
        v = activate(arch.activation, v);
        if (p > 0.0) v = (unit(rng) < p) ? 0.0 : v * keep_scale;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

TrainResult train(const MlpArchitecture& arch, const Dataset& data, const TrainingConfig& cfg) {
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
  if (cfg.batch_size < 1 || cfg.batch_size > static_cast<int>(data.size())) {
    throw std::invalid_argument("train: batch size must be in [1, |dataset|]");
  }

  TrainResult result;
  result.weights = init_weights(arch, cfg.seed);
  ModelWeights& w = result.weights;
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

  const std::size_t layers = w.layers();
  const double p = arch.dropout_prob;
  const double keep_scale = p > 0.0 ? 1.0 / (1.0 - p) : 1.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  // Per-layer buffers reused across samples.
  std::vector<std::vector<double>> pre(layers), post(layers + 1), mask(layers);
  std::vector<std::vector<double>> grad_w(layers), grad_b(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l].resize(w.out_size[l]);
    mask[l].resize(w.out_size[l]);
    grad_w[l].resize(w.weights[l].size());
    grad_b[l].resize(w.biases[l].size());
  }

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < data.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(start + cfg.batch_size, data.size());
      const double batch = static_cast<double>(end - start);
      for (std::size_t l = 0; l < layers; ++l) {
        std::fill(grad_w[l].begin(), grad_w[l].end(), 0.0);
        std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
      }

      for (std::size_t s = start; s < end; ++s) {
        const std::size_t idx = order[s];
        post[0] = data.inputs[idx];
        for (std::size_t l = 0; l < layers; ++l) {
          matvec(w.weights[l], w.biases[l], w.out_size[l], w.in_size[l], post[l].data(),
                 pre[l].data());
          post[l + 1].resize(w.out_size[l]);
          if (l + 1 < layers) {
            for (int j = 0; j < w.out_size[l]; ++j) {
              double v = activate(arch.activation, pre[l][j]);
              double m = 1.0;
              if (p > 0.0) m = (unit(rng) < p) ? 0.0 : keep_scale;
              mask[l][j] = m;
              post[l + 1][j] = v * m;
            }
          } else {
            post[l + 1].assign(pre[l].begin(), pre[l].end());
          }
        }

        // delta at output: d/dy of ||y - z||^2 / batch
        const auto& target = data.targets[idx];
        std::vector<double> delta(w.out_size[layers - 1]);
        for (int j = 0; j < w.out_size[layers - 1]; ++j) {
          delta[j] = 2.0 * (post[layers][j] - target[j]) / batch;
        }

        for (std::size_t li = layers; li-- > 0;) {
          for (int r = 0; r < w.out_size[li]; ++r) {
            grad_b[li][r] += delta[r];
            kernels::axpy(delta[r], post[li].data(),
                          grad_w[li].data() + static_cast<std::size_t>(r) * w.in_size[li],
                          static_cast<std::size_t>(w.in_size[li]));
          }
          if (li == 0) break;
          std::vector<double> prev_delta(w.in_size[li], 0.0);
          for (int r = 0; r < w.out_size[li]; ++r) {
            kernels::axpy(delta[r],
                          w.weights[li].data() + static_cast<std::size_t>(r) * w.in_size[li],
                          prev_delta.data(), static_cast<std::size_t>(w.in_size[li]));
          }
          // Through dropout mask and activation of layer li-1.
          const std::size_t hl = li - 1;
          for (int j = 0; j < w.out_size[hl]; ++j) {
            const double act_post = post[hl + 1][j] * (mask[hl][j] != 0.0 ? 1.0 / mask[hl][j] : 0.0);
            prev_delta[j] *= mask[hl][j] * activate_grad(arch.activation, pre[hl][j], act_post);
          }
          delta = std::move(prev_delta);
        }
      }

      for (std::size_t l = 0; l < layers; ++l) {
        kernels::axpy(-cfg.learning_rate, grad_w[l].data(), w.weights[l].data(),
                      grad_w[l].size());
        kernels::axpy(-cfg.learning_rate, grad_b[l].data(), w.biases[l].data(),
                      grad_b[l].size());
      }
    }

    // Divergence check once per epoch on the first weight block.
    for (std::size_t l = 0; l < layers && !result.diverged; ++l) {
      for (const double v : w.weights[l]) {
        if (!std::isfinite(v)) {
          result.diverged = true;
          break;
        }
      }
    }
    if (result.diverged) break;
  }

  if (!result.diverged) {
    const double final_loss = inner_loss(arch, w, data);
    if (!std::isfinite(final_loss)) result.diverged = true;
  }
  return result;
}

double inner_loss(const MlpArchitecture& arch, const ModelWeights& w, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("inner_loss: empty dataset");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto y = forward(arch, w, data.inputs[i]);
    total += kernels::squared_distance(y.data(), data.targets[i].data(), y.size());
  }
  return total / static_cast<double>(data.size());
}

}  // namespace surropt
