#include "acbench/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "acbench/error.hpp"
#include "acbench/model_io.hpp"
#include "acbench/random.hpp"

namespace acbench::learn {

std::string_view to_string(Activation a) { return a == Activation::Relu ? "relu" : "tanh"; }

Activation parse_activation(std::string_view text) {
  if (text == "relu") return Activation::Relu;
  if (text == "tanh") return Activation::Tanh;
  throw InvalidArgument("unknown activation '" + std::string(text) + "'");
}

MlpNetwork::MlpNetwork(std::size_t inputs, std::size_t hidden1, std::size_t hidden2,
                       std::size_t outputs, Activation activation)
    : sizes_{inputs, hidden1, hidden2, outputs}, activation_(activation) {
  if (inputs == 0 || hidden1 == 0 || hidden2 == 0 || outputs == 0) {
    throw InvalidArgument("mlp: layer sizes must be >= 1");
  }
  params_.assign(offset(3, false), 0.0);
}

std::size_t MlpNetwork::offset(int layer, bool bias) const noexcept {
  // offset(l, false) is the start of W_{l+1}; offset(3, false) the total size.
  std::size_t o = 0;
  for (int l = 0; l < layer; ++l) o += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  if (bias && layer < 3) o += sizes_[layer + 1] * sizes_[layer];
  return o;
}

void MlpNetwork::initialize(std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::fill(params_.begin(), params_.end(), 0.0);
  for (int l = 0; l < 3; ++l) {
    const auto fan_in = static_cast<double>(sizes_[l]);
    const auto fan_out = static_cast<double>(sizes_[l + 1]);
    const bool head = l == 2;
    const double sd = activation_ == Activation::Relu && !head ? std::sqrt(2.0 / fan_in)
                                                               : std::sqrt(2.0 / (fan_in + fan_out));
    std::normal_distribution<double> dist(0.0, sd);
    const std::size_t w = offset(l, false);
    for (std::size_t i = 0; i < sizes_[l + 1] * sizes_[l]; ++i) params_[w + i] = dist(rng);
  }
}

namespace {

double act(Activation a, double z) { return a == Activation::Relu ? std::max(z, 0.0) : std::tanh(z); }

// Derivative expressed through the activation output.
double act_grad(Activation a, double out) {
  return a == Activation::Relu ? (out > 0.0 ? 1.0 : 0.0) : 1.0 - out * out;
}

// out = W in + b for one layer.
void affine(std::span<const double> params, std::size_t w, std::size_t b, std::size_t n_out,
            std::size_t n_in, std::span<const double> in, std::span<double> out) {
  for (std::size_t o = 0; o < n_out; ++o) {
    const double* row = params.data() + w + o * n_in;
    double s = params[b + o];
    for (std::size_t i = 0; i < n_in; ++i) s += row[i] * in[i];
    out[o] = s;
  }
}

void softmax_inplace(std::span<double> s) {
  const double m = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (double& v : s) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : s) v /= z;
}

}  // namespace

std::vector<double> MlpNetwork::forward(std::span<const double> x) const {
  std::vector<double> h1(sizes_[1]);
  std::vector<double> h2(sizes_[2]);
  std::vector<double> out(sizes_[3]);
  affine(params_, offset(0, false), offset(0, true), sizes_[1], sizes_[0], x, h1);
  for (double& v : h1) v = act(activation_, v);
  affine(params_, offset(1, false), offset(1, true), sizes_[2], sizes_[1], h1, h2);
  for (double& v : h2) v = act(activation_, v);
  affine(params_, offset(2, false), offset(2, true), sizes_[3], sizes_[2], h2, out);
  softmax_inplace(out);
  return out;
}

double MlpNetwork::loss_and_gradient(const Matrix& x, std::span<const int> y,
                                     std::span<const std::size_t> rows, double l2,
                                     std::vector<double>* grad) const {
  const std::size_t n0 = sizes_[0], n1 = sizes_[1], n2 = sizes_[2], n3 = sizes_[3];
  const std::size_t w1 = offset(0, false), b1 = offset(0, true);
  const std::size_t w2 = offset(1, false), b2 = offset(1, true);
  const std::size_t w3 = offset(2, false), b3 = offset(2, true);
  if (grad) grad->assign(params_.size(), 0.0);

  std::vector<double> h1(n1), h2(n2), out(n3), d3(n3), d2(n2), d1(n1);
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  for (std::size_t r : rows) {
    const auto xi = x.row(r);
    affine(params_, w1, b1, n1, n0, xi, h1);
    for (double& v : h1) v = act(activation_, v);
    affine(params_, w2, b2, n2, n1, h1, h2);
    for (double& v : h2) v = act(activation_, v);
    affine(params_, w3, b3, n3, n2, h2, out);
    softmax_inplace(out);
    const auto label = static_cast<std::size_t>(y[r]);
    loss -= std::log(std::max(out[label], 1e-300));
    if (!grad) continue;

    auto& g = *grad;
    for (std::size_t o = 0; o < n3; ++o) d3[o] = (out[o] - (o == label ? 1.0 : 0.0)) * inv_b;
    std::fill(d2.begin(), d2.end(), 0.0);
    for (std::size_t o = 0; o < n3; ++o) {
      g[b3 + o] += d3[o];
      for (std::size_t i = 0; i < n2; ++i) {
        g[w3 + o * n2 + i] += d3[o] * h2[i];
        d2[i] += params_[w3 + o * n2 + i] * d3[o];
      }
    }
    for (std::size_t i = 0; i < n2; ++i) d2[i] *= act_grad(activation_, h2[i]);
    std::fill(d1.begin(), d1.end(), 0.0);
    for (std::size_t o = 0; o < n2; ++o) {
      g[b2 + o] += d2[o];
      for (std::size_t i = 0; i < n1; ++i) {
        g[w2 + o * n1 + i] += d2[o] * h1[i];
        d1[i] += params_[w2 + o * n1 + i] * d2[o];
      }
    }
    for (std::size_t i = 0; i < n1; ++i) d1[i] *= act_grad(activation_, h1[i]);
    for (std::size_t o = 0; o < n1; ++o) {
      if (d1[o] == 0.0) continue;
      g[b1 + o] += d1[o];
      double* gw = g.data() + w1 + o * n0;
      for (std::size_t i = 0; i < n0; ++i) gw[i] += d1[o] * xi[i];
    }
  }
  loss *= inv_b;

  if (l2 > 0.0) {
    double sq = 0.0;
    for (const auto& [w, count] : {std::pair{w1, n1 * n0}, std::pair{w2, n2 * n1}, std::pair{w3, n3 * n2}}) {
      for (std::size_t i = 0; i < count; ++i) {
        sq += params_[w + i] * params_[w + i];
        if (grad) (*grad)[w + i] += l2 * params_[w + i];
      }
    }
    loss += 0.5 * l2 * sq;
  }
  return loss;
}

MlpModel::MlpModel(MlpNetwork net, std::vector<double> loss_history)
    : net_(std::move(net)), history_(std::move(loss_history)) {}

std::vector<double> MlpModel::predict_proba(std::span<const double> x) const { return net_.forward(x); }

void MlpModel::save_body(ModelWriter& out) const {
  out.key("layers");
  out.value(static_cast<std::int64_t>(net_.inputs()));
  out.value(static_cast<std::int64_t>(net_.hidden1()));
  out.value(static_cast<std::int64_t>(net_.hidden2()));
  out.newline();
  out.field("activation", to_string(net_.activation()));
  out.vector("loss", history_);
  out.vector("parameters", net_.parameters());
}

std::shared_ptr<const MlpModel> MlpModel::load(ModelReader& in, int class_count) {
  in.expect("layers");
  const auto n0 = in.integer();
  const auto n1 = in.integer();
  const auto n2 = in.integer();
  if (n0 < 1 || n1 < 1 || n2 < 1) throw FormatError("mlp model: bad layer sizes");
  const auto activation = parse_activation(in.field_string("activation"));
  MlpNetwork net(static_cast<std::size_t>(n0), static_cast<std::size_t>(n1), static_cast<std::size_t>(n2),
                 static_cast<std::size_t>(class_count), activation);
  auto history = in.vector_real("loss");
  const auto params = in.vector_real("parameters");
  if (params.size() != net.parameter_count()) throw FormatError("mlp model: parameter count mismatch");
  std::copy(params.begin(), params.end(), net.parameters().begin());
  return std::make_shared<MlpModel>(std::move(net), std::move(history));
}

std::shared_ptr<const MlpModel> mlp_train(const Matrix& x, std::span<const int> y,
                                          const MlpParams& params, int class_count) {
  if (class_count == 0) class_count = infer_class_count(y);
  check_training_data(x, y, class_count);
  if (params.hidden1 < 1 || params.hidden2 < 1) throw InvalidArgument("mlp: layer sizes must be >= 1");
  if (params.epochs < 1) throw InvalidArgument("mlp: epochs must be >= 1");
  if (params.batch_size < 1) throw InvalidArgument("mlp: batch_size must be >= 1");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
    throw InvalidArgument("mlp: learning_rate must lie in (0, 1]");
  }
  if (params.momentum < 0.0 || params.momentum >= 1.0) throw InvalidArgument("mlp: momentum must lie in [0, 1)");

  MlpNetwork net(x.cols(), static_cast<std::size_t>(params.hidden1), static_cast<std::size_t>(params.hidden2),
                 static_cast<std::size_t>(class_count), params.activation);
  net.initialize(derive_seed(params.seed, 1));
  Rng rng = make_rng(derive_seed(params.seed, 2));

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> velocity(net.parameter_count(), 0.0);
  std::vector<double> grad;
  std::vector<double> history;
  const auto batch = static_cast<std::size_t>(params.batch_size);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::span<const std::size_t> rows(order.data() + start, std::min(batch, order.size() - start));
      const double loss = net.loss_and_gradient(x, y, rows, params.l2, &grad);
      if (!std::isfinite(loss)) {
        throw ConvergenceError(fmt::format(
            "mlp: loss became non-finite at epoch {} (batch starting at {}); learning_rate {} may be too high",
            epoch, start, params.learning_rate));
      }
      total += loss * static_cast<double>(rows.size());
      auto p = net.parameters();
      for (std::size_t i = 0; i < p.size(); ++i) {
        velocity[i] = params.momentum * velocity[i] - params.learning_rate * grad[i];
        p[i] += velocity[i];
      }
    }
    history.push_back(total / static_cast<double>(order.size()));
  }
  return std::make_shared<MlpModel>(std::move(net), std::move(history));
}

}  // namespace acbench::learn
