#include "calf/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "calf/error.hpp"
#include "calf/rng.hpp"

namespace calf {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double relu(double x) { return x > 0.0 ? x : 0.0; }

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) throw ValidationError("softmax of an empty vector");
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

Optimizer optimizer_from_name(const std::string& name) {
  if (name == "adadelta") return Optimizer::kAdadelta;
  if (name == "sgd") return Optimizer::kSgd;
  if (name == "adam") return Optimizer::kAdam;
  throw ValidationError("unknown optimizer: '" + name + "'");
}

const std::string& optimizer_name(Optimizer opt) {
  static const std::string kNames[] = {"adadelta", "sgd", "adam"};
  return kNames[static_cast<int>(opt)];
}

MlpNetwork MlpNetwork::initialized(const std::vector<std::size_t>& layer_sizes,
                                   std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ValidationError("a network needs input and output layers");
  for (const std::size_t s : layer_sizes) {
    if (s == 0) throw ValidationError("layer sizes must be positive");
  }
  Rng rng(seed);
  MlpNetwork net;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(layer_sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
    const double limit = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Eigen::MatrixXd W(fan_in, fan_out);
    for (Eigen::Index i = 0; i < fan_in; ++i) {
      for (Eigen::Index j = 0; j < fan_out; ++j) {
        W(i, j) = rng.uniform(-limit, limit);
      }
    }
    net.weights.push_back(std::move(W));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

std::vector<std::size_t> MlpNetwork::layer_sizes() const {
  std::vector<std::size_t> sizes;
  if (weights.empty()) return sizes;
  sizes.push_back(static_cast<std::size_t>(weights.front().rows()));
  for (const auto& W : weights) sizes.push_back(static_cast<std::size_t>(W.cols()));
  return sizes;
}

namespace {

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd P(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
    P.row(i) = e / e.sum();
  }
  return P;
}

double cross_entropy_from_logits(const Eigen::MatrixXd& logits, const std::vector<int>& y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    loss += lse - logits(i, y[static_cast<std::size_t>(i)]);
  }
  return loss / static_cast<double>(logits.rows());
}

// Forward + backward shared by training (with dropout masks) and the public
// gradient API (masks empty). Masks hold 0 or 1/(1-p) and multiply hidden
// activations; the same mask gates the gradient on the way back.
double backprop(const MlpNetwork& net, const Eigen::MatrixXd& X, const std::vector<int>& y,
                const std::vector<Eigen::MatrixXd>& masks, std::vector<Eigen::MatrixXd>& grad_w,
                std::vector<Eigen::VectorXd>& grad_b) {
  const std::size_t layers = net.weights.size();
  std::vector<Eigen::MatrixXd> pre(layers);
  std::vector<Eigen::MatrixXd> act(layers);  // act[l] = input to layer l
  act[0] = X;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    pre[l] = (act[l] * net.weights[l]).rowwise() + net.biases[l].transpose();
    Eigen::MatrixXd a = pre[l].cwiseMax(0.0);
    if (!masks.empty()) a = a.cwiseProduct(masks[l]);
    act[l + 1] = std::move(a);
  }
  const Eigen::MatrixXd logits =
      (act[layers - 1] * net.weights[layers - 1]).rowwise() + net.biases[layers - 1].transpose();

  const double loss = cross_entropy_from_logits(logits, y);
  const double n = static_cast<double>(X.rows());

  Eigen::MatrixXd delta = row_softmax(logits);
  for (Eigen::Index i = 0; i < delta.rows(); ++i) {
    delta(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  }
  delta /= n;

  grad_w.resize(layers);
  grad_b.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    grad_w[l] = act[l].transpose() * delta;
    grad_b[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * net.weights[l].transpose();
      if (!masks.empty()) delta = delta.cwiseProduct(masks[l - 1]);
      delta = delta.cwiseProduct((pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return loss;
}

}  // namespace

Eigen::MatrixXd MlpNetwork::forward_logits(const Eigen::MatrixXd& X) const {
  if (weights.empty()) throw ValidationError("network has no layers");
  if (X.cols() != weights.front().rows()) {
    throw ValidationError("input width " + std::to_string(X.cols()) +
                          " does not match the network (" + std::to_string(weights.front().rows()) +
                          ")");
  }
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l + 1 < weights.size(); ++l) {
    a = ((a * weights[l]).rowwise() + biases[l].transpose()).cwiseMax(0.0);
  }
  return (a * weights.back()).rowwise() + biases.back().transpose();
}

double MlpNetwork::mean_cross_entropy(const Eigen::MatrixXd& X, const std::vector<int>& y) const {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ValidationError("sample count and label count disagree");
  }
  return cross_entropy_from_logits(forward_logits(X), y);
}

void MlpNetwork::gradients(const Eigen::MatrixXd& X, const std::vector<int>& y,
                           std::vector<Eigen::MatrixXd>& grad_w,
                           std::vector<Eigen::VectorXd>& grad_b) const {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ValidationError("sample count and label count disagree");
  }
  backprop(*this, X, y, {}, grad_w, grad_b);
}

namespace {

std::vector<int> encode(const std::vector<std::string>& labels,
                        const std::vector<std::string>& label_order) {
  std::vector<int> encoded;
  encoded.reserve(labels.size());
  for (const auto& label : labels) {
    const auto it = std::find(label_order.begin(), label_order.end(), label);
    if (it == label_order.end()) {
      throw ValidationError("label '" + label + "' is not in the label order");
    }
    encoded.push_back(static_cast<int>(it - label_order.begin()));
  }
  return encoded;
}

// Two accumulators per tensor; their meaning depends on the optimizer
// (adadelta: squared-gradient and squared-update averages; adam: first and
// second moments; sgd: velocity and unused).
struct OptimizerState {
  std::vector<Eigen::MatrixXd> a, b;
};

void apply_update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, Eigen::MatrixXd& s1,
                  Eigen::MatrixXd& s2, const MlpConfig& cfg, double lr, std::size_t step) {
  switch (cfg.optimizer) {
    case Optimizer::kSgd: {
      if (cfg.momentum != 0.0) {
        s1 = cfg.momentum * s1 - lr * grad;
        param += s1;
      } else {
        param -= lr * grad;
      }
      break;
    }
    case Optimizer::kAdam: {
      s1 = cfg.beta1 * s1 + (1.0 - cfg.beta1) * grad;
      s2 = cfg.beta2 * s2 + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      param.array() -=
          lr * (s1.array() / c1) / ((s2.array() / c2).sqrt() + cfg.epsilon);
      break;
    }
    case Optimizer::kAdadelta: {
      s1 = cfg.rho * s1 + (1.0 - cfg.rho) * grad.cwiseProduct(grad);
      const Eigen::ArrayXXd update = -((s2.array() + cfg.epsilon).sqrt() /
                                       (s1.array() + cfg.epsilon).sqrt()) *
                                     grad.array();
      s2 = cfg.rho * s2 + (1.0 - cfg.rho) * (update * update).matrix();
      param.array() += lr * update;
      break;
    }
  }
}

}  // namespace

MlpModel train_mlp(const Eigen::MatrixXd& X, const std::vector<std::string>& labels,
                   const std::vector<std::string>& label_order, const MlpConfig& config,
                   const Eigen::MatrixXd* X_val, const std::vector<std::string>* y_val) {
  if (static_cast<std::size_t>(X.rows()) != labels.size()) {
    throw ValidationError("sample count and label count disagree");
  }
  if (X.rows() == 0) throw ValidationError("no training samples");
  if (label_order.size() < 2) throw ValidationError("need at least 2 classes");
  if (config.batch_size == 0) throw ValidationError("batch size must be positive");
  if (!(config.dropout_rate >= 0.0 && config.dropout_rate < 1.0)) {
    throw ValidationError("dropout rate must lie in [0, 1)");
  }
  if (!(config.learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (config.hidden_sizes.empty()) throw ValidationError("at least one hidden layer is required");
  if ((X_val == nullptr) != (y_val == nullptr)) {
    throw ValidationError("validation features and labels must come together");
  }
  if (!X.allFinite()) throw NumericalError("training features contain non-finite values");

  const std::vector<int> y = encode(labels, label_order);
  std::vector<int> y_val_idx;
  if (X_val != nullptr) {
    if (static_cast<std::size_t>(X_val->rows()) != y_val->size()) {
      throw ValidationError("validation sample count and label count disagree");
    }
    if (X_val->cols() != X.cols()) {
      throw ValidationError("validation feature width differs from training");
    }
    y_val_idx = encode(*y_val, label_order);
  }

  std::vector<std::size_t> sizes;
  sizes.push_back(static_cast<std::size_t>(X.cols()));
  for (const std::size_t h : config.hidden_sizes) sizes.push_back(h);
  sizes.push_back(label_order.size());

  MlpModel model;
  model.network = MlpNetwork::initialized(sizes, config.seed);
  model.label_order = label_order;
  model.config = config;

  auto& net = model.network;
  const std::size_t layers = net.weights.size();
  OptimizerState state_w, state_b;
  state_w.a.resize(layers);
  state_w.b.resize(layers);
  state_b.a.resize(layers);
  state_b.b.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    state_w.a[l] = Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols());
    state_w.b[l] = state_w.a[l];
    state_b.a[l] = Eigen::MatrixXd::Zero(net.biases[l].size(), 1);
    state_b.b[l] = state_b.a[l];
  }

  // One stream drives shuffling and dropout; its state advances identically
  // every run, so training is reproducible.
  Rng rng(config.seed + 1);
  const std::size_t n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  double lr = config.learning_rate;
  double best_monitored = std::numeric_limits<double>::infinity();
  std::size_t epochs_without_improvement = 0;
  std::size_t step = 0;
  const double keep = 1.0 - config.dropout_rate;

  std::vector<Eigen::MatrixXd> grad_w;
  std::vector<Eigen::VectorXd> grad_b;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);

    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, n - start);
      Eigen::MatrixXd Xb(static_cast<Eigen::Index>(count), X.cols());
      std::vector<int> yb(count);
      for (std::size_t i = 0; i < count; ++i) {
        Xb.row(static_cast<Eigen::Index>(i)) =
            X.row(static_cast<Eigen::Index>(order[start + i]));
        yb[i] = y[order[start + i]];
      }

      std::vector<Eigen::MatrixXd> masks;
      if (config.dropout_rate > 0.0) {
        masks.resize(layers - 1);
        for (std::size_t l = 0; l + 1 < layers; ++l) {
          Eigen::MatrixXd mask(static_cast<Eigen::Index>(count), net.weights[l].cols());
          for (Eigen::Index r = 0; r < mask.rows(); ++r) {
            for (Eigen::Index c = 0; c < mask.cols(); ++c) {
              mask(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
            }
          }
          masks[l] = std::move(mask);
        }
      }

      const double batch_loss = backprop(net, Xb, yb, masks, grad_w, grad_b);
      if (!std::isfinite(batch_loss)) {
        throw NumericalError("training loss diverged at epoch " + std::to_string(epoch + 1));
      }
      epoch_loss += batch_loss * static_cast<double>(count);
      seen += count;

      ++step;
      for (std::size_t l = 0; l < layers; ++l) {
        apply_update(net.weights[l], grad_w[l], state_w.a[l], state_w.b[l], config, lr, step);
        Eigen::MatrixXd gb = grad_b[l];
        Eigen::MatrixXd bias = net.biases[l];
        apply_update(bias, gb, state_b.a[l], state_b.b[l], config, lr, step);
        net.biases[l] = bias;
      }
    }

    EpochStats stats;
    stats.train_loss = epoch_loss / static_cast<double>(seen);
    stats.learning_rate = lr;
    stats.validation_loss = std::numeric_limits<double>::quiet_NaN();
    if (X_val != nullptr) {
      stats.validation_loss = net.mean_cross_entropy(*X_val, y_val_idx);
      if (!std::isfinite(stats.validation_loss)) {
        throw NumericalError("validation loss diverged at epoch " + std::to_string(epoch + 1));
      }
    }
    model.history.push_back(stats);

    const double monitored = X_val != nullptr ? stats.validation_loss : stats.train_loss;
    if (monitored < best_monitored) {
      best_monitored = monitored;
      epochs_without_improvement = 0;
    } else {
      ++epochs_without_improvement;
      if (epochs_without_improvement >= config.plateau_patience) {
        lr = std::max(lr * config.plateau_factor, config.min_learning_rate);
        epochs_without_improvement = 0;
      }
    }
  }
  return model;
}

Eigen::MatrixXd mlp_predict_proba(const MlpModel& model, const Eigen::MatrixXd& X) {
  return row_softmax(model.network.forward_logits(X));
}

std::vector<std::string> mlp_predict(const MlpModel& model, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd logits = model.network.forward_logits(X);
  std::vector<std::string> predictions;
  predictions.reserve(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    int best = 0;
    double best_value = logits(i, 0);
    for (Eigen::Index k = 1; k < logits.cols(); ++k) {
      if (logits(i, k) > best_value) {
        best_value = logits(i, k);
        best = static_cast<int>(k);
      }
    }
    predictions.push_back(model.label_order[static_cast<std::size_t>(best)]);
  }
  return predictions;
}

}  // namespace calf
