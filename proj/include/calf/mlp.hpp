#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace calf {

double sigmoid(double x);
double relu(double x);
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

enum class Optimizer { kAdadelta, kSgd, kAdam };
Optimizer optimizer_from_name(const std::string& name);
const std::string& optimizer_name(Optimizer opt);

struct MlpConfig {
  std::vector<std::size_t> hidden_sizes = {500, 500, 500};
  double dropout_rate = 0.1;  // hidden activations, inverted dropout
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  Optimizer optimizer = Optimizer::kAdadelta;
  double learning_rate = 1.0;  // adadelta default; sgd/adam want smaller
  double rho = 0.95;           // adadelta accumulator decay
  double beta1 = 0.9;          // adam
  double beta2 = 0.999;        // adam
  double momentum = 0.0;       // sgd
  double epsilon = 1e-6;
  // Plateau schedule: after `patience` epochs without improvement of the
  // monitored loss (validation when available, else training), the learning
  // rate is multiplied by `factor`, never below `min_learning_rate`.
  std::size_t plateau_patience = 10;
  double plateau_factor = 0.5;
  double min_learning_rate = 1e-4;
  std::uint64_t seed = 0;
};

// Plain fully connected network: weights[l] is fan_in x fan_out. Forward and
// backward passes here are dropout-free; the trainer injects masks.
struct MlpNetwork {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) init, seeded.
  static MlpNetwork initialized(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

  std::vector<std::size_t> layer_sizes() const;

  // Rows of X are samples. Hidden layers apply ReLU; the returned matrix
  // holds output-layer logits.
  Eigen::MatrixXd forward_logits(const Eigen::MatrixXd& X) const;

  // Mean categorical cross-entropy of softmax(logits) against class indices.
  double mean_cross_entropy(const Eigen::MatrixXd& X, const std::vector<int>& y) const;

  // Analytic gradients of mean_cross_entropy w.r.t. every weight and bias.
  void gradients(const Eigen::MatrixXd& X, const std::vector<int>& y,
                 std::vector<Eigen::MatrixXd>& grad_w, std::vector<Eigen::VectorXd>& grad_b) const;
};

struct EpochStats {
  double train_loss = 0.0;
  double validation_loss = 0.0;  // NaN when no validation set
  double learning_rate = 0.0;
};

struct MlpModel {
  MlpNetwork network;
  std::vector<std::string> label_order;
  MlpConfig config;
  std::vector<EpochStats> history;
};

// Trains with seeded shuffling, mini-batches, inverted dropout on hidden
// activations and the configured optimizer. Identical inputs and config give
// identical models. A non-finite loss raises NumericalError naming the
// epoch. X_val/y_val may be null for no validation tracking.
MlpModel train_mlp(const Eigen::MatrixXd& X, const std::vector<std::string>& labels,
                   const std::vector<std::string>& label_order, const MlpConfig& config,
                   const Eigen::MatrixXd* X_val = nullptr,
                   const std::vector<std::string>* y_val = nullptr);

Eigen::MatrixXd mlp_predict_proba(const MlpModel& model, const Eigen::MatrixXd& X);
std::vector<std::string> mlp_predict(const MlpModel& model, const Eigen::MatrixXd& X);

}  // namespace calf
