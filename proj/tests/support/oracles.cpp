#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace calf::test {

KernelFeatures naive_rocket_features(const std::vector<double>& series,
                                     const RocketKernel& kernel) {
  const int span = (kernel.length - 1) * kernel.dilation;
  const int pad = kernel.padding ? span / 2 : 0;

  std::vector<double> padded(series.size() + 2 * static_cast<std::size_t>(pad), 0.0);
  std::copy(series.begin(), series.end(), padded.begin() + pad);

  const int out_len = static_cast<int>(padded.size()) - span;
  KernelFeatures features;
  features.max_value = -std::numeric_limits<double>::infinity();
  int positive = 0;
  for (int i = 0; i < out_len; ++i) {
    double sum = kernel.bias;
    for (int j = 0; j < kernel.length; ++j) {
      sum += kernel.weights[static_cast<std::size_t>(j)] *
             padded[static_cast<std::size_t>(i + j * kernel.dilation)];
    }
    features.max_value = std::max(features.max_value, sum);
    if (sum > 0.0) ++positive;
  }
  features.ppv = static_cast<double>(positive) / static_cast<double>(out_len);
  return features;
}

void dense_ridge_oracle(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                        const Eigen::VectorXd& sample_weights, double alpha, bool fit_intercept,
                        Eigen::MatrixXd& W, Eigen::VectorXd& intercepts) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Eigen::Index k = Y.cols();
  const Eigen::MatrixXd S = sample_weights.asDiagonal();

  if (fit_intercept) {
    Eigen::MatrixXd A(n, p + 1);
    A.leftCols(p) = X;
    A.col(p).setOnes();
    Eigen::MatrixXd lhs = A.transpose() * S * A;
    for (Eigen::Index j = 0; j < p; ++j) lhs(j, j) += alpha;  // intercept unpenalized
    const Eigen::MatrixXd rhs = A.transpose() * S * Y;
    const Eigen::MatrixXd theta = lhs.ldlt().solve(rhs);
    W = theta.topRows(p);
    intercepts = theta.row(p).transpose();
  } else {
    Eigen::MatrixXd lhs = X.transpose() * S * X;
    lhs.diagonal().array() += alpha;
    const Eigen::MatrixXd rhs = X.transpose() * S * Y;
    W = lhs.ldlt().solve(rhs);
    intercepts = Eigen::VectorXd::Zero(k);
  }
}

namespace {

double subset_deviation(const Dataset& dataset, const std::set<std::string>& test_calves,
                        double target, CountBasis basis) {
  // quantity per (label, side): side 0 = test, side 1 = train
  std::map<std::string, double> test_q, train_q;
  std::map<std::string, std::set<std::pair<std::string, std::string>>> test_segs, train_segs;
  for (const auto& w : dataset.windows()) {
    const bool in_test = test_calves.count(w.calf_id) > 0;
    switch (basis) {
      case CountBasis::kWindows:
        (in_test ? test_q : train_q)[w.behaviour_label] += 1.0;
        break;
      case CountBasis::kDuration:
        (in_test ? test_q : train_q)[w.behaviour_label] += static_cast<double>(w.length);
        break;
      case CountBasis::kSegments:
        (in_test ? test_segs : train_segs)[w.behaviour_label].insert(
            {w.calf_id, w.segment_id});
        break;
    }
  }
  if (basis == CountBasis::kSegments) {
    for (const auto& [label, segs] : test_segs) test_q[label] = static_cast<double>(segs.size());
    for (const auto& [label, segs] : train_segs) train_q[label] = static_cast<double>(segs.size());
  }

  double sum = 0.0;
  int included = 0;
  for (const auto& label : dataset.label_set()) {
    const double te = test_q.count(label) ? test_q[label] : 0.0;
    const double tr = train_q.count(label) ? train_q[label] : 0.0;
    if (te == 0.0 && tr == 0.0) continue;
    if (tr <= 0.0) return std::numeric_limits<double>::infinity();
    sum += std::abs(te / tr - target);
    ++included;
  }
  if (included == 0) return std::numeric_limits<double>::infinity();
  return sum / static_cast<double>(included);
}

void enumerate(const std::vector<std::string>& calves, std::size_t k, std::size_t start,
               std::vector<std::string>& current, const Dataset& dataset, double target,
               CountBasis basis, std::vector<std::string>& best, double& best_dev) {
  if (current.size() == k) {
    const double dev =
        subset_deviation(dataset, {current.begin(), current.end()}, target, basis);
    if (std::isinf(dev)) return;
    if (dev < best_dev || (dev == best_dev && current < best)) {
      best_dev = dev;
      best = current;
    }
    return;
  }
  for (std::size_t i = start; i < calves.size(); ++i) {
    current.push_back(calves[i]);
    enumerate(calves, k, i + 1, current, dataset, target, basis, best, best_dev);
    current.pop_back();
  }
}

}  // namespace

std::pair<std::vector<std::string>, double> brute_force_best_split(const Dataset& dataset,
                                                                   std::size_t k, double target,
                                                                   CountBasis basis) {
  const auto calves = dataset.calves();
  std::vector<std::string> best;
  double best_dev = std::numeric_limits<double>::infinity();
  std::vector<std::string> current;
  enumerate(calves, k, 0, current, dataset, target, basis, best, best_dev);
  return {best, best_dev};
}

}  // namespace calf::test
