#include "calf/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "calf/error.hpp"
#include "calf/eval.hpp"
#include "calf/rng.hpp"

namespace calf {

ClassWeight class_weight_from_name(const std::string& name) {
  if (name == "none") return ClassWeight::kNone;
  if (name == "balanced") return ClassWeight::kBalanced;
  throw ValidationError("unknown class weight mode: '" + name + "'");
}

const std::string& class_weight_name(ClassWeight cw) {
  static const std::string kNames[] = {"none", "balanced"};
  return kNames[static_cast<int>(cw)];
}

Scoring scoring_from_name(const std::string& name) {
  if (name == "macro_recall") return Scoring::kMacroRecall;
  if (name == "macro_f1") return Scoring::kMacroF1;
  if (name == "macro_precision") return Scoring::kMacroPrecision;
  throw ValidationError("unknown scoring: '" + name + "'");
}

const std::string& scoring_name(Scoring scoring) {
  static const std::string kNames[] = {"macro_recall", "macro_f1", "macro_precision"};
  return kNames[static_cast<int>(scoring)];
}

std::vector<double> default_alpha_grid() {
  std::vector<double> alphas(100);
  const double lo = 0.001, hi = 1000.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    alphas[i] = lo + (hi - lo) * static_cast<double>(i) / 99.0;
  }
  return alphas;
}

Eigen::VectorXd sample_weights(const std::vector<int>& labels, std::size_t class_count,
                               ClassWeight cw) {
  const std::size_t n = labels.size();
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  if (cw == ClassWeight::kNone) return weights;

  std::vector<std::size_t> counts(class_count, 0);
  for (const int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
      throw ValidationError("label index out of range");
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  std::size_t present = 0;
  for (const std::size_t c : counts) present += c > 0 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[static_cast<Eigen::Index>(i)] =
        static_cast<double>(n) /
        (static_cast<double>(present) * static_cast<double>(counts[labels[i]]));
  }
  return weights;
}

namespace {

// One eigendecomposition serving every alpha: the problem
//   min_W sum_i s_i || y_i - W^T x_i - b ||^2 + alpha ||W||_F^2
// is solved through whichever Gram matrix is smaller (features x features
// or samples x samples). The intercept stays unpenalized via weighted
// centering; coefficients, intercepts and validation scores for any alpha
// then cost only small matrix products.
class RidgeSweep {
 public:
  RidgeSweep(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const Eigen::VectorXd& weights,
             bool fit_intercept)
      : X_(X), fit_intercept_(fit_intercept) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    sqrt_w_ = weights.array().sqrt();
    const double total = weights.sum();

    if (fit_intercept_) {
      x_mean_ = X.transpose() * weights / total;
      y_mean_ = Y.transpose() * weights / total;
    } else {
      x_mean_ = Eigen::VectorXd::Zero(p);
      y_mean_ = Eigen::VectorXd::Zero(Y.cols());
    }

    Eigen::MatrixXd Yc = Y;
    if (fit_intercept_) Yc.rowwise() -= y_mean_.transpose();

    dual_ = p > n;
    if (dual_) {
      Eigen::MatrixXd G = X * X.transpose();
      if (fit_intercept_) {
        const Eigen::VectorXd v = X * x_mean_;
        G.colwise() -= v;
        G.rowwise() -= v.transpose();
        G.array() += x_mean_.squaredNorm();
      }
      G = sqrt_w_.asDiagonal() * G * sqrt_w_.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the sample Gram matrix failed");
      }
      basis_ = es.eigenvectors();
      eigenvalues_ = es.eigenvalues().cwiseMax(0.0);
      projected_ = basis_.transpose() * (sqrt_w_.asDiagonal() * Yc);
    } else {
      Eigen::MatrixXd A = X.transpose() * (weights.asDiagonal() * X);
      Eigen::MatrixXd R = X.transpose() * (weights.asDiagonal() * Y);
      if (fit_intercept_) {
        A.noalias() -= total * x_mean_ * x_mean_.transpose();
        R.noalias() -= total * x_mean_ * y_mean_.transpose();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition of the feature Gram matrix failed");
      }
      basis_ = es.eigenvectors();
      eigenvalues_ = es.eigenvalues().cwiseMax(0.0);
      projected_ = basis_.transpose() * R;
    }
  }

  // features x classes.
  Eigen::MatrixXd coefficients(double alpha) const {
    const Eigen::VectorXd g = (eigenvalues_.array() + alpha).inverse();
    if (dual_) {
      const Eigen::MatrixXd M = basis_ * (g.asDiagonal() * projected_);  // n x K
      Eigen::MatrixXd W = X_.transpose() * (sqrt_w_.asDiagonal() * M);
      if (fit_intercept_) W.noalias() -= x_mean_ * (sqrt_w_.transpose() * M);
      return W;
    }
    return basis_ * (g.asDiagonal() * projected_);
  }

  Eigen::VectorXd intercepts(const Eigen::MatrixXd& coefficients) const {
    if (!fit_intercept_) return Eigen::VectorXd::Zero(projected_.cols());
    return y_mean_ - coefficients.transpose() * x_mean_;
  }

  // Projection of evaluation rows onto the eigenbasis; one product per
  // evaluation set, reused across the whole alpha grid.
  Eigen::MatrixXd eval_basis(const Eigen::MatrixXd& X_eval) const {
    if (dual_) {
      Eigen::MatrixXd M = X_eval * X_.transpose();
      if (fit_intercept_) {
        const Eigen::VectorXd ue = X_eval * x_mean_;
        const Eigen::VectorXd v = X_ * x_mean_;
        M.colwise() -= ue;
        M.rowwise() -= v.transpose();
        M.array() += x_mean_.squaredNorm();
      }
      return M * (sqrt_w_.asDiagonal() * basis_);
    }
    Eigen::MatrixXd B = X_eval * basis_;
    if (fit_intercept_) B.rowwise() -= (basis_.transpose() * x_mean_).transpose();
    return B;
  }

  // eval rows x classes decision scores at the given alpha.
  Eigen::MatrixXd scores_from_basis(const Eigen::MatrixXd& eval_basis, double alpha) const {
    const Eigen::VectorXd g = (eigenvalues_.array() + alpha).inverse();
    Eigen::MatrixXd scores = eval_basis * (g.asDiagonal() * projected_);
    scores.rowwise() += y_mean_.transpose();
    return scores;
  }

 private:
  const Eigen::MatrixXd& X_;
  bool fit_intercept_;
  bool dual_ = false;
  Eigen::VectorXd sqrt_w_;
  Eigen::VectorXd x_mean_;
  Eigen::VectorXd y_mean_;
  Eigen::MatrixXd basis_;        // eigenvectors (samples side or features side)
  Eigen::VectorXd eigenvalues_;  // clamped at zero
  Eigen::MatrixXd projected_;    // eigenbasis^T of the (weighted, centered) targets
};

std::vector<int> encode_labels(const std::vector<std::string>& labels,
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

// +1/-1 one-vs-rest target matrix.
Eigen::MatrixXd make_targets(const std::vector<int>& labels, std::size_t class_count) {
  Eigen::MatrixXd Y = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(labels.size()),
                                                static_cast<Eigen::Index>(class_count), -1.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return Y;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void validate_common(const FeatureMatrix& features, const std::vector<std::string>& labels,
                     const std::vector<std::string>& label_order) {
  if (features.rows() != labels.size()) {
    throw ValidationError("feature rows (" + std::to_string(features.rows()) +
                          ") and labels (" + std::to_string(labels.size()) + ") disagree");
  }
  if (label_order.size() < 2) throw ValidationError("need at least 2 classes");
  if (!features.values.allFinite()) throw NumericalError("features contain non-finite values");
  std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw ValidationError("training labels contain fewer than 2 classes");
  }
}

int argmax_row(const Eigen::MatrixXd& scores, Eigen::Index row) {
  int best = 0;
  double best_value = scores(row, 0);
  for (Eigen::Index k = 1; k < scores.cols(); ++k) {
    if (scores(row, k) > best_value) {
      best_value = scores(row, k);
      best = static_cast<int>(k);
    }
  }
  return best;
}

}  // namespace

RidgeModel ridge_fit(const FeatureMatrix& features, const std::vector<std::string>& labels,
                     const std::vector<std::string>& label_order, const RidgeConfig& config,
                     const std::vector<IndexFold>& folds) {
  validate_common(features, labels, label_order);
  if (config.alphas.empty()) throw ValidationError("alpha grid is empty");
  for (const double alpha : config.alphas) {
    if (!(alpha > 0.0)) throw ValidationError("alphas must be positive");
  }
  if (config.alphas.size() > 1 && folds.empty()) {
    throw ValidationError("alpha selection over a grid needs validation folds");
  }

  const std::vector<int> encoded = encode_labels(labels, label_order);
  const std::size_t K = label_order.size();
  const Eigen::MatrixXd Y = make_targets(encoded, K);

  double best_alpha = config.alphas.front();
  if (config.alphas.size() > 1) {
    std::vector<double> mse(config.alphas.size(), 0.0);
    for (const auto& [train_rows, val_rows] : folds) {
      if (train_rows.empty() || val_rows.empty()) {
        throw ValidationError("folds must have non-empty train and validation sides");
      }
      std::set<std::size_t> train_set(train_rows.begin(), train_rows.end());
      for (const std::size_t r : val_rows) {
        if (r >= features.rows()) throw ValidationError("fold row index out of range");
        if (train_set.count(r)) {
          throw ValidationError("row " + std::to_string(r) +
                                " appears on both sides of a fold");
        }
      }
      for (const std::size_t r : train_rows) {
        if (r >= features.rows()) throw ValidationError("fold row index out of range");
      }

      const Eigen::MatrixXd X_train = select_rows(features.values, train_rows);
      const Eigen::MatrixXd Y_train = select_rows(Y, train_rows);
      const Eigen::MatrixXd X_val = select_rows(features.values, val_rows);
      const Eigen::MatrixXd Y_val = select_rows(Y, val_rows);

      std::vector<int> train_labels;
      train_labels.reserve(train_rows.size());
      for (const std::size_t r : train_rows) train_labels.push_back(encoded[r]);
      const Eigen::VectorXd weights = sample_weights(train_labels, K, config.class_weight);

      const RidgeSweep sweep(X_train, Y_train, weights, config.fit_intercept);
      const Eigen::MatrixXd basis = sweep.eval_basis(X_val);
      for (std::size_t a = 0; a < config.alphas.size(); ++a) {
        const Eigen::MatrixXd scores = sweep.scores_from_basis(basis, config.alphas[a]);
        mse[a] += (scores - Y_val).squaredNorm() / static_cast<double>(Y_val.size());
      }
    }
    std::size_t best = 0;
    for (std::size_t a = 1; a < mse.size(); ++a) {
      if (mse[a] < mse[best]) best = a;
    }
    best_alpha = config.alphas[best];
  }

  const Eigen::VectorXd weights = sample_weights(encoded, K, config.class_weight);
  const RidgeSweep sweep(features.values, Y, weights, config.fit_intercept);
  const Eigen::MatrixXd W = sweep.coefficients(best_alpha);
  if (!W.allFinite()) throw NumericalError("ridge coefficients are not finite");

  RidgeModel model;
  model.weights = W.transpose();
  model.intercepts = sweep.intercepts(W);
  model.alpha = best_alpha;
  model.class_weight = config.class_weight;
  model.fit_intercept = config.fit_intercept;
  model.label_order = label_order;
  return model;
}

Eigen::MatrixXd decision_scores(const RidgeModel& model, const FeatureMatrix& features) {
  if (static_cast<Eigen::Index>(features.cols()) != model.weights.cols()) {
    throw ValidationError("feature width " + std::to_string(features.cols()) +
                          " does not match the model (" + std::to_string(model.weights.cols()) +
                          ")");
  }
  Eigen::MatrixXd scores = features.values * model.weights.transpose();
  scores.rowwise() += model.intercepts.transpose();
  return scores;
}

std::vector<std::string> ridge_predict(const RidgeModel& model, const FeatureMatrix& features) {
  const Eigen::MatrixXd scores = decision_scores(model, features);
  std::vector<std::string> predictions;
  predictions.reserve(features.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    predictions.push_back(model.label_order[static_cast<std::size_t>(argmax_row(scores, i))]);
  }
  return predictions;
}

std::vector<RidgeCandidate> full_candidate_grid(const std::vector<double>& alphas,
                                                const std::vector<ClassWeight>& class_weights,
                                                const std::vector<bool>& intercept_options) {
  if (alphas.empty() || class_weights.empty() || intercept_options.empty()) {
    throw ValidationError("candidate grid axes must be non-empty");
  }
  std::vector<RidgeCandidate> grid;
  grid.reserve(alphas.size() * class_weights.size() * intercept_options.size());
  for (const double alpha : alphas) {
    for (const ClassWeight cw : class_weights) {
      for (const bool intercept : intercept_options) {
        grid.push_back({alpha, cw, intercept});
      }
    }
  }
  return grid;
}

std::vector<RidgeCandidate> sample_candidates(const std::vector<RidgeCandidate>& grid,
                                              std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ValidationError("candidate sample count must be positive");
  if (count >= grid.size()) return grid;
  std::vector<std::size_t> indices(grid.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(seed);
  // Partial Fisher-Yates: position i receives a uniform draw from [i, n).
  std::vector<RidgeCandidate> sampled;
  sampled.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_int(indices.size() - i);
    std::swap(indices[i], indices[j]);
    sampled.push_back(grid[indices[i]]);
  }
  return sampled;
}

GridSearchResult ridge_grid_search(const FeatureMatrix& features,
                                   const std::vector<std::string>& labels,
                                   const std::vector<std::string>& calf_ids,
                                   const std::vector<std::string>& label_order,
                                   const std::vector<RidgeCandidate>& candidates,
                                   const std::vector<SubjectFold>& folds, Scoring scoring) {
  validate_common(features, labels, label_order);
  if (calf_ids.size() != features.rows()) {
    throw ValidationError("calf ids and feature rows disagree");
  }
  if (candidates.empty()) throw ValidationError("no candidates to search");
  if (folds.empty()) throw ValidationError("grid search needs at least one fold");

  const std::vector<int> encoded = encode_labels(labels, label_order);
  const std::size_t K = label_order.size();
  const Eigen::MatrixXd Y = make_targets(encoded, K);

  // Row indices per fold, derived from calf ids.
  struct FoldRows {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
  };
  std::vector<FoldRows> fold_rows(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const std::set<std::string> train_calves(folds[f].train_calves.begin(),
                                             folds[f].train_calves.end());
    const std::set<std::string> val_calves(folds[f].validation_calves.begin(),
                                           folds[f].validation_calves.end());
    for (const auto& calf : val_calves) {
      if (train_calves.count(calf)) {
        throw LeakageError("calf '" + calf + "' appears on both sides of fold " +
                           std::to_string(f));
      }
    }
    for (std::size_t i = 0; i < calf_ids.size(); ++i) {
      if (train_calves.count(calf_ids[i])) {
        fold_rows[f].train.push_back(i);
      } else if (val_calves.count(calf_ids[i])) {
        fold_rows[f].val.push_back(i);
      }
    }
    if (fold_rows[f].train.empty() || fold_rows[f].val.empty()) {
      throw ValidationError("fold " + std::to_string(f) +
                            " has an empty train or validation side");
    }
  }

  GridSearchResult result;
  result.scoring = scoring;
  result.table.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    result.table[i].candidate = candidates[i];
    result.table[i].fold_scores.assign(folds.size(), 0.0);
  }

  // Candidates sharing (class_weight, fit_intercept) reuse one
  // decomposition per fold; only the alpha changes.
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& rows = fold_rows[f];
    const Eigen::MatrixXd X_train = select_rows(features.values, rows.train);
    const Eigen::MatrixXd Y_train = select_rows(Y, rows.train);
    const Eigen::MatrixXd X_val = select_rows(features.values, rows.val);

    std::vector<int> train_labels;
    train_labels.reserve(rows.train.size());
    for (const std::size_t r : rows.train) train_labels.push_back(encoded[r]);
    std::vector<std::string> val_labels;
    val_labels.reserve(rows.val.size());
    for (const std::size_t r : rows.val) val_labels.push_back(labels[r]);

    for (const ClassWeight cw : {ClassWeight::kNone, ClassWeight::kBalanced}) {
      for (const bool intercept : {false, true}) {
        bool wanted = false;
        for (const auto& cand : candidates) {
          if (cand.class_weight == cw && cand.fit_intercept == intercept) wanted = true;
        }
        if (!wanted) continue;

        const Eigen::VectorXd weights = sample_weights(train_labels, K, cw);
        const RidgeSweep sweep(X_train, Y_train, weights, intercept);
        const Eigen::MatrixXd basis = sweep.eval_basis(X_val);

        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
          const auto& cand = candidates[ci];
          if (cand.class_weight != cw || cand.fit_intercept != intercept) continue;
          const Eigen::MatrixXd scores = sweep.scores_from_basis(basis, cand.alpha);
          std::vector<std::string> predicted;
          predicted.reserve(val_labels.size());
          for (Eigen::Index r = 0; r < scores.rows(); ++r) {
            predicted.push_back(label_order[static_cast<std::size_t>(argmax_row(scores, r))]);
          }
          const MetricReport report =
              macro_metrics(confusion(val_labels, predicted, label_order));
          double value = 0.0;
          switch (scoring) {
            case Scoring::kMacroRecall: value = report.macro_recall; break;
            case Scoring::kMacroF1: value = report.macro_f1; break;
            case Scoring::kMacroPrecision: value = report.macro_precision; break;
          }
          result.table[ci].fold_scores[f] = value;
        }
      }
    }
  }

  for (auto& row : result.table) {
    double sum = 0.0;
    for (const double s : row.fold_scores) sum += s;
    row.mean_score = sum / static_cast<double>(row.fold_scores.size());
  }
  result.best_index = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    if (result.table[i].mean_score > result.table[result.best_index].mean_score) {
      result.best_index = i;
    }
  }
  return result;
}

}  // namespace calf
