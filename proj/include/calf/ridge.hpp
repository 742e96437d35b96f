#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "calf/rocket.hpp"
#include "calf/splitter.hpp"

namespace calf {

enum class ClassWeight { kNone, kBalanced };
ClassWeight class_weight_from_name(const std::string& name);
const std::string& class_weight_name(ClassWeight cw);

enum class Scoring { kMacroRecall, kMacroF1, kMacroPrecision };
Scoring scoring_from_name(const std::string& name);
const std::string& scoring_name(Scoring scoring);

// 100 alphas linearly spaced over [0.001, 1000].
std::vector<double> default_alpha_grid();

struct RidgeConfig {
  std::vector<double> alphas = default_alpha_grid();
  ClassWeight class_weight = ClassWeight::kNone;
  bool fit_intercept = true;
};

// One-vs-rest ridge regression classifier: each class is regressed onto a
// +1/-1 indicator and prediction takes the class with the largest score
// (ties to the lowest class index).
struct RidgeModel {
  Eigen::MatrixXd weights;     // classes x features
  Eigen::VectorXd intercepts;  // classes (zero when fit_intercept is off)
  double alpha = 0.0;
  ClassWeight class_weight = ClassWeight::kNone;
  bool fit_intercept = true;
  std::vector<std::string> label_order;
};

// Per-sample weights: all ones, or N / (K * n_class) with K the number of
// classes present in `labels` ("balanced"; every class then carries the
// same total weight).
Eigen::VectorXd sample_weights(const std::vector<int>& labels, std::size_t class_count,
                               ClassWeight cw);

// Row-index folds (train indices, validation indices) for alpha selection.
using IndexFold = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

// Fits the classifier, selecting alpha by mean validation MSE of the +1/-1
// targets over the supplied folds (MSE ties go to the earlier alpha in the
// grid) and refitting on all rows with the winner. With a single alpha the
// folds may be empty; with several they are required. The solver
// eigendecomposes whichever Gram side is smaller (features or samples), so
// sweeping the alpha grid costs one decomposition per fold.
RidgeModel ridge_fit(const FeatureMatrix& features, const std::vector<std::string>& labels,
                     const std::vector<std::string>& label_order, const RidgeConfig& config,
                     const std::vector<IndexFold>& folds = {});

Eigen::MatrixXd decision_scores(const RidgeModel& model, const FeatureMatrix& features);
std::vector<std::string> ridge_predict(const RidgeModel& model, const FeatureMatrix& features);

// One point of the hyperparameter grid.
struct RidgeCandidate {
  double alpha = 1.0;
  ClassWeight class_weight = ClassWeight::kNone;
  bool fit_intercept = true;
};

// The full cross product alphas x class-weight modes x intercept modes.
std::vector<RidgeCandidate> full_candidate_grid(const std::vector<double>& alphas,
                                                const std::vector<ClassWeight>& class_weights,
                                                const std::vector<bool>& intercept_options);

// `count` candidates drawn without replacement (seeded); the draw order is
// kept. count >= grid size returns the grid unchanged.
std::vector<RidgeCandidate> sample_candidates(const std::vector<RidgeCandidate>& grid,
                                              std::size_t count, std::uint64_t seed);

struct GridSearchRow {
  RidgeCandidate candidate;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct GridSearchResult {
  std::vector<GridSearchRow> table;  // one row per candidate, input order
  std::size_t best_index = 0;
  Scoring scoring = Scoring::kMacroRecall;
};

// Scores every candidate on calf-level folds: for each fold the model is
// fitted on the fold's training calves and scored (macro metric) on its
// validation calves; candidates are ranked by mean fold score, ties to the
// earlier candidate. A calf appearing on both sides of any fold raises
// LeakageError. `calf_ids` gives the owning calf of each feature row.
GridSearchResult ridge_grid_search(const FeatureMatrix& features,
                                   const std::vector<std::string>& labels,
                                   const std::vector<std::string>& calf_ids,
                                   const std::vector<std::string>& label_order,
                                   const std::vector<RidgeCandidate>& candidates,
                                   const std::vector<SubjectFold>& folds, Scoring scoring);

}  // namespace calf
