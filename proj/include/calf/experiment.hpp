#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calf/mlp.hpp"
#include "calf/preprocess.hpp"
#include "calf/ridge.hpp"
#include "calf/splitter.hpp"
#include "calf/windowing.hpp"

namespace calf {

enum class TransformKind { kMiniRocket, kRocket, kNone };
TransformKind transform_kind_from_name(const std::string& name);
const std::string& transform_kind_name(TransformKind kind);

enum class ClassifierKind { kRidge, kMlp };
ClassifierKind classifier_kind_from_name(const std::string& name);
const std::string& classifier_kind_name(ClassifierKind kind);

// Everything a run needs, loadable from JSON (missing keys take defaults,
// unknown keys are rejected). Stage seeds left unset derive from the master
// seed, so one --seed pins the whole pipeline.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = resolve from environment/hardware

  struct Ingest {
    double sample_rate_hz = 25.0;
    double window_seconds = 3.0;
    std::vector<DerivedChannel> derived_channels = ChannelDerivationConfig{}.derived;
    std::size_t dba_smoothing_samples = 25;
    std::size_t target_length = 75;
    bool standardize = true;
    double epsilon = 1e-12;
  } ingest;

  struct Split {
    double test_fraction = 0.3;
    double val_fraction = 0.3;
    double target_ratio = 0.43;
    std::size_t folds = 10;
    bool sampled_search = false;
    std::uint64_t budget = 20'000'000;
    std::size_t samples = 200'000;
    CountBasis basis = CountBasis::kWindows;
    std::optional<std::uint64_t> seed;
  } split;

  struct Transform {
    TransformKind kind = TransformKind::kMiniRocket;
    std::size_t features_per_channel = 10'000;  // minirocket budget, pre-rounding
    std::size_t kernel_count = 10'000;          // rocket
    bool save_features = false;
    std::optional<std::uint64_t> seed;
  } transform;

  struct Ridge {
    std::size_t alpha_count = 100;
    double alpha_min = 0.001;
    double alpha_max = 1000.0;
    std::vector<ClassWeight> class_weights = {ClassWeight::kNone, ClassWeight::kBalanced};
    std::vector<bool> fit_intercept = {true, false};
    std::size_t grid_samples = 50;  // 0 = full grid
    Scoring scoring = Scoring::kMacroRecall;
    std::optional<std::uint64_t> seed;
  } ridge;

  ClassifierKind classifier = ClassifierKind::kRidge;
  MlpConfig mlp;  // mlp.seed likewise falls back to the master seed
  bool mlp_seed_set = false;

  std::uint64_t split_seed() const { return split.seed.value_or(seed + 1); }
  std::uint64_t transform_seed() const { return transform.seed.value_or(seed + 2); }
  std::uint64_t ridge_seed() const { return ridge.seed.value_or(seed + 3); }
  std::uint64_t mlp_seed() const { return mlp_seed_set ? mlp.seed : seed + 4; }
};

ExperimentConfig default_experiment_config();
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

// Pipeline stages behind the CLI verbs. Each writes its outputs under
// out_dir along with a resolved copy of the configuration that produced
// them. Errors surface as ValidationError / NumericalError / LeakageError.

// CSV -> windowed dataset archive (dataset.bin) + summary.csv; returns the
// rendered per-behaviour summary.
std::string cmd_ingest(const ExperimentConfig& config, const std::string& csv_path,
                       const std::string& out_dir);

// dataset -> split.json (test calves + validation folds).
std::string cmd_split(const ExperimentConfig& config, const std::string& data_path,
                      const std::string& out_dir);

// dataset + split -> fitted transform and classifier artifacts (params.json
// or kernels.json, model.json, grid.csv / history.csv, optional
// features.csv). Touching a test calf anywhere in training raises
// LeakageError.
std::string cmd_train(const ExperimentConfig& config, const std::string& data_path,
                      const std::string& split_path, const std::string& out_dir);

// dataset + split + model dir -> predictions.csv, metrics.csv,
// confusion.csv, confusion_norm.csv, report.txt; returns the text report.
std::string cmd_evaluate(const ExperimentConfig& config, const std::string& data_path,
                         const std::string& split_path, const std::string& model_dir,
                         const std::string& out_dir);

// predictions.csv -> report files rendered anew (label order restricted to
// the labels present unless `labels` is given).
std::string cmd_report(const std::string& predictions_path, const std::string& out_dir,
                       const std::vector<std::string>& labels = {});

}  // namespace calf
