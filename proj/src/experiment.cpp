#include "calf/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"

#include "calf/csv.hpp"
#include "calf/error.hpp"
#include "calf/eval.hpp"
#include "calf/io.hpp"
#include "calf/parallel.hpp"

namespace calf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kTransformNames = {"minirocket", "rocket", "none"};
const std::vector<std::string> kClassifierNames = {"ridge", "mlp"};

}  // namespace

TransformKind transform_kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kTransformNames.size(); ++i) {
    if (kTransformNames[i] == name) return static_cast<TransformKind>(i);
  }
  throw ValidationError("unknown transform '" + name + "' (expected minirocket, rocket or none)");
}

const std::string& transform_kind_name(TransformKind kind) {
  return kTransformNames[static_cast<std::size_t>(kind)];
}

ClassifierKind classifier_kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kClassifierNames.size(); ++i) {
    if (kClassifierNames[i] == name) return static_cast<ClassifierKind>(i);
  }
  throw ValidationError("unknown classifier '" + name + "' (expected ridge or mlp)");
}

const std::string& classifier_kind_name(ClassifierKind kind) {
  return kClassifierNames[static_cast<std::size_t>(kind)];
}

ExperimentConfig default_experiment_config() { return ExperimentConfig{}; }

namespace {

void check_keys(const json& obj, const std::string& scope,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ValidationError("config: unknown key '" + scope + item.key() + "'");
    }
  }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
  if (const auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

void parse_ingest(const json& obj, ExperimentConfig::Ingest& ingest) {
  check_keys(obj, "ingest.",
             {"sample_rate_hz", "window_seconds", "derived_channels", "dba_smoothing_samples",
              "target_length", "standardize", "epsilon"});
  maybe(obj, "sample_rate_hz", ingest.sample_rate_hz);
  maybe(obj, "window_seconds", ingest.window_seconds);
  if (const auto it = obj.find("derived_channels"); it != obj.end()) {
    ingest.derived_channels.clear();
    for (const auto& name : *it) {
      ingest.derived_channels.push_back(derived_channel_from_name(name.get<std::string>()));
    }
  }
  maybe(obj, "dba_smoothing_samples", ingest.dba_smoothing_samples);
  maybe(obj, "target_length", ingest.target_length);
  maybe(obj, "standardize", ingest.standardize);
  maybe(obj, "epsilon", ingest.epsilon);
}

void parse_split(const json& obj, ExperimentConfig::Split& split) {
  check_keys(obj, "split.",
             {"test_fraction", "val_fraction", "target_ratio", "folds", "sampled_search",
              "budget", "samples", "basis", "seed"});
  maybe(obj, "test_fraction", split.test_fraction);
  maybe(obj, "val_fraction", split.val_fraction);
  maybe(obj, "target_ratio", split.target_ratio);
  maybe(obj, "folds", split.folds);
  maybe(obj, "sampled_search", split.sampled_search);
  maybe(obj, "budget", split.budget);
  maybe(obj, "samples", split.samples);
  if (const auto it = obj.find("basis"); it != obj.end()) {
    split.basis = count_basis_from_name(it->get<std::string>());
  }
  if (const auto it = obj.find("seed"); it != obj.end()) split.seed = it->get<std::uint64_t>();
}

void parse_transform(const json& obj, ExperimentConfig::Transform& transform) {
  check_keys(obj, "transform.",
             {"kind", "features_per_channel", "kernel_count", "save_features", "seed"});
  if (const auto it = obj.find("kind"); it != obj.end()) {
    transform.kind = transform_kind_from_name(it->get<std::string>());
  }
  maybe(obj, "features_per_channel", transform.features_per_channel);
  maybe(obj, "kernel_count", transform.kernel_count);
  maybe(obj, "save_features", transform.save_features);
  if (const auto it = obj.find("seed"); it != obj.end()) transform.seed = it->get<std::uint64_t>();
}

void parse_ridge(const json& obj, ExperimentConfig::Ridge& ridge) {
  check_keys(obj, "ridge.",
             {"alpha_count", "alpha_min", "alpha_max", "class_weights", "fit_intercept",
              "grid_samples", "scoring", "seed"});
  maybe(obj, "alpha_count", ridge.alpha_count);
  maybe(obj, "alpha_min", ridge.alpha_min);
  maybe(obj, "alpha_max", ridge.alpha_max);
  if (const auto it = obj.find("class_weights"); it != obj.end()) {
    ridge.class_weights.clear();
    for (const auto& name : *it) {
      ridge.class_weights.push_back(class_weight_from_name(name.get<std::string>()));
    }
  }
  if (const auto it = obj.find("fit_intercept"); it != obj.end()) {
    ridge.fit_intercept = it->get<std::vector<bool>>();
  }
  maybe(obj, "grid_samples", ridge.grid_samples);
  if (const auto it = obj.find("scoring"); it != obj.end()) {
    ridge.scoring = scoring_from_name(it->get<std::string>());
  }
  if (const auto it = obj.find("seed"); it != obj.end()) ridge.seed = it->get<std::uint64_t>();
}

void parse_mlp(const json& obj, MlpConfig& mlp, bool& seed_set) {
  check_keys(obj, "mlp.",
             {"hidden_sizes", "dropout_rate", "epochs", "batch_size", "optimizer",
              "learning_rate", "rho", "beta1", "beta2", "momentum", "epsilon",
              "plateau_patience", "plateau_factor", "min_learning_rate", "seed"});
  maybe(obj, "hidden_sizes", mlp.hidden_sizes);
  maybe(obj, "dropout_rate", mlp.dropout_rate);
  maybe(obj, "epochs", mlp.epochs);
  maybe(obj, "batch_size", mlp.batch_size);
  if (const auto it = obj.find("optimizer"); it != obj.end()) {
    mlp.optimizer = optimizer_from_name(it->get<std::string>());
  }
  maybe(obj, "learning_rate", mlp.learning_rate);
  maybe(obj, "rho", mlp.rho);
  maybe(obj, "beta1", mlp.beta1);
  maybe(obj, "beta2", mlp.beta2);
  maybe(obj, "momentum", mlp.momentum);
  maybe(obj, "epsilon", mlp.epsilon);
  maybe(obj, "plateau_patience", mlp.plateau_patience);
  maybe(obj, "plateau_factor", mlp.plateau_factor);
  maybe(obj, "min_learning_rate", mlp.min_learning_rate);
  if (const auto it = obj.find("seed"); it != obj.end()) {
    mlp.seed = it->get<std::uint64_t>();
    seed_set = true;
  }
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("'" + path + "' is not a JSON object");

  ExperimentConfig config;
  try {
    check_keys(j, "", {"seed", "workers", "ingest", "split", "transform", "ridge",
                       "classifier", "mlp"});
    maybe(j, "seed", config.seed);
    maybe(j, "workers", config.workers);
    if (const auto it = j.find("ingest"); it != j.end()) parse_ingest(*it, config.ingest);
    if (const auto it = j.find("split"); it != j.end()) parse_split(*it, config.split);
    if (const auto it = j.find("transform"); it != j.end()) parse_transform(*it, config.transform);
    if (const auto it = j.find("ridge"); it != j.end()) parse_ridge(*it, config.ridge);
    if (const auto it = j.find("classifier"); it != j.end()) {
      config.classifier = classifier_kind_from_name(it->get<std::string>());
    }
    if (const auto it = j.find("mlp"); it != j.end()) {
      parse_mlp(*it, config.mlp, config.mlp_seed_set);
    }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }
  return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["seed"] = config.seed;
  j["workers"] = config.workers;

  json ingest;
  ingest["sample_rate_hz"] = config.ingest.sample_rate_hz;
  ingest["window_seconds"] = config.ingest.window_seconds;
  json derived = json::array();
  for (const auto channel : config.ingest.derived_channels) {
    derived.push_back(derived_channel_name(channel));
  }
  ingest["derived_channels"] = std::move(derived);
  ingest["dba_smoothing_samples"] = config.ingest.dba_smoothing_samples;
  ingest["target_length"] = config.ingest.target_length;
  ingest["standardize"] = config.ingest.standardize;
  ingest["epsilon"] = config.ingest.epsilon;
  j["ingest"] = std::move(ingest);

  json split;
  split["test_fraction"] = config.split.test_fraction;
  split["val_fraction"] = config.split.val_fraction;
  split["target_ratio"] = config.split.target_ratio;
  split["folds"] = config.split.folds;
  split["sampled_search"] = config.split.sampled_search;
  split["budget"] = config.split.budget;
  split["samples"] = config.split.samples;
  split["basis"] = count_basis_name(config.split.basis);
  split["seed"] = config.split_seed();
  j["split"] = std::move(split);

  json transform;
  transform["kind"] = transform_kind_name(config.transform.kind);
  transform["features_per_channel"] = config.transform.features_per_channel;
  transform["kernel_count"] = config.transform.kernel_count;
  transform["save_features"] = config.transform.save_features;
  transform["seed"] = config.transform_seed();
  j["transform"] = std::move(transform);

  json ridge;
  ridge["alpha_count"] = config.ridge.alpha_count;
  ridge["alpha_min"] = config.ridge.alpha_min;
  ridge["alpha_max"] = config.ridge.alpha_max;
  json cw = json::array();
  for (const auto w : config.ridge.class_weights) cw.push_back(class_weight_name(w));
  ridge["class_weights"] = std::move(cw);
  ridge["fit_intercept"] = config.ridge.fit_intercept;
  ridge["grid_samples"] = config.ridge.grid_samples;
  ridge["scoring"] = scoring_name(config.ridge.scoring);
  ridge["seed"] = config.ridge_seed();
  j["ridge"] = std::move(ridge);

  j["classifier"] = classifier_kind_name(config.classifier);

  json mlp;
  mlp["hidden_sizes"] = config.mlp.hidden_sizes;
  mlp["dropout_rate"] = config.mlp.dropout_rate;
  mlp["epochs"] = config.mlp.epochs;
  mlp["batch_size"] = config.mlp.batch_size;
  mlp["optimizer"] = optimizer_name(config.mlp.optimizer);
  mlp["learning_rate"] = config.mlp.learning_rate;
  mlp["rho"] = config.mlp.rho;
  mlp["beta1"] = config.mlp.beta1;
  mlp["beta2"] = config.mlp.beta2;
  mlp["momentum"] = config.mlp.momentum;
  mlp["epsilon"] = config.mlp.epsilon;
  mlp["plateau_patience"] = config.mlp.plateau_patience;
  mlp["plateau_factor"] = config.mlp.plateau_factor;
  mlp["min_learning_rate"] = config.mlp.min_learning_rate;
  mlp["seed"] = config.mlp_seed();
  j["mlp"] = std::move(mlp);

  return j.dump(2) + "\n";
}

namespace {

void prepare_out_dir(const std::string& out_dir, const ExperimentConfig& config) {
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "config.json").string(),
                  experiment_config_to_json(config));
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Transform fitted on (or loaded for) one dataset view, plus its column names.
struct TransformedFeatures {
  FeatureMatrix features;
  std::vector<std::string> column_names;
};

TransformedFeatures apply_saved_transform(const ExperimentConfig& config, const Dataset& view,
                                          const std::string& model_dir, int workers) {
  TransformedFeatures out;
  switch (config.transform.kind) {
    case TransformKind::kMiniRocket: {
      const auto path = (fs::path(model_dir) / "params.json").string();
      if (!fs::exists(path)) {
        throw ValidationError("no fitted transform at '" + path +
                              "'; run train with transform 'minirocket' first");
      }
      const auto params = load_minirocket_params(path);
      out.features = minirocket_transform(view, params, workers);
      out.column_names = minirocket_column_names(params);
      break;
    }
    case TransformKind::kRocket: {
      const auto path = (fs::path(model_dir) / "kernels.json").string();
      if (!fs::exists(path)) {
        throw ValidationError("no fitted transform at '" + path +
                              "'; run train with transform 'rocket' first");
      }
      const auto [kernels, input_length] = load_rocket_kernels(path);
      const auto [channels, length] = view.uniform_shape();
      if (length != input_length) {
        throw ValidationError("windows have " + std::to_string(length) +
                              " samples but the kernels were drawn for " +
                              std::to_string(input_length));
      }
      out.features = rocket_transform(view, kernels, workers);
      out.column_names = rocket_column_names(kernels.size(), channels);
      break;
    }
    case TransformKind::kNone: {
      const auto [channels, length] = view.uniform_shape();
      out.features = flatten_windows(view);
      out.column_names = flatten_column_names(channels, length);
      break;
    }
  }
  return out;
}

std::vector<std::string> window_labels(const Dataset& view) {
  std::vector<std::string> labels;
  labels.reserve(view.size());
  for (const auto& w : view.windows()) labels.push_back(w.behaviour_label);
  return labels;
}

std::vector<std::string> window_calves(const Dataset& view) {
  std::vector<std::string> calves;
  calves.reserve(view.size());
  for (const auto& w : view.windows()) calves.push_back(w.calf_id);
  return calves;
}

Eigen::MatrixXd select_feature_rows(const FeatureMatrix& features,
                                    const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), features.values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        features.values.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void check_plan_against_dataset(const SplitPlan& plan, const Dataset& dataset) {
  const auto calves = dataset.calves();
  const std::set<std::string> known(calves.begin(), calves.end());
  for (const auto& calf : plan.test_calves) {
    if (!known.count(calf)) {
      throw ValidationError("split references calf '" + calf + "' absent from the dataset");
    }
  }
  for (const auto& calf : plan.train_calves) {
    if (!known.count(calf)) {
      throw ValidationError("split references calf '" + calf + "' absent from the dataset");
    }
  }
  const std::set<std::string> test(plan.test_calves.begin(), plan.test_calves.end());
  const std::set<std::string> train(plan.train_calves.begin(), plan.train_calves.end());
  for (const auto& calf : test) {
    if (train.count(calf)) {
      throw LeakageError("calf '" + calf + "' is in both the test and train calf lists");
    }
  }
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    std::set<std::string> val(fold.validation_calves.begin(), fold.validation_calves.end());
    for (const auto& calf : fold.train_calves) {
      if (val.count(calf)) {
        throw LeakageError("calf '" + calf + "' appears on both sides of fold " +
                           std::to_string(f));
      }
      if (test.count(calf)) {
        throw LeakageError("test calf '" + calf + "' appears in fold " + std::to_string(f));
      }
      if (!train.count(calf)) {
        throw ValidationError("fold " + std::to_string(f) + " uses calf '" + calf +
                              "' that is not a training calf");
      }
    }
    for (const auto& calf : fold.validation_calves) {
      if (test.count(calf)) {
        throw LeakageError("test calf '" + calf + "' appears in fold " + std::to_string(f));
      }
      if (!train.count(calf)) {
        throw ValidationError("fold " + std::to_string(f) + " uses calf '" + calf +
                              "' that is not a training calf");
      }
    }
  }
}

}  // namespace

std::string cmd_ingest(const ExperimentConfig& config, const std::string& csv_path,
                       const std::string& out_dir) {
  const auto segments = read_accel_csv(csv_path);
  const auto summary = summarize_segments(segments, config.ingest.sample_rate_hz);

  const ChannelDerivationConfig derivation{config.ingest.derived_channels,
                                           config.ingest.dba_smoothing_samples};
  const PreprocessConfig preprocess{config.ingest.target_length, config.ingest.standardize,
                                    config.ingest.epsilon};

  std::vector<LabeledWindow> windows;
  std::set<std::string> present;
  for (const auto& segment : segments) {
    for (const auto& part : split_on_gaps(segment, config.ingest.sample_rate_hz)) {
      for (auto& raw :
           window_segment(part, config.ingest.window_seconds, config.ingest.sample_rate_hz)) {
        auto window = preprocess_window(derive_channels(raw, derivation), preprocess);
        present.insert(window.behaviour_label);
        windows.push_back(std::move(window));
      }
    }
  }
  if (windows.empty()) {
    throw ValidationError("ingest produced no windows; every segment is shorter than one window");
  }

  Dataset dataset(std::move(windows),
                  canonical_label_order({present.begin(), present.end()}));
  DatasetMeta meta;
  meta.sample_rate_hz = config.ingest.sample_rate_hz;
  meta.window_seconds = config.ingest.window_seconds;
  meta.channel_names = channel_names(derivation);

  prepare_out_dir(out_dir, config);
  save_dataset((fs::path(out_dir) / "dataset.bin").string(), dataset, meta);
  write_text_file((fs::path(out_dir) / "summary.csv").string(), summary_to_csv(summary));

  std::ostringstream out;
  out << render_summary(summary);
  out << "\nwindows: " << dataset.size() << " (" << meta.channel_names.size() << " channels x "
      << config.ingest.target_length << " samples), calves: " << dataset.calves().size()
      << ", labels: " << join(dataset.label_set()) << "\n";
  return out.str();
}

std::string cmd_split(const ExperimentConfig& config, const std::string& data_path,
                      const std::string& out_dir) {
  const auto [dataset, meta] = load_dataset(data_path);

  SplitSearch search;
  search.sampled = config.split.sampled_search;
  search.budget = config.split.budget;
  search.samples = config.split.samples;
  search.seed = config.split_seed();
  const int workers = resolve_workers(config.workers);

  const auto plan =
      make_split_plan(dataset, config.split.test_fraction, config.split.val_fraction,
                      config.split.target_ratio, config.split.folds, search, config.split.basis,
                      workers);

  prepare_out_dir(out_dir, config);
  save_split_plan((fs::path(out_dir) / "split.json").string(), plan);

  std::ostringstream out;
  out << "subject-level split (basis " << count_basis_name(plan.basis) << ", target ratio "
      << format_double(plan.target_ratio) << ")\n";
  out << "  test calves (" << plan.test_calves.size() << "/"
      << plan.test_calves.size() + plan.train_calves.size() << "): " << join(plan.test_calves)
      << "  [deviation " << format_fixed(plan.test_deviation, 4) << "]\n";
  out << "  train calves (" << plan.train_calves.size() << "): " << join(plan.train_calves)
      << "\n";
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    out << "  fold " << f << ": validation " << join(plan.folds[f].validation_calves)
        << "  [deviation " << format_fixed(plan.folds[f].deviation, 4) << "]\n";
  }
  return out.str();
}

std::string cmd_train(const ExperimentConfig& config, const std::string& data_path,
                      const std::string& split_path, const std::string& out_dir) {
  const auto [dataset, meta] = load_dataset(data_path);
  const auto plan = load_split_plan(split_path);
  check_plan_against_dataset(plan, dataset);

  const Dataset train_view = dataset.subset_by_calves(plan.train_calves);
  const int workers = resolve_workers(config.workers);
  prepare_out_dir(out_dir, config);

  std::ostringstream out;

  // Fit the transform on training windows only, then transform them.
  TransformedFeatures transformed;
  switch (config.transform.kind) {
    case TransformKind::kMiniRocket: {
      const auto params = fit_minirocket(train_view, config.transform.features_per_channel,
                                         config.transform_seed());
      save_minirocket_params((fs::path(out_dir) / "params.json").string(), params);
      transformed.features = minirocket_transform(train_view, params, workers);
      transformed.column_names = minirocket_column_names(params);
      out << "transform minirocket: " << params.feature_count() << " features ("
          << params.channel_count << " channels x " << params.features_per_channel << "), "
          << params.dilations.size() << " dilations\n";
      break;
    }
    case TransformKind::kRocket: {
      const auto [channels, length] = train_view.uniform_shape();
      const auto kernels = generate_rocket_kernels(config.transform.kernel_count, length,
                                                   config.transform_seed());
      save_rocket_kernels((fs::path(out_dir) / "kernels.json").string(), kernels, length);
      transformed.features = rocket_transform(train_view, kernels, workers);
      transformed.column_names = rocket_column_names(kernels.size(), channels);
      out << "transform rocket: " << transformed.features.cols() << " features ("
          << kernels.size() << " kernels x max/ppv x " << channels << " channels)\n";
      break;
    }
    case TransformKind::kNone: {
      const auto [channels, length] = train_view.uniform_shape();
      transformed.features = flatten_windows(train_view);
      transformed.column_names = flatten_column_names(channels, length);
      out << "transform none: " << transformed.features.cols()
          << " features (flattened windows)\n";
      break;
    }
  }

  if (config.transform.save_features) {
    write_feature_csv((fs::path(out_dir) / "features.csv").string(), transformed.features,
                      train_view, transformed.column_names);
  }

  const auto labels = window_labels(train_view);
  const auto& label_order = train_view.label_set();

  if (config.classifier == ClassifierKind::kRidge) {
    std::vector<double> alphas;
    if (config.ridge.alpha_count < 2) {
      alphas = {config.ridge.alpha_min};
    } else {
      alphas.reserve(config.ridge.alpha_count);
      const double step = (config.ridge.alpha_max - config.ridge.alpha_min) /
                          static_cast<double>(config.ridge.alpha_count - 1);
      for (std::size_t i = 0; i < config.ridge.alpha_count; ++i) {
        alphas.push_back(config.ridge.alpha_min + step * static_cast<double>(i));
      }
    }
    const auto grid =
        full_candidate_grid(alphas, config.ridge.class_weights, config.ridge.fit_intercept);
    const auto candidates = config.ridge.grid_samples == 0
                                ? grid
                                : sample_candidates(grid, config.ridge.grid_samples,
                                                    config.ridge_seed());

    const auto result =
        ridge_grid_search(transformed.features, labels, window_calves(train_view), label_order,
                          candidates, plan.folds, config.ridge.scoring);
    write_grid_csv((fs::path(out_dir) / "grid.csv").string(), result);

    const auto& best = result.table[result.best_index].candidate;
    RidgeConfig fit_config;
    fit_config.alphas = {best.alpha};
    fit_config.class_weight = best.class_weight;
    fit_config.fit_intercept = best.fit_intercept;
    const auto model = ridge_fit(transformed.features, labels, label_order, fit_config);
    save_ridge_model((fs::path(out_dir) / "model.json").string(), model);

    out << "ridge grid search: " << result.table.size() << " candidates x "
        << plan.folds.size() << " folds, scoring " << scoring_name(result.scoring) << "\n";
    out << "  best: alpha " << format_double(best.alpha) << ", class_weight "
        << class_weight_name(best.class_weight) << ", fit_intercept "
        << (best.fit_intercept ? "true" : "false") << "  [mean "
        << format_fixed(result.table[result.best_index].mean_score, 4) << "]\n";
    out << "refit on all " << transformed.features.rows() << " training windows -> model.json\n";
  } else {
    if (plan.folds.empty()) {
      throw ValidationError("mlp training needs at least one validation fold in the split");
    }
    // Train on fold 0's training calves, monitor loss on its validation calves.
    const auto& fold = plan.folds.front();
    const std::set<std::string> val_set(fold.validation_calves.begin(),
                                        fold.validation_calves.end());
    std::vector<std::size_t> train_rows, val_rows;
    for (std::size_t i = 0; i < train_view.size(); ++i) {
      if (val_set.count(train_view.windows()[i].calf_id)) {
        val_rows.push_back(i);
      } else {
        train_rows.push_back(i);
      }
    }
    const Eigen::MatrixXd X_train = select_feature_rows(transformed.features, train_rows);
    const Eigen::MatrixXd X_val = select_feature_rows(transformed.features, val_rows);
    std::vector<std::string> y_train, y_val;
    for (const auto i : train_rows) y_train.push_back(train_view.windows()[i].behaviour_label);
    for (const auto i : val_rows) y_val.push_back(train_view.windows()[i].behaviour_label);

    MlpConfig mlp_config = config.mlp;
    mlp_config.seed = config.mlp_seed();
    const auto model = train_mlp(X_train, y_train, label_order, mlp_config, &X_val, &y_val);
    save_mlp_model((fs::path(out_dir) / "model.json").string(), model);
    write_history_csv((fs::path(out_dir) / "history.csv").string(), model.history);

    out << "mlp: layers " << join([&] {
      std::vector<std::string> sizes;
      for (const auto s : model.network.layer_sizes()) sizes.push_back(std::to_string(s));
      return sizes;
    }(), "-");
    out << ", optimizer " << optimizer_name(mlp_config.optimizer) << ", "
        << model.history.size() << " epochs\n";
    out << "  train windows " << train_rows.size() << ", validation windows " << val_rows.size()
        << " (fold 0)\n";
    if (!model.history.empty()) {
      const auto& last = model.history.back();
      out << "  final train loss " << format_fixed(last.train_loss, 4) << ", validation loss "
          << format_fixed(last.validation_loss, 4) << "\n";
    }
  }
  return out.str();
}

std::string cmd_evaluate(const ExperimentConfig& config, const std::string& data_path,
                         const std::string& split_path, const std::string& model_dir,
                         const std::string& out_dir) {
  const auto [dataset, meta] = load_dataset(data_path);
  const auto plan = load_split_plan(split_path);
  check_plan_against_dataset(plan, dataset);

  const Dataset test_view = dataset.subset_by_calves(plan.test_calves);
  const int workers = resolve_workers(config.workers);

  const auto transformed = apply_saved_transform(config, test_view, model_dir, workers);

  std::vector<std::string> label_order;
  std::vector<std::string> predicted;
  if (config.classifier == ClassifierKind::kRidge) {
    const auto model = load_ridge_model((fs::path(model_dir) / "model.json").string());
    label_order = model.label_order;
    predicted = ridge_predict(model, transformed.features);
  } else {
    const auto model = load_mlp_model((fs::path(model_dir) / "model.json").string());
    if (model.network.weights.front().rows() !=
        static_cast<Eigen::Index>(transformed.features.cols())) {
      throw ValidationError("feature width " + std::to_string(transformed.features.cols()) +
                            " does not match the model input width " +
                            std::to_string(model.network.weights.front().rows()));
    }
    label_order = model.label_order;
    predicted = mlp_predict(model, transformed.features.values);
  }

  std::vector<PredictionRow> rows;
  std::vector<std::string> y_true;
  rows.reserve(test_view.size());
  for (std::size_t i = 0; i < test_view.size(); ++i) {
    const auto& w = test_view.windows()[i];
    rows.push_back({i, w.calf_id, w.segment_id, w.behaviour_label, predicted[i]});
    y_true.push_back(w.behaviour_label);
  }

  prepare_out_dir(out_dir, config);
  write_predictions_csv((fs::path(out_dir) / "predictions.csv").string(), rows);

  const auto cm = confusion(y_true, predicted, label_order);
  const auto report = macro_metrics(cm);
  write_report_files(report, cm, out_dir);
  const auto text = render_text_report(report, cm);
  write_text_file((fs::path(out_dir) / "report.txt").string(), text);
  return text;
}

std::string cmd_report(const std::string& predictions_path, const std::string& out_dir,
                       const std::vector<std::string>& labels) {
  const auto rows = read_predictions_csv(predictions_path);

  std::vector<std::string> y_true, y_pred;
  y_true.reserve(rows.size());
  y_pred.reserve(rows.size());
  std::set<std::string> present;
  for (const auto& row : rows) {
    y_true.push_back(row.true_label);
    y_pred.push_back(row.predicted_label);
    present.insert(row.true_label);
    present.insert(row.predicted_label);
  }

  const auto label_order =
      labels.empty() ? canonical_label_order({present.begin(), present.end()}) : labels;

  fs::create_directories(out_dir);
  const auto cm = confusion(y_true, y_pred, label_order);
  const auto report = macro_metrics(cm);
  write_report_files(report, cm, out_dir);
  const auto text = render_text_report(report, cm);
  write_text_file((fs::path(out_dir) / "report.txt").string(), text);
  return text;
}

}  // namespace calf
