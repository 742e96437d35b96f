#include "calf/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "calf/error.hpp"

namespace calf {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "dataset archives are little-endian");

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericalError("failed to format a double");
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int places) {
  char buf[512];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, places);
  if (ec != std::errc()) throw NumericalError("failed to format a double");
  return std::string(buf, ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

namespace {

constexpr char kDatasetMagic[8] = {'C', 'A', 'L', 'F', 'D', 'S', '0', '1'};
constexpr std::uint32_t kDatasetVersion = 1;

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in.good()) throw ValidationError("'" + path + "' is truncated or unreadable");
  return value;
}

void write_string(std::ostream& out, const std::string& s) {
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in, const std::string& path) {
  const auto len = read_raw<std::uint32_t>(in, path);
  if (len > (1u << 20)) throw ValidationError("'" + path + "' has an implausible string length");
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in.good()) throw ValidationError("'" + path + "' is truncated or unreadable");
  return s;
}

json require_object(const std::string& path, const std::string& expected_format,
                    int expected_version) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("'" + path + "' is not a JSON object");
  if (j.value("format", "") != expected_format) {
    throw ValidationError("'" + path + "' is not a " + expected_format + " file");
  }
  if (j.value("version", -1) != expected_version) {
    throw ValidationError("'" + path + "' has an unsupported version");
  }
  return j;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a non-empty array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw ValidationError(what + " rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

}  // namespace

void save_dataset(const std::string& path, const Dataset& dataset, const DatasetMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");

  out.write(kDatasetMagic, sizeof(kDatasetMagic));
  write_raw(out, kDatasetVersion);
  write_raw(out, meta.sample_rate_hz);
  write_raw(out, meta.window_seconds);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(meta.channel_names.size()));
  for (const auto& name : meta.channel_names) write_string(out, name);
  write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(dataset.label_set().size()));
  for (const auto& label : dataset.label_set()) write_string(out, label);

  write_raw<std::uint64_t>(out, dataset.size());
  for (const auto& window : dataset.windows()) {
    write_string(out, window.calf_id);
    write_string(out, window.segment_id);
    const int label = dataset.label_index(window.behaviour_label);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(label));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(window.channels));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(window.length));
    out.write(reinterpret_cast<const char*>(window.data.data()),
              static_cast<std::streamsize>(window.data.size() * sizeof(double)));
  }
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

std::pair<Dataset, DatasetMeta> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in.good() || std::memcmp(magic, kDatasetMagic, sizeof(magic)) != 0) {
    throw ValidationError("'" + path + "' is not a dataset archive");
  }
  if (read_raw<std::uint32_t>(in, path) != kDatasetVersion) {
    throw ValidationError("'" + path + "' has an unsupported archive version");
  }

  DatasetMeta meta;
  meta.sample_rate_hz = read_raw<double>(in, path);
  meta.window_seconds = read_raw<double>(in, path);
  const auto n_channels = read_raw<std::uint32_t>(in, path);
  meta.channel_names.reserve(n_channels);
  for (std::uint32_t i = 0; i < n_channels; ++i) meta.channel_names.push_back(read_string(in, path));

  const auto n_labels = read_raw<std::uint32_t>(in, path);
  std::vector<std::string> label_set;
  label_set.reserve(n_labels);
  for (std::uint32_t i = 0; i < n_labels; ++i) label_set.push_back(read_string(in, path));

  const auto n_windows = read_raw<std::uint64_t>(in, path);
  std::vector<LabeledWindow> windows;
  windows.reserve(n_windows);
  for (std::uint64_t w = 0; w < n_windows; ++w) {
    LabeledWindow window;
    window.calf_id = read_string(in, path);
    window.segment_id = read_string(in, path);
    const auto label = read_raw<std::uint32_t>(in, path);
    if (label >= label_set.size()) {
      throw ValidationError("'" + path + "' references an unknown label index");
    }
    window.behaviour_label = label_set[label];
    window.channels = read_raw<std::uint32_t>(in, path);
    window.length = read_raw<std::uint32_t>(in, path);
    if (window.channels == 0 || window.length == 0 ||
        window.channels * window.length > (1u << 26)) {
      throw ValidationError("'" + path + "' has an implausible window shape");
    }
    window.data.resize(window.channels * window.length);
    in.read(reinterpret_cast<char*>(window.data.data()),
            static_cast<std::streamsize>(window.data.size() * sizeof(double)));
    if (!in.good()) throw ValidationError("'" + path + "' is truncated");
    windows.push_back(std::move(window));
  }
  return {Dataset(std::move(windows), std::move(label_set)), std::move(meta)};
}

void save_minirocket_params(const std::string& path, const MiniRocketParams& params) {
  json j;
  j["format"] = "minirocket-params";
  j["version"] = 1;
  j["seed"] = params.seed;
  j["input_length"] = params.input_length;
  j["channel_count"] = params.channel_count;
  j["features_per_channel"] = params.features_per_channel;
  j["dilations"] = params.dilations;
  j["features_per_dilation"] = params.features_per_dilation;
  json taps = json::array();
  for (const auto& t : params.kernel_taps) taps.push_back({t[0], t[1], t[2]});
  j["kernel_taps"] = std::move(taps);
  j["biases"] = params.biases;
  write_text_file(path, j.dump());
}

MiniRocketParams load_minirocket_params(const std::string& path) {
  const json j = require_object(path, "minirocket-params", 1);
  MiniRocketParams params;
  try {
    params.seed = j.at("seed").get<std::uint64_t>();
    params.input_length = j.at("input_length").get<std::size_t>();
    params.channel_count = j.at("channel_count").get<std::size_t>();
    params.features_per_channel = j.at("features_per_channel").get<std::size_t>();
    params.dilations = j.at("dilations").get<std::vector<int>>();
    params.features_per_dilation = j.at("features_per_dilation").get<std::vector<int>>();
    for (const auto& t : j.at("kernel_taps")) {
      params.kernel_taps.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    params.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }

  if (params.kernel_taps != minirocket_kernel_taps()) {
    throw ValidationError("'" + path + "' has unexpected kernel taps");
  }
  if (params.dilations.size() != params.features_per_dilation.size()) {
    throw ValidationError("'" + path + "': dilations and feature counts disagree");
  }
  std::size_t per_kernel = 0;
  for (const int f : params.features_per_dilation) per_kernel += static_cast<std::size_t>(f);
  if (per_kernel * params.kernel_taps.size() != params.features_per_channel) {
    throw ValidationError("'" + path + "': feature allocation does not add up");
  }
  if (params.biases.size() != params.channel_count) {
    throw ValidationError("'" + path + "': bias channel count mismatch");
  }
  for (const auto& channel : params.biases) {
    if (channel.size() != params.features_per_channel) {
      throw ValidationError("'" + path + "': bias feature count mismatch");
    }
  }
  return params;
}

void save_rocket_kernels(const std::string& path, const std::vector<RocketKernel>& kernels,
                         std::size_t input_length) {
  json j;
  j["format"] = "rocket-kernels";
  j["version"] = 1;
  j["input_length"] = input_length;
  json arr = json::array();
  for (const auto& k : kernels) {
    arr.push_back({{"length", k.length},
                   {"weights", k.weights},
                   {"bias", k.bias},
                   {"dilation", k.dilation},
                   {"padding", k.padding}});
  }
  j["kernels"] = std::move(arr);
  write_text_file(path, j.dump());
}

std::pair<std::vector<RocketKernel>, std::size_t> load_rocket_kernels(const std::string& path) {
  const json j = require_object(path, "rocket-kernels", 1);
  std::vector<RocketKernel> kernels;
  std::size_t input_length = 0;
  try {
    input_length = j.at("input_length").get<std::size_t>();
    for (const auto& item : j.at("kernels")) {
      RocketKernel k;
      k.length = item.at("length").get<int>();
      k.weights = item.at("weights").get<std::vector<double>>();
      k.bias = item.at("bias").get<double>();
      k.dilation = item.at("dilation").get<int>();
      k.padding = item.at("padding").get<bool>();
      if (k.weights.size() != static_cast<std::size_t>(k.length) || k.dilation < 1) {
        throw ValidationError("'" + path + "' contains a malformed kernel");
      }
      kernels.push_back(std::move(k));
    }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }
  if (kernels.empty()) throw ValidationError("'" + path + "' has no kernels");
  return {std::move(kernels), input_length};
}

void save_ridge_model(const std::string& path, const RidgeModel& model) {
  json j;
  j["format"] = "ridge-model";
  j["version"] = 1;
  j["alpha"] = model.alpha;
  j["class_weight"] = class_weight_name(model.class_weight);
  j["fit_intercept"] = model.fit_intercept;
  j["label_order"] = model.label_order;
  json intercepts = json::array();
  for (Eigen::Index i = 0; i < model.intercepts.size(); ++i) intercepts.push_back(model.intercepts[i]);
  j["intercepts"] = std::move(intercepts);
  j["weights"] = matrix_to_json(model.weights);
  write_text_file(path, j.dump());
}

RidgeModel load_ridge_model(const std::string& path) {
  const json j = require_object(path, "ridge-model", 1);
  RidgeModel model;
  try {
    model.alpha = j.at("alpha").get<double>();
    model.class_weight = class_weight_from_name(j.at("class_weight").get<std::string>());
    model.fit_intercept = j.at("fit_intercept").get<bool>();
    model.label_order = j.at("label_order").get<std::vector<std::string>>();
    const auto intercepts = j.at("intercepts").get<std::vector<double>>();
    model.intercepts = Eigen::Map<const Eigen::VectorXd>(intercepts.data(),
                                                         static_cast<Eigen::Index>(intercepts.size()));
    model.weights = matrix_from_json(j.at("weights"), "'" + path + "' weights");
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }
  if (model.label_order.size() != static_cast<std::size_t>(model.weights.rows()) ||
      model.label_order.size() != static_cast<std::size_t>(model.intercepts.size())) {
    throw ValidationError("'" + path + "': label order and weight shapes disagree");
  }
  return model;
}

void save_mlp_model(const std::string& path, const MlpModel& model) {
  json j;
  j["format"] = "mlp-model";
  j["version"] = 1;
  j["label_order"] = model.label_order;
  json cfg;
  cfg["hidden_sizes"] = model.config.hidden_sizes;
  cfg["dropout_rate"] = model.config.dropout_rate;
  cfg["epochs"] = model.config.epochs;
  cfg["batch_size"] = model.config.batch_size;
  cfg["optimizer"] = optimizer_name(model.config.optimizer);
  cfg["learning_rate"] = model.config.learning_rate;
  cfg["rho"] = model.config.rho;
  cfg["beta1"] = model.config.beta1;
  cfg["beta2"] = model.config.beta2;
  cfg["momentum"] = model.config.momentum;
  cfg["epsilon"] = model.config.epsilon;
  cfg["plateau_patience"] = model.config.plateau_patience;
  cfg["plateau_factor"] = model.config.plateau_factor;
  cfg["min_learning_rate"] = model.config.min_learning_rate;
  cfg["seed"] = model.config.seed;
  j["config"] = std::move(cfg);
  json layers = json::array();
  for (std::size_t l = 0; l < model.network.weights.size(); ++l) {
    json layer;
    layer["weights"] = matrix_to_json(model.network.weights[l]);
    json bias = json::array();
    for (Eigen::Index i = 0; i < model.network.biases[l].size(); ++i) {
      bias.push_back(model.network.biases[l][i]);
    }
    layer["bias"] = std::move(bias);
    layers.push_back(std::move(layer));
  }
  j["layers"] = std::move(layers);
  write_text_file(path, j.dump());
}

MlpModel load_mlp_model(const std::string& path) {
  const json j = require_object(path, "mlp-model", 1);
  MlpModel model;
  try {
    model.label_order = j.at("label_order").get<std::vector<std::string>>();
    const json& cfg = j.at("config");
    model.config.hidden_sizes = cfg.at("hidden_sizes").get<std::vector<std::size_t>>();
    model.config.dropout_rate = cfg.at("dropout_rate").get<double>();
    model.config.epochs = cfg.at("epochs").get<std::size_t>();
    model.config.batch_size = cfg.at("batch_size").get<std::size_t>();
    model.config.optimizer = optimizer_from_name(cfg.at("optimizer").get<std::string>());
    model.config.learning_rate = cfg.at("learning_rate").get<double>();
    model.config.rho = cfg.at("rho").get<double>();
    model.config.beta1 = cfg.at("beta1").get<double>();
    model.config.beta2 = cfg.at("beta2").get<double>();
    model.config.momentum = cfg.at("momentum").get<double>();
    model.config.epsilon = cfg.at("epsilon").get<double>();
    model.config.plateau_patience = cfg.at("plateau_patience").get<std::size_t>();
    model.config.plateau_factor = cfg.at("plateau_factor").get<double>();
    model.config.min_learning_rate = cfg.at("min_learning_rate").get<double>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    for (const auto& layer : j.at("layers")) {
      model.network.weights.push_back(matrix_from_json(layer.at("weights"), "'" + path + "' layer"));
      const auto bias = layer.at("bias").get<std::vector<double>>();
      model.network.biases.emplace_back(
          Eigen::Map<const Eigen::VectorXd>(bias.data(), static_cast<Eigen::Index>(bias.size())));
    }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }
  if (model.network.weights.empty()) throw ValidationError("'" + path + "' has no layers");
  for (std::size_t l = 0; l < model.network.weights.size(); ++l) {
    if (model.network.weights[l].cols() != model.network.biases[l].size()) {
      throw ValidationError("'" + path + "': layer " + std::to_string(l) + " shape mismatch");
    }
    if (l > 0 && model.network.weights[l].rows() != model.network.weights[l - 1].cols()) {
      throw ValidationError("'" + path + "': layer " + std::to_string(l) + " does not chain");
    }
  }
  return model;
}

void save_split_plan(const std::string& path, const SplitPlan& plan) {
  json j;
  j["format"] = "split-plan";
  j["version"] = 1;
  j["target_ratio"] = plan.target_ratio;
  j["count_basis"] = count_basis_name(plan.basis);
  j["test_calves"] = plan.test_calves;
  j["train_calves"] = plan.train_calves;
  j["test_deviation"] = plan.test_deviation;
  json folds = json::array();
  for (const auto& fold : plan.folds) {
    folds.push_back({{"train_calves", fold.train_calves},
                     {"validation_calves", fold.validation_calves},
                     {"deviation", fold.deviation}});
  }
  j["folds"] = std::move(folds);
  write_text_file(path, j.dump(2) + "\n");
}

SplitPlan load_split_plan(const std::string& path) {
  const json j = require_object(path, "split-plan", 1);
  SplitPlan plan;
  try {
    plan.target_ratio = j.at("target_ratio").get<double>();
    plan.basis = count_basis_from_name(j.at("count_basis").get<std::string>());
    plan.test_calves = j.at("test_calves").get<std::vector<std::string>>();
    plan.train_calves = j.at("train_calves").get<std::vector<std::string>>();
    plan.test_deviation = j.at("test_deviation").get<double>();
    for (const auto& f : j.at("folds")) {
      SubjectFold fold;
      fold.train_calves = f.at("train_calves").get<std::vector<std::string>>();
      fold.validation_calves = f.at("validation_calves").get<std::vector<std::string>>();
      fold.deviation = f.at("deviation").get<double>();
      plan.folds.push_back(std::move(fold));
    }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is malformed: " + e.what());
  }
  if (plan.test_calves.empty() || plan.train_calves.empty()) {
    throw ValidationError("'" + path + "': empty test or train calf list");
  }
  return plan;
}

void write_feature_csv(const std::string& path, const FeatureMatrix& features,
                       const Dataset& dataset, const std::vector<std::string>& column_names) {
  if (features.rows() != dataset.size()) {
    throw ValidationError("feature rows and dataset windows disagree");
  }
  if (column_names.size() != features.cols()) {
    throw ValidationError("column names and feature width disagree");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "window_index,calf_id,segment_id,label";
  for (const auto& name : column_names) out << ',' << name;
  out << "\n";
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto& w = dataset.windows()[i];
    out << i << ',' << w.calf_id << ',' << w.segment_id << ',' << w.behaviour_label;
    for (std::size_t c = 0; c < features.cols(); ++c) {
      out << ','
          << format_double(features.values(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(c)));
    }
    out << "\n";
  }
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

void write_grid_csv(const std::string& path, const GridSearchResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  const std::size_t folds = result.table.empty() ? 0 : result.table.front().fold_scores.size();
  out << "index,alpha,class_weight,fit_intercept";
  for (std::size_t f = 0; f < folds; ++f) out << ",fold_" << f;
  out << ",mean_" << scoring_name(result.scoring) << ",best\n";
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    const auto& row = result.table[i];
    out << i << ',' << format_double(row.candidate.alpha) << ','
        << class_weight_name(row.candidate.class_weight) << ','
        << (row.candidate.fit_intercept ? "true" : "false");
    for (const double s : row.fold_scores) out << ',' << format_double(s);
    out << ',' << format_double(row.mean_score) << ',' << (i == result.best_index ? 1 : 0)
        << "\n";
  }
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "epoch,train_loss,validation_loss,learning_rate\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    out << (e + 1) << ',' << format_double(history[e].train_loss) << ',';
    if (std::isfinite(history[e].validation_loss)) {
      out << format_double(history[e].validation_loss);
    }
    out << ',' << format_double(history[e].learning_rate) << "\n";
  }
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

void write_predictions_csv(const std::string& path, const std::vector<PredictionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "window_index,calf_id,segment_id,true_label,predicted_label\n";
  for (const auto& row : rows) {
    out << row.window_index << ',' << row.calf_id << ',' << row.segment_id << ','
        << row.true_label << ',' << row.predicted_label << "\n";
  }
  if (!out.good()) throw ValidationError("failed writing '" + path + "'");
}

std::vector<PredictionRow> read_predictions_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "window_index,calf_id,segment_id,true_label,predicted_label") {
    throw ValidationError("'" + path + "' line 1: unexpected header");
  }
  std::vector<PredictionRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    PredictionRow row;
    std::size_t start = 0;
    std::vector<std::string> fields;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 5) {
      throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                            ": expected 5 fields");
    }
    const char* begin = fields[0].data();
    const auto [ptr, ec] = std::from_chars(begin, begin + fields[0].size(), row.window_index);
    if (ec != std::errc() || ptr != begin + fields[0].size()) {
      throw ValidationError("'" + path + "' line " + std::to_string(line_no) +
                            ": bad window index");
    }
    row.calf_id = fields[1];
    row.segment_id = fields[2];
    row.true_label = fields[3];
    row.predicted_label = fields[4];
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("'" + path + "' has no prediction rows");
  return rows;
}

}  // namespace calf
