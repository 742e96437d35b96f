#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "calf/mlp.hpp"
#include "calf/ridge.hpp"
#include "calf/rocket.hpp"
#include "calf/splitter.hpp"
#include "calf/types.hpp"

namespace calf {

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);
// Fixed-point with the given number of decimal places.
std::string format_fixed(double value, int places);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Windowed-dataset archive (binary, little-endian, magic "CALFDS01"):
// sampling metadata, channel names, label set, then per window ids, label
// index and the channel-major sample buffer.
struct DatasetMeta {
  double sample_rate_hz = 25.0;
  double window_seconds = 3.0;
  std::vector<std::string> channel_names;
};

void save_dataset(const std::string& path, const Dataset& dataset, const DatasetMeta& meta);
std::pair<Dataset, DatasetMeta> load_dataset(const std::string& path);

// JSON round-trips for fitted state and split plans. Doubles survive
// exactly (shortest round-trip representation).
void save_minirocket_params(const std::string& path, const MiniRocketParams& params);
MiniRocketParams load_minirocket_params(const std::string& path);

void save_rocket_kernels(const std::string& path, const std::vector<RocketKernel>& kernels,
                         std::size_t input_length);
std::pair<std::vector<RocketKernel>, std::size_t> load_rocket_kernels(const std::string& path);

void save_ridge_model(const std::string& path, const RidgeModel& model);
RidgeModel load_ridge_model(const std::string& path);

void save_mlp_model(const std::string& path, const MlpModel& model);
MlpModel load_mlp_model(const std::string& path);

void save_split_plan(const std::string& path, const SplitPlan& plan);
SplitPlan load_split_plan(const std::string& path);

// Feature table as CSV: window_index,calf_id,segment_id,label, then one
// column per feature.
void write_feature_csv(const std::string& path, const FeatureMatrix& features,
                       const Dataset& dataset, const std::vector<std::string>& column_names);

// Grid-search table as CSV: candidate parameters, per-fold scores, mean,
// and a marker on the winning row.
void write_grid_csv(const std::string& path, const GridSearchResult& result);

// Per-epoch training curve: epoch,train_loss,validation_loss,learning_rate.
void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

// Predictions table: window_index,calf_id,segment_id,true_label,predicted_label.
struct PredictionRow {
  std::size_t window_index = 0;
  std::string calf_id;
  std::string segment_id;
  std::string true_label;
  std::string predicted_label;
};

void write_predictions_csv(const std::string& path, const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> read_predictions_csv(const std::string& path);

}  // namespace calf
