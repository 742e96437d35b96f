#pragma once

#include <cstddef>
#include <vector>

#include "calf/types.hpp"

namespace calf {

struct PreprocessConfig {
  std::size_t target_length = 75;  // samples per window after resampling
  bool standardize = true;
  double epsilon = 1e-12;  // variance floor for standardization
};

// Linear interpolation onto target_length evenly spaced positions over the
// same span; both endpoints are preserved exactly. The input needs at least
// two samples.
std::vector<double> resample_series(const std::vector<double>& series, std::size_t target_length);

// Resamples every channel of a window to target_length.
LabeledWindow resample_window(const LabeledWindow& window, std::size_t target_length);

// Per-channel (x - mean) / max(stddev, epsilon) within one window, using the
// population standard deviation. A constant channel comes out all zero.
LabeledWindow standardize_window(const LabeledWindow& window, double epsilon = 1e-12);

// Resample (when the length differs) then standardize, per the config.
LabeledWindow preprocess_window(const LabeledWindow& window, const PreprocessConfig& config);

}  // namespace calf
