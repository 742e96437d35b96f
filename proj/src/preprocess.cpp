#include "calf/preprocess.hpp"

#include <cmath>

#include "calf/error.hpp"

namespace calf {

std::vector<double> resample_series(const std::vector<double>& series,
                                    std::size_t target_length) {
  if (series.size() < 2) throw ValidationError("resampling needs at least 2 samples");
  if (target_length < 2) throw ValidationError("resample target must be at least 2");
  if (series.size() == target_length) return series;

  const std::size_t n = series.size();
  std::vector<double> out(target_length);
  const double step = static_cast<double>(n - 1) / static_cast<double>(target_length - 1);
  out[0] = series.front();
  out[target_length - 1] = series.back();
  for (std::size_t i = 1; i + 1 < target_length; ++i) {
    const double pos = step * static_cast<double>(i);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    out[i] = series[lo] + frac * (series[lo + 1] - series[lo]);
  }
  return out;
}

LabeledWindow resample_window(const LabeledWindow& window, std::size_t target_length) {
  LabeledWindow out;
  out.calf_id = window.calf_id;
  out.segment_id = window.segment_id;
  out.behaviour_label = window.behaviour_label;
  out.channels = window.channels;
  out.length = target_length;
  out.data.resize(window.channels * target_length);
  for (std::size_t c = 0; c < window.channels; ++c) {
    const auto src = window.channel_span(c);
    const auto resampled = resample_series({src.begin(), src.end()}, target_length);
    std::copy(resampled.begin(), resampled.end(), out.channel_span(c).begin());
  }
  return out;
}

LabeledWindow standardize_window(const LabeledWindow& window, double epsilon) {
  if (epsilon <= 0.0) throw ValidationError("standardization epsilon must be positive");
  LabeledWindow out = window;
  const double n = static_cast<double>(window.length);
  for (std::size_t c = 0; c < window.channels; ++c) {
    auto values = out.channel_span(c);
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    var /= n;
    const double denom = std::max(std::sqrt(var), epsilon);
    for (double& v : values) v = (v - mean) / denom;
  }
  return out;
}

LabeledWindow preprocess_window(const LabeledWindow& window, const PreprocessConfig& config) {
  LabeledWindow out =
      window.length == config.target_length ? window : resample_window(window, config.target_length);
  if (config.standardize) out = standardize_window(out, config.epsilon);
  return out;
}

}  // namespace calf
