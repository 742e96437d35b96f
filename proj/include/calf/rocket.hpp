#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "calf/types.hpp"

namespace calf {

// One random convolutional kernel. Weights are mean-centered draws from
// N(0,1); length is 7, 9 or 11; dilation is floor(2^a) with a uniform in
// [0, log2((input_length-1)/(length-1))]; padding (zero, both sides,
// (length-1)*dilation/2 wide) is a fair coin.
struct RocketKernel {
  int length = 9;
  std::vector<double> weights;
  double bias = 0.0;
  int dilation = 1;
  bool padding = false;
};

// Feature pair pooled from one kernel pass: the maximum convolution output
// and the fraction of outputs strictly above zero.
struct KernelFeatures {
  double max_value = 0.0;
  double ppv = 0.0;
};

// Draws `count` kernels for series of `input_length` samples. The sequence
// is a pure function of the seed.
std::vector<RocketKernel> generate_rocket_kernels(std::size_t count, std::size_t input_length,
                                                  std::uint64_t seed);

// Convolves one series with one kernel (bias added to every output) and
// pools max and PPV over the output sequence.
KernelFeatures apply_kernel(std::span<const double> series, const RocketKernel& kernel);

// Feature table: one row per window, columns grouped channel-major (all
// features of channel 0, then channel 1, ...).
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::size_t channel_count = 0;
  std::size_t per_channel_feature_count = 0;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

// The fitted state of the fixed-kernel transform. All kernels have length 9
// and weights -1 except three +2 taps; the 84 tap-index triples are the
// combinations of {0..8} choose 3 in lexicographic order. Each (kernel,
// dilation) pair pools PPV at several bias thresholds; biases are fitted per
// channel from training-data convolution quantiles.
struct MiniRocketParams {
  std::uint64_t seed = 0;
  std::size_t input_length = 0;
  std::size_t channel_count = 0;
  std::size_t features_per_channel = 0;       // 84 * floor(requested / 84)
  std::vector<int> dilations;                 // ascending, unique
  std::vector<int> features_per_dilation;     // quantiles per kernel at each dilation
  std::vector<std::array<int, 3>> kernel_taps;
  // biases[channel][feature]; feature order is dilation-major, then kernel,
  // then quantile — the transform's column order within a channel.
  std::vector<std::vector<double>> biases;

  std::size_t feature_count() const { return channel_count * features_per_channel; }
};

// The 84 tap triples (combinations of 9 positions taken 3 at a time, in
// lexicographic order).
std::vector<std::array<int, 3>> minirocket_kernel_taps();

// Convolution of one series with the length-9 kernel that has weight -1
// everywhere and +2 on the three tap positions. Padded mode zero-pads
// 4*dilation on both sides (output length equals the input length);
// unpadded mode yields length - 8*dilation outputs.
std::vector<double> minirocket_convolution(std::span<const double> series,
                                           const std::array<int, 3>& taps, int dilation,
                                           bool padded);

// Fits dilations, feature allocation and bias quantiles on training windows.
// Requested feature counts are rounded down to a multiple of 84 per channel.
MiniRocketParams fit_minirocket(const Dataset& training, std::size_t features_per_channel,
                                std::uint64_t seed);

// Applies the fitted transform to every window. Rows follow dataset order;
// columns are channel-major, then dilation, kernel, quantile. Byte-identical
// output at any worker count.
FeatureMatrix minirocket_transform(const Dataset& dataset, const MiniRocketParams& params,
                                   int workers = 1);

// Applies random kernels to every window: per channel, per kernel, the
// max/PPV pair (2 * kernels.size() features per channel).
FeatureMatrix rocket_transform(const Dataset& dataset, const std::vector<RocketKernel>& kernels,
                               int workers = 1);

// Flattens preprocessed windows into a feature row per window (channel-major
// sample values; the identity "transform" used by the raw-window baseline).
FeatureMatrix flatten_windows(const Dataset& dataset);

// Column names matching each transform's layout.
std::vector<std::string> minirocket_column_names(const MiniRocketParams& params);
std::vector<std::string> rocket_column_names(std::size_t kernel_count, std::size_t channel_count);
std::vector<std::string> flatten_column_names(std::size_t channel_count, std::size_t length);

}  // namespace calf
