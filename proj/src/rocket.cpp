#include "calf/rocket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calf/error.hpp"
#include "calf/parallel.hpp"
#include "calf/rng.hpp"

namespace calf {

namespace {

constexpr int kMiniKernelLength = 9;
constexpr int kMiniKernelCount = 84;  // C(9,3) tap triples
constexpr int kMaxDilationsPerKernel = 32;
// Golden-ratio fractional step: (sqrt(5) - 1) / 2, the low-discrepancy
// sequence the bias quantiles walk through.
constexpr double kGoldenStep = 0.618033988749895;

}  // namespace

std::vector<RocketKernel> generate_rocket_kernels(std::size_t count, std::size_t input_length,
                                                  std::uint64_t seed) {
  if (count == 0) throw ValidationError("kernel count must be positive");
  if (input_length < 11) {
    throw ValidationError("input length " + std::to_string(input_length) +
                          " is too short for the largest kernel (11 taps)");
  }
  static const int kLengths[3] = {7, 9, 11};

  Rng rng(seed);
  std::vector<RocketKernel> kernels;
  kernels.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    RocketKernel kernel;
    kernel.length = kLengths[rng.uniform_int(3)];
    kernel.weights.resize(kernel.length);
    double mean = 0.0;
    for (double& w : kernel.weights) {
      w = rng.normal();
      mean += w;
    }
    mean /= static_cast<double>(kernel.length);
    for (double& w : kernel.weights) w -= mean;
    kernel.bias = rng.uniform(-1.0, 1.0);
    const double max_exponent = std::log2(static_cast<double>(input_length - 1) /
                                          static_cast<double>(kernel.length - 1));
    kernel.dilation = static_cast<int>(std::floor(std::exp2(rng.uniform(0.0, max_exponent))));
    kernel.dilation = std::max(kernel.dilation, 1);
    kernel.padding = rng.bernoulli(0.5);
    kernels.push_back(std::move(kernel));
  }
  return kernels;
}

KernelFeatures apply_kernel(std::span<const double> series, const RocketKernel& kernel) {
  const long n = static_cast<long>(series.size());
  const long length = kernel.length;
  const long dilation = kernel.dilation;
  const long span = (length - 1) * dilation;  // receptive field minus one
  const long pad = kernel.padding ? span / 2 : 0;
  const long out_len = n + 2 * pad - span;
  if (out_len <= 0) {
    throw ValidationError("kernel receptive field exceeds the series length");
  }

  KernelFeatures features;
  double max_value = -std::numeric_limits<double>::infinity();
  long positive = 0;
  for (long i = 0; i < out_len; ++i) {
    double acc = kernel.bias;
    long idx = i - pad;
    for (long j = 0; j < length; ++j, idx += dilation) {
      if (idx >= 0 && idx < n) acc += kernel.weights[static_cast<std::size_t>(j)] * series[idx];
    }
    if (acc > max_value) max_value = acc;
    if (acc > 0.0) ++positive;
  }
  features.max_value = max_value;
  features.ppv = static_cast<double>(positive) / static_cast<double>(out_len);
  return features;
}

std::vector<std::array<int, 3>> minirocket_kernel_taps() {
  std::vector<std::array<int, 3>> taps;
  taps.reserve(kMiniKernelCount);
  for (int a = 0; a < kMiniKernelLength; ++a) {
    for (int b = a + 1; b < kMiniKernelLength; ++b) {
      for (int c = b + 1; c < kMiniKernelLength; ++c) {
        taps.push_back({a, b, c});
      }
    }
  }
  return taps;
}

namespace {

// Tap rows for one (series, dilation, padding) triple: rows[j][i] holds the
// series value each kernel position j sees at output i (zero where the
// padded index falls outside). Every length-9 kernel over this triple is a
// linear combination of these nine rows, so they are computed once and
// shared by all 84 kernels.
struct TapRows {
  std::size_t out_len = 0;
  std::vector<double> rows;  // 9 x out_len, row-major
  std::vector<double> base;  // column sums over the nine rows
};

TapRows make_tap_rows(std::span<const double> series, int dilation, bool padded) {
  const long n = static_cast<long>(series.size());
  const long span = (kMiniKernelLength - 1) * static_cast<long>(dilation);
  const long pad = padded ? span / 2 : 0;
  const long out_len = n + 2 * pad - span;
  if (out_len <= 0) throw ValidationError("dilation too large for the series length");

  TapRows tr;
  tr.out_len = static_cast<std::size_t>(out_len);
  tr.rows.assign(static_cast<std::size_t>(kMiniKernelLength) * tr.out_len, 0.0);
  tr.base.assign(tr.out_len, 0.0);
  for (int j = 0; j < kMiniKernelLength; ++j) {
    double* row = tr.rows.data() + static_cast<std::size_t>(j) * tr.out_len;
    const long offset = static_cast<long>(j) * dilation - pad;
    const long lo = std::max<long>(0, -offset);
    const long hi = std::min<long>(out_len, n - offset);
    for (long i = lo; i < hi; ++i) row[i] = series[static_cast<std::size_t>(i + offset)];
    for (long i = 0; i < out_len; ++i) tr.base[static_cast<std::size_t>(i)] += row[i];
  }
  return tr;
}

// out[i] = sum of kernel weights times taps = 3*(rows[a]+rows[b]+rows[c]) - base.
void combine_taps(const TapRows& tr, const std::array<int, 3>& taps, std::vector<double>& out) {
  out.resize(tr.out_len);
  const double* a = tr.rows.data() + static_cast<std::size_t>(taps[0]) * tr.out_len;
  const double* b = tr.rows.data() + static_cast<std::size_t>(taps[1]) * tr.out_len;
  const double* c = tr.rows.data() + static_cast<std::size_t>(taps[2]) * tr.out_len;
  for (std::size_t i = 0; i < tr.out_len; ++i) {
    out[i] = 3.0 * (a[i] + b[i] + c[i]) - tr.base[i];
  }
}

}  // namespace

std::vector<double> minirocket_convolution(std::span<const double> series,
                                           const std::array<int, 3>& taps, int dilation,
                                           bool padded) {
  const TapRows tr = make_tap_rows(series, dilation, padded);
  std::vector<double> out;
  combine_taps(tr, taps, out);
  return out;
}

namespace {

// Quantile with linear interpolation between order statistics (values must
// be sorted ascending).
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted[0];
  const double pos = q * static_cast<double>(m - 1);
  const std::size_t lo = std::min(static_cast<std::size_t>(pos), m - 2);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct DilationLayout {
  std::vector<int> dilations;
  std::vector<int> features_per_dilation;  // quantiles per kernel
};

// Exponentially spaced dilations over [1, (L-1)/8], at most 32 distinct,
// with the per-kernel feature budget spread proportionally and the
// remainder distributed round-robin from the smallest dilation up.
DilationLayout fit_dilations(std::size_t input_length, std::size_t features_per_kernel) {
  const std::size_t quota = std::min<std::size_t>(features_per_kernel, kMaxDilationsPerKernel);
  const double max_exponent = std::log2(static_cast<double>(input_length - 1) /
                                        static_cast<double>(kMiniKernelLength - 1));

  std::vector<int> raw(quota);
  for (std::size_t i = 0; i < quota; ++i) {
    const double exponent =
        quota == 1 ? 0.0
                   : max_exponent * static_cast<double>(i) / static_cast<double>(quota - 1);
    raw[i] = std::max(1, static_cast<int>(std::floor(std::exp2(exponent))));
  }

  DilationLayout layout;
  std::vector<int> multiplicity;
  for (const int d : raw) {
    if (!layout.dilations.empty() && layout.dilations.back() == d) {
      ++multiplicity.back();
    } else {
      layout.dilations.push_back(d);
      multiplicity.push_back(1);
    }
  }

  const double scale =
      static_cast<double>(features_per_kernel) / static_cast<double>(quota);
  std::size_t assigned = 0;
  layout.features_per_dilation.resize(layout.dilations.size());
  for (std::size_t i = 0; i < layout.dilations.size(); ++i) {
    const int count = static_cast<int>(static_cast<double>(multiplicity[i]) * scale);
    layout.features_per_dilation[i] = count;
    assigned += static_cast<std::size_t>(count);
  }
  std::size_t remainder = features_per_kernel - assigned;
  for (std::size_t i = 0; remainder > 0; i = (i + 1) % layout.dilations.size()) {
    ++layout.features_per_dilation[i];
    --remainder;
  }
  return layout;
}

// Padded mode alternates with the (dilation, kernel) pair index so roughly
// half of all features see each border behaviour.
bool pair_uses_padding(std::size_t dilation_index, std::size_t kernel_index) {
  return (dilation_index + kernel_index) % 2 == 0;
}

}  // namespace

MiniRocketParams fit_minirocket(const Dataset& training, std::size_t features_per_channel,
                                std::uint64_t seed) {
  const auto [channels, length] = training.uniform_shape();
  if (length < kMiniKernelLength) {
    throw ValidationError("windows of " + std::to_string(length) +
                          " samples are too short for length-9 kernels");
  }
  const std::size_t per_kernel = features_per_channel / kMiniKernelCount;
  if (per_kernel == 0) {
    throw ValidationError("feature budget must be at least 84 per channel, got " +
                          std::to_string(features_per_channel));
  }

  MiniRocketParams params;
  params.seed = seed;
  params.input_length = length;
  params.channel_count = channels;
  params.features_per_channel = kMiniKernelCount * per_kernel;
  params.kernel_taps = minirocket_kernel_taps();

  const DilationLayout layout = fit_dilations(length, per_kernel);
  params.dilations = layout.dilations;
  params.features_per_dilation = layout.features_per_dilation;

  // Bias thresholds: for every (channel, dilation, kernel, quantile) slot,
  // convolve one sampled training window and take the quantile of the
  // output the transform will threshold. The quantile positions follow the
  // golden-ratio sequence, cycling through [0,1) without clustering.
  Rng rng(seed);
  const std::size_t n_windows = training.size();
  params.biases.assign(channels, std::vector<double>(params.features_per_channel, 0.0));
  for (std::size_t c = 0; c < channels; ++c) {
    std::size_t feature = 0;
    for (std::size_t di = 0; di < params.dilations.size(); ++di) {
      const int dilation = params.dilations[di];
      const int quantile_count = params.features_per_dilation[di];
      for (std::size_t k = 0; k < params.kernel_taps.size(); ++k) {
        const bool padded = pair_uses_padding(di, k);
        const std::size_t pick = rng.uniform_int(n_windows);
        auto conv = minirocket_convolution(training.windows()[pick].channel_span(c),
                                           params.kernel_taps[k], dilation, padded);
        std::sort(conv.begin(), conv.end());
        for (int q = 0; q < quantile_count; ++q) {
          const double position =
              std::fmod(static_cast<double>(feature + 1) * kGoldenStep, 1.0);
          params.biases[c][feature] = sorted_quantile(conv, position);
          ++feature;
        }
      }
    }
  }
  return params;
}

namespace {

void validate_shape(const Dataset& dataset, std::size_t channels, std::size_t length,
                    const char* what) {
  const auto [c, l] = dataset.uniform_shape();
  if (c != channels) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(channels) +
                          " channels, got " + std::to_string(c));
  }
  if (l != length) {
    throw ValidationError(std::string(what) + ": expected windows of " + std::to_string(length) +
                          " samples, got " + std::to_string(l));
  }
}

}  // namespace

FeatureMatrix minirocket_transform(const Dataset& dataset, const MiniRocketParams& params,
                                   int workers) {
  validate_shape(dataset, params.channel_count, params.input_length, "minirocket transform");

  FeatureMatrix fm;
  fm.channel_count = params.channel_count;
  fm.per_channel_feature_count = params.features_per_channel;
  fm.values.resize(static_cast<Eigen::Index>(dataset.size()),
                   static_cast<Eigen::Index>(params.feature_count()));

  parallel_chunks(dataset.size(), resolve_workers(workers),
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> conv;
    for (std::size_t row = begin; row < end; ++row) {
      const auto& window = dataset.windows()[row];
      std::size_t col = 0;
      for (std::size_t c = 0; c < params.channel_count; ++c) {
        const auto series = window.channel_span(c);
        std::size_t feature = 0;
        for (std::size_t di = 0; di < params.dilations.size(); ++di) {
          const int dilation = params.dilations[di];
          const int quantile_count = params.features_per_dilation[di];
          const TapRows padded_rows = make_tap_rows(series, dilation, true);
          const TapRows valid_rows = make_tap_rows(series, dilation, false);
          for (std::size_t k = 0; k < params.kernel_taps.size(); ++k) {
            combine_taps(pair_uses_padding(di, k) ? padded_rows : valid_rows,
                         params.kernel_taps[k], conv);
            for (int q = 0; q < quantile_count; ++q) {
              const double bias = params.biases[c][feature];
              long above = 0;
              for (const double v : conv) above += v > bias ? 1 : 0;
              fm.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                  static_cast<double>(above) / static_cast<double>(conv.size());
              ++feature;
              ++col;
            }
          }
        }
      }
    }
  });

  if (!fm.values.allFinite()) throw NumericalError("minirocket features are not finite");
  return fm;
}

FeatureMatrix rocket_transform(const Dataset& dataset, const std::vector<RocketKernel>& kernels,
                               int workers) {
  if (kernels.empty()) throw ValidationError("no kernels to apply");
  const auto [channels, length] = dataset.uniform_shape();
  (void)length;

  FeatureMatrix fm;
  fm.channel_count = channels;
  fm.per_channel_feature_count = 2 * kernels.size();
  fm.values.resize(static_cast<Eigen::Index>(dataset.size()),
                   static_cast<Eigen::Index>(channels * fm.per_channel_feature_count));

  parallel_chunks(dataset.size(), resolve_workers(workers),
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t row = begin; row < end; ++row) {
      const auto& window = dataset.windows()[row];
      std::size_t col = 0;
      for (std::size_t c = 0; c < channels; ++c) {
        const auto series = window.channel_span(c);
        for (const auto& kernel : kernels) {
          const auto features = apply_kernel(series, kernel);
          fm.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col++)) =
              features.max_value;
          fm.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col++)) =
              features.ppv;
        }
      }
    }
  });

  if (!fm.values.allFinite()) throw NumericalError("rocket features are not finite");
  return fm;
}

FeatureMatrix flatten_windows(const Dataset& dataset) {
  const auto [channels, length] = dataset.uniform_shape();
  FeatureMatrix fm;
  fm.channel_count = channels;
  fm.per_channel_feature_count = length;
  fm.values.resize(static_cast<Eigen::Index>(dataset.size()),
                   static_cast<Eigen::Index>(channels * length));
  for (std::size_t row = 0; row < dataset.size(); ++row) {
    const auto& window = dataset.windows()[row];
    for (std::size_t i = 0; i < window.data.size(); ++i) {
      fm.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = window.data[i];
    }
  }
  return fm;
}

std::vector<std::string> minirocket_column_names(const MiniRocketParams& params) {
  std::vector<std::string> names;
  names.reserve(params.feature_count());
  for (std::size_t c = 0; c < params.channel_count; ++c) {
    for (std::size_t di = 0; di < params.dilations.size(); ++di) {
      for (std::size_t k = 0; k < params.kernel_taps.size(); ++k) {
        for (int q = 0; q < params.features_per_dilation[di]; ++q) {
          names.push_back("ch" + std::to_string(c) + "_d" +
                          std::to_string(params.dilations[di]) + "_k" + std::to_string(k) + "_q" +
                          std::to_string(q));
        }
      }
    }
  }
  return names;
}

std::vector<std::string> rocket_column_names(std::size_t kernel_count, std::size_t channel_count) {
  std::vector<std::string> names;
  names.reserve(channel_count * kernel_count * 2);
  for (std::size_t c = 0; c < channel_count; ++c) {
    for (std::size_t k = 0; k < kernel_count; ++k) {
      names.push_back("ch" + std::to_string(c) + "_k" + std::to_string(k) + "_max");
      names.push_back("ch" + std::to_string(c) + "_k" + std::to_string(k) + "_ppv");
    }
  }
  return names;
}

std::vector<std::string> flatten_column_names(std::size_t channel_count, std::size_t length) {
  std::vector<std::string> names;
  names.reserve(channel_count * length);
  for (std::size_t c = 0; c < channel_count; ++c) {
    for (std::size_t t = 0; t < length; ++t) {
      names.push_back("ch" + std::to_string(c) + "_t" + std::to_string(t));
    }
  }
  return names;
}

}  // namespace calf
