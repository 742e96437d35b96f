#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>

#include "doctest.h"

#include "calf/error.hpp"
#include "calf/rng.hpp"
#include "calf/rocket.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace calf;

TEST_CASE("generate_rocket_kernels draws valid, seeded kernels") {
  const std::size_t input_length = 120;
  const auto kernels = generate_rocket_kernels(200, input_length, 11);
  REQUIRE(kernels.size() == 200);
  std::set<int> lengths;
  for (const auto& k : kernels) {
    lengths.insert(k.length);
    CHECK((k.length == 7 || k.length == 9 || k.length == 11));
    REQUIRE(k.weights.size() == static_cast<std::size_t>(k.length));
    const double sum = std::accumulate(k.weights.begin(), k.weights.end(), 0.0);
    CHECK(std::abs(sum) < 1e-12);  // mean-centered
    CHECK(k.bias >= -1.0);
    CHECK(k.bias <= 1.0);
    CHECK(k.dilation >= 1);
    const double limit = static_cast<double>(input_length - 1) / (k.length - 1);
    CHECK(k.dilation <= static_cast<int>(limit));
  }
  CHECK(lengths.size() == 3);  // all three lengths appear over 200 draws

  const auto again = generate_rocket_kernels(200, input_length, 11);
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    CHECK(kernels[i].weights == again[i].weights);
    CHECK(kernels[i].bias == again[i].bias);
    CHECK(kernels[i].dilation == again[i].dilation);
    CHECK(kernels[i].padding == again[i].padding);
  }

  CHECK_THROWS_AS(generate_rocket_kernels(0, input_length, 1), ValidationError);
  CHECK_THROWS_AS(generate_rocket_kernels(10, 5, 1), ValidationError);
}

TEST_CASE("apply_kernel matches the direct-definition oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 30 + rng.uniform_int(170);
    std::vector<double> series(n);
    for (auto& v : series) v = rng.normal();
    const auto kernels = generate_rocket_kernels(1, n, 1000 + static_cast<std::uint64_t>(trial));
    const auto got = apply_kernel(series, kernels[0]);
    const auto want = test::naive_rocket_features(series, kernels[0]);
    CHECK(std::abs(got.max_value - want.max_value) < 1e-10);
    CHECK(std::abs(got.ppv - want.ppv) < 1e-12);
  }
}

TEST_CASE("apply_kernel rejects kernels wider than the unpadded series") {
  std::vector<double> series(10, 1.0);
  RocketKernel k;
  k.length = 9;
  k.weights.assign(9, 0.1);
  k.dilation = 2;  // span 16 > 10
  k.padding = false;
  CHECK_THROWS_AS(apply_kernel(series, k), ValidationError);
  k.padding = true;  // pad 8 each side: output exists
  CHECK_NOTHROW(apply_kernel(series, k));
}

TEST_CASE("minirocket kernel taps are the 84 lexicographic triples") {
  const auto taps = minirocket_kernel_taps();
  REQUIRE(taps.size() == 84);
  CHECK(taps.front() == std::array<int, 3>{0, 1, 2});
  CHECK(taps.back() == std::array<int, 3>{6, 7, 8});
  for (std::size_t i = 1; i < taps.size(); ++i) CHECK(taps[i - 1] < taps[i]);
  for (const auto& t : taps) {
    CHECK(t[0] < t[1]);
    CHECK(t[1] < t[2]);
    CHECK(t[2] <= 8);
  }
}

TEST_CASE("minirocket_convolution implements the -1/+2 kernel") {
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  const std::array<int, 3> taps = {0, 4, 8};

  const auto unpadded = minirocket_convolution(x, taps, 1, false);
  REQUIRE(unpadded.size() == 2);  // 10 - 8*1
  // position 0: sum over x[0..8] each -1, plus 3*(x[0]+x[4]+x[8])
  const double base0 = -(1 + 2 + 3 + 4 + 5 + 6 + 7 + 8 + 9);
  CHECK(unpadded[0] == doctest::Approx(base0 + 3.0 * (1 + 5 + 9)).epsilon(1e-12));
  const double base1 = -(2 + 3 + 4 + 5 + 6 + 7 + 8 + 9 + 10);
  CHECK(unpadded[1] == doctest::Approx(base1 + 3.0 * (2 + 6 + 10)).epsilon(1e-12));

  const auto padded = minirocket_convolution(x, taps, 1, true);
  REQUIRE(padded.size() == x.size());
  // centered output 4 of the padded pass sees the full series: same as unpadded[0]
  CHECK(padded[4] == doctest::Approx(unpadded[0]).epsilon(1e-12));
  // first padded output: kernel hangs off the left edge, zeros contribute nothing
  const double left = -(1 + 2 + 3 + 4 + 5) + 3.0 * (1 + 5);
  CHECK(padded[0] == doctest::Approx(left).epsilon(1e-12));

  // receptive field 8*2 exceeds the series: no valid unpadded position
  CHECK_THROWS_AS(minirocket_convolution(x, taps, 2, false), ValidationError);

  const auto dilated_padded = minirocket_convolution(x, taps, 2, true);
  CHECK(dilated_padded.size() == x.size());
}

TEST_CASE("fit_minirocket allocates features per the fixed arithmetic") {
  const auto dataset = test::make_window_dataset(4, 3, 2, 2, 75, 31);
  const auto params = fit_minirocket(dataset, 10000, 7);

  CHECK(params.features_per_channel == 9996);  // 84 * floor(10000 / 84)
  CHECK(params.channel_count == 2);
  CHECK(params.feature_count() == 2 * 9996);
  CHECK(params.input_length == 75);
  CHECK(params.kernel_taps.size() == 84);

  // dilations: unique, ascending, within [1, (75-1)/8]
  REQUIRE_FALSE(params.dilations.empty());
  for (std::size_t i = 0; i < params.dilations.size(); ++i) {
    CHECK(params.dilations[i] >= 1);
    CHECK(params.dilations[i] <= 9);
    if (i > 0) CHECK(params.dilations[i] > params.dilations[i - 1]);
  }
  // per-kernel quantile counts sum to floor(10000/84) = 119
  REQUIRE(params.features_per_dilation.size() == params.dilations.size());
  int per_kernel = 0;
  for (const int f : params.features_per_dilation) {
    CHECK(f >= 1);
    per_kernel += f;
  }
  CHECK(per_kernel == 119);

  REQUIRE(params.biases.size() == 2);
  for (const auto& channel : params.biases) {
    REQUIRE(channel.size() == 9996);
    for (const double b : channel) CHECK(std::isfinite(b));
  }

  const auto again = fit_minirocket(dataset, 10000, 7);
  CHECK(params.biases == again.biases);
  const auto other_seed = fit_minirocket(dataset, 10000, 8);
  CHECK(params.biases != other_seed.biases);

  CHECK_THROWS_AS(fit_minirocket(dataset, 50, 7), ValidationError);  // < 84 features
}

TEST_CASE("minirocket_transform is shaped, bounded and worker-invariant") {
  const auto dataset = test::make_window_dataset(3, 3, 2, 2, 60, 5);
  const auto params = fit_minirocket(dataset, 336, 9);  // 4 quantiles per kernel
  const auto f1 = minirocket_transform(dataset, params, 1);
  const auto f3 = minirocket_transform(dataset, params, 3);

  CHECK(f1.rows() == dataset.size());
  CHECK(f1.cols() == params.feature_count());
  CHECK(f1.channel_count == 2);
  CHECK(f1.per_channel_feature_count == 336);
  for (std::size_t r = 0; r < f1.rows(); ++r) {
    for (std::size_t c = 0; c < f1.cols(); ++c) {
      const double v = f1.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  REQUIRE(f1.values.size() == f3.values.size());
  CHECK(std::memcmp(f1.values.data(), f3.values.data(),
                    sizeof(double) * static_cast<std::size_t>(f1.values.size())) == 0);

  const auto wrong = test::make_window_dataset(2, 2, 1, 2, 50, 5);
  CHECK_THROWS_AS(minirocket_transform(wrong, params, 1), ValidationError);

  const auto names = minirocket_column_names(params);
  REQUIRE(names.size() == params.feature_count());
  CHECK(names[0].rfind("ch0_", 0) == 0);
}

TEST_CASE("minirocket biases are quantiles of training convolutions") {
  // With one training window the sampled window is always that window, so
  // every bias must appear among the quantiles of its own convolution.
  const auto dataset = test::make_window_dataset(1, 2, 1, 1, 40, 3);
  REQUIRE(dataset.size() == 2);
  const auto params = fit_minirocket(dataset, 84, 17);  // one quantile per kernel
  REQUIRE(params.features_per_dilation.size() >= 1);

  // feature order within the channel: dilation-major, then kernel, then quantile
  std::size_t feature = 0;
  for (std::size_t d = 0; d < params.dilations.size(); ++d) {
    const int quantiles = params.features_per_dilation[d];
    for (std::size_t k = 0; k < 84; ++k) {
      for (int q = 0; q < quantiles; ++q, ++feature) {
        const bool padded = (d + k) % 2 == 0;
        const double bias = params.biases[0][feature];
        bool found = false;
        for (const auto& window : dataset.windows()) {
          auto conv = minirocket_convolution(window.channel_span(0), params.kernel_taps[k],
                                             params.dilations[d], padded);
          if (conv.empty()) continue;
          std::sort(conv.begin(), conv.end());
          if (bias >= conv.front() && bias <= conv.back()) found = true;
        }
        CHECK(found);
      }
    }
  }
  CHECK(feature == params.features_per_channel);
}

TEST_CASE("rocket_transform pools max and ppv per kernel and channel") {
  const auto dataset = test::make_window_dataset(2, 2, 2, 3, 50, 21);
  const auto kernels = generate_rocket_kernels(25, 50, 4);
  const auto features = rocket_transform(dataset, kernels, 1);
  CHECK(features.rows() == dataset.size());
  CHECK(features.cols() == 3 * 25 * 2);
  CHECK(features.per_channel_feature_count == 50);

  // row 0, channel 0, kernel 0 equals a direct apply_kernel call
  const auto direct = apply_kernel(dataset.windows()[0].channel_span(0), kernels[0]);
  CHECK(features.values(0, 0) == direct.max_value);
  CHECK(features.values(0, 1) == direct.ppv);

  const auto f2 = rocket_transform(dataset, kernels, 2);
  CHECK(std::memcmp(features.values.data(), f2.values.data(),
                    sizeof(double) * static_cast<std::size_t>(features.values.size())) == 0);

  const auto names = rocket_column_names(25, 3);
  REQUIRE(names.size() == 150);
  CHECK(names[0] == "ch0_k0_max");
  CHECK(names[1] == "ch0_k0_ppv");
}

TEST_CASE("flatten_windows is the identity feature map") {
  const auto dataset = test::make_window_dataset(2, 2, 1, 2, 10, 8);
  const auto flat = flatten_windows(dataset);
  CHECK(flat.rows() == dataset.size());
  CHECK(flat.cols() == 20);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t j = 0; j < 20; ++j) {
      CHECK(flat.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
            dataset.windows()[i].data[j]);
    }
  }
  const auto names = flatten_column_names(2, 10);
  REQUIRE(names.size() == 20);
  CHECK(names[0] == "ch0_t0");
  CHECK(names[19] == "ch1_t9");
}
