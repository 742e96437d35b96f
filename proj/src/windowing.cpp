#include "calf/windowing.hpp"

#include <cmath>
#include <map>

#include "calf/error.hpp"

namespace calf {

std::vector<LabeledSegment> split_on_gaps(const LabeledSegment& segment, double sample_rate_hz) {
  if (sample_rate_hz <= 0.0) throw ValidationError("sample rate must be positive");
  if (segment.samples.empty()) {
    throw ValidationError("segment '" + segment.segment_id + "' has no samples");
  }

  const double max_gap = 2.0 / sample_rate_hz;
  std::vector<std::size_t> starts = {0};
  for (std::size_t i = 1; i < segment.samples.size(); ++i) {
    const double dt = segment.samples[i].timestamp - segment.samples[i - 1].timestamp;
    if (dt <= 0.0) {
      throw ValidationError("segment '" + segment.segment_id +
                            "' has non-increasing timestamps");
    }
    if (dt > max_gap) starts.push_back(i);
  }

  if (starts.size() == 1) return {segment};

  std::vector<LabeledSegment> parts;
  parts.reserve(starts.size());
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const std::size_t begin = starts[p];
    const std::size_t end = p + 1 < starts.size() ? starts[p + 1] : segment.samples.size();
    LabeledSegment part;
    part.calf_id = segment.calf_id;
    part.segment_id = segment.segment_id + "#" + std::to_string(p);
    part.behaviour_label = segment.behaviour_label;
    part.samples.assign(segment.samples.begin() + begin, segment.samples.begin() + end);
    parts.push_back(std::move(part));
  }
  return parts;
}

std::vector<LabeledWindow> window_segment(const LabeledSegment& segment, double window_seconds,
                                          double sample_rate_hz) {
  if (window_seconds <= 0.0 || sample_rate_hz <= 0.0) {
    throw ValidationError("window length and sample rate must be positive");
  }
  if (segment.samples.empty()) {
    throw ValidationError("segment '" + segment.segment_id + "' has no samples");
  }
  const std::size_t window_len =
      static_cast<std::size_t>(std::llround(window_seconds * sample_rate_hz));
  if (window_len == 0) throw ValidationError("window spans zero samples");

  const std::size_t channels = segment.samples.front().channels.size();
  for (const auto& sample : segment.samples) {
    if (sample.channels.size() != channels) {
      throw ValidationError("segment '" + segment.segment_id + "' mixes channel counts");
    }
  }

  const std::size_t count = segment.samples.size() / window_len;
  std::vector<LabeledWindow> windows;
  windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    LabeledWindow win;
    win.calf_id = segment.calf_id;
    win.segment_id = segment.segment_id;
    win.behaviour_label = segment.behaviour_label;
    win.channels = channels;
    win.length = window_len;
    win.data.resize(channels * window_len);
    for (std::size_t t = 0; t < window_len; ++t) {
      const auto& sample = segment.samples[w * window_len + t];
      for (std::size_t c = 0; c < channels; ++c) {
        win.at(c, t) = sample.channels[c];
      }
    }
    windows.push_back(std::move(win));
  }
  return windows;
}

DerivedChannel derived_channel_from_name(const std::string& name) {
  static const std::map<std::string, DerivedChannel> kNames = {
      {"magnitude", DerivedChannel::kMagnitude}, {"odba", DerivedChannel::kOdba},
      {"vedba", DerivedChannel::kVedba},         {"pitch", DerivedChannel::kPitch},
      {"roll", DerivedChannel::kRoll}};
  const auto it = kNames.find(name);
  if (it == kNames.end()) throw ValidationError("unknown derived channel: '" + name + "'");
  return it->second;
}

const std::string& derived_channel_name(DerivedChannel channel) {
  static const std::string kNames[] = {"magnitude", "odba", "vedba", "pitch", "roll"};
  return kNames[static_cast<int>(channel)];
}

std::vector<std::string> channel_names(const ChannelDerivationConfig& config) {
  std::vector<std::string> names = {"accX", "accY", "accZ"};
  for (const auto ch : config.derived) names.push_back(derived_channel_name(ch));
  return names;
}

namespace {

// Centered rolling mean; the window is truncated at the edges.
std::vector<double> rolling_mean(std::span<const double> x, std::size_t width) {
  const std::size_t n = x.size();
  const std::size_t half = width / 2;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    mean[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return mean;
}

double safe_atan2(double y, double x) { return (y == 0.0 && x == 0.0) ? 0.0 : std::atan2(y, x); }

}  // namespace

LabeledWindow derive_channels(const LabeledWindow& raw, const ChannelDerivationConfig& config) {
  if (raw.channels != 3) {
    throw ValidationError("channel derivation expects the 3 raw axes, got " +
                          std::to_string(raw.channels));
  }
  if (config.dba_smoothing_samples == 0) {
    throw ValidationError("dba_smoothing_samples must be positive");
  }
  for (const double v : raw.data) {
    if (!std::isfinite(v)) {
      throw ValidationError("window '" + raw.segment_id + "' contains non-finite samples");
    }
  }

  const std::size_t n = raw.length;
  const auto x = raw.channel_span(0);
  const auto y = raw.channel_span(1);
  const auto z = raw.channel_span(2);

  bool needs_gravity = false;
  for (const auto ch : config.derived) {
    if (ch == DerivedChannel::kOdba || ch == DerivedChannel::kVedba) needs_gravity = true;
  }
  std::vector<double> gx, gy, gz;
  if (needs_gravity) {
    gx = rolling_mean(x, config.dba_smoothing_samples);
    gy = rolling_mean(y, config.dba_smoothing_samples);
    gz = rolling_mean(z, config.dba_smoothing_samples);
  }

  LabeledWindow out;
  out.calf_id = raw.calf_id;
  out.segment_id = raw.segment_id;
  out.behaviour_label = raw.behaviour_label;
  out.channels = 3 + config.derived.size();
  out.length = n;
  out.data.resize(out.channels * n);
  std::copy(raw.data.begin(), raw.data.end(), out.data.begin());

  for (std::size_t d = 0; d < config.derived.size(); ++d) {
    auto dst = out.channel_span(3 + d);
    switch (config.derived[d]) {
      case DerivedChannel::kMagnitude:
        for (std::size_t t = 0; t < n; ++t) {
          dst[t] = std::sqrt(x[t] * x[t] + y[t] * y[t] + z[t] * z[t]);
        }
        break;
      case DerivedChannel::kOdba:
        for (std::size_t t = 0; t < n; ++t) {
          dst[t] = std::abs(x[t] - gx[t]) + std::abs(y[t] - gy[t]) + std::abs(z[t] - gz[t]);
        }
        break;
      case DerivedChannel::kVedba:
        for (std::size_t t = 0; t < n; ++t) {
          const double dx = x[t] - gx[t], dy = y[t] - gy[t], dz = z[t] - gz[t];
          dst[t] = std::sqrt(dx * dx + dy * dy + dz * dz);
        }
        break;
      case DerivedChannel::kPitch:
        for (std::size_t t = 0; t < n; ++t) {
          dst[t] = safe_atan2(x[t], std::sqrt(y[t] * y[t] + z[t] * z[t]));
        }
        break;
      case DerivedChannel::kRoll:
        for (std::size_t t = 0; t < n; ++t) {
          dst[t] = safe_atan2(y[t], z[t]);
        }
        break;
    }
  }
  return out;
}

}  // namespace calf
