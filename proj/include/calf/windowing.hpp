#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "calf/types.hpp"

namespace calf {

// Splits a segment wherever consecutive timestamps are more than two sample
// periods apart, so windows never straddle a recording dropout. When no gap
// exists the segment comes back unchanged (original id); otherwise the parts
// are suffixed "#0", "#1", ...
std::vector<LabeledSegment> split_on_gaps(const LabeledSegment& segment, double sample_rate_hz);

// Cuts a segment into consecutive non-overlapping windows of
// round(window_seconds * sample_rate_hz) samples. The trailing remainder
// (shorter than one window) is discarded; a segment shorter than one window
// yields no windows. All samples must share one channel arity.
std::vector<LabeledWindow> window_segment(const LabeledSegment& segment, double window_seconds,
                                          double sample_rate_hz);

// Channels derivable from the three raw axes.
enum class DerivedChannel { kMagnitude, kOdba, kVedba, kPitch, kRoll };

DerivedChannel derived_channel_from_name(const std::string& name);
const std::string& derived_channel_name(DerivedChannel channel);

struct ChannelDerivationConfig {
  std::vector<DerivedChannel> derived = {
      DerivedChannel::kMagnitude, DerivedChannel::kOdba, DerivedChannel::kVedba,
      DerivedChannel::kPitch, DerivedChannel::kRoll};
  // Width of the centered rolling mean that estimates the gravity component
  // for ODBA/VeDBA (in samples, i.e. 1 s at 25 Hz).
  std::size_t dba_smoothing_samples = 25;
};

// Channel names for a raw x/y/z window extended per `config`, in output order.
std::vector<std::string> channel_names(const ChannelDerivationConfig& config);

// Appends the configured derived series to a 3-channel window. The result
// keeps the window's length and metadata; channel order is the raw axes
// followed by `config.derived` in the configured order.
//
//   magnitude = sqrt(x^2 + y^2 + z^2)
//   ODBA      = |x - g_x| + |y - g_y| + |z - g_z|
//   VeDBA     = sqrt((x-g_x)^2 + (y-g_y)^2 + (z-g_z)^2)
//   pitch     = atan2(x, sqrt(y^2 + z^2))
//   roll      = atan2(y, z)
//
// where g_* is the centered rolling mean of each axis (the window edge
// truncates the mean). atan2(0, 0) is taken as 0.
LabeledWindow derive_channels(const LabeledWindow& raw, const ChannelDerivationConfig& config = {});

}  // namespace calf
