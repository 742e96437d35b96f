#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace calf {

// The closed behaviour label set, in ethogram order. Inputs carrying any
// other label are rejected at ingest.
const std::vector<std::string>& behaviour_labels();
bool is_known_label(const std::string& label);

// Labels from `present`, ordered as in behaviour_labels(). Unknown labels
// throw ValidationError.
std::vector<std::string> canonical_label_order(const std::vector<std::string>& present);

// One accelerometer sample; channels[0..2] are the raw x/y/z axes in g.
struct AccelRecord {
  double timestamp = 0.0;  // seconds
  std::vector<double> channels;
};

// A contiguous annotated stretch of one behaviour from one calf, sampled at
// a fixed rate. Timestamps increase strictly.
struct LabeledSegment {
  std::string calf_id;
  std::string segment_id;
  std::string behaviour_label;
  std::vector<AccelRecord> samples;
};

// Fixed-length multichannel snippet; data is channel-major, so channel c
// occupies data[c * length .. (c + 1) * length).
struct LabeledWindow {
  std::string calf_id;
  std::string segment_id;
  std::string behaviour_label;
  std::size_t channels = 0;
  std::size_t length = 0;
  std::vector<double> data;

  double at(std::size_t channel, std::size_t t) const { return data[channel * length + t]; }
  double& at(std::size_t channel, std::size_t t) { return data[channel * length + t]; }

  std::span<const double> channel_span(std::size_t channel) const {
    return {data.data() + channel * length, length};
  }
  std::span<double> channel_span(std::size_t channel) {
    return {data.data() + channel * length, length};
  }
};

// Window container with a calf-level index. Construction validates that
// every window's label is covered by the label set and that each window's
// buffer matches its declared shape; the calf index maps every window
// exactly once.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<LabeledWindow> windows, std::vector<std::string> label_set);

  const std::vector<LabeledWindow>& windows() const { return windows_; }
  const std::vector<std::string>& label_set() const { return label_set_; }
  const std::map<std::string, std::vector<std::size_t>>& calf_index() const { return calf_index_; }

  std::size_t size() const { return windows_.size(); }

  // Sorted calf ids.
  std::vector<std::string> calves() const;

  // Position of `label` in the label set, or -1.
  int label_index(const std::string& label) const;

  // Windows belonging to the given calves, in dataset order; the label set
  // is carried over unchanged so class indices stay stable across subsets.
  Dataset subset_by_calves(const std::vector<std::string>& calf_ids) const;

  // Common (channels, length) of all windows; throws ValidationError when
  // the dataset is empty or shapes are mixed.
  std::pair<std::size_t, std::size_t> uniform_shape() const;

 private:
  std::vector<LabeledWindow> windows_;
  std::vector<std::string> label_set_;
  std::map<std::string, std::vector<std::size_t>> calf_index_;
};

}  // namespace calf
