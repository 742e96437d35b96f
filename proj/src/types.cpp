#include "calf/types.hpp"

#include <algorithm>
#include <set>

#include "calf/error.hpp"

namespace calf {

const std::vector<std::string>& behaviour_labels() {
  static const std::vector<std::string> kLabels = {
      "drinking_milk", "grooming", "lying", "running", "walking", "other"};
  return kLabels;
}

bool is_known_label(const std::string& label) {
  const auto& all = behaviour_labels();
  return std::find(all.begin(), all.end(), label) != all.end();
}

std::vector<std::string> canonical_label_order(const std::vector<std::string>& present) {
  std::set<std::string> seen;
  for (const auto& label : present) {
    if (!is_known_label(label)) {
      throw ValidationError("unknown behaviour label: '" + label + "'");
    }
    seen.insert(label);
  }
  std::vector<std::string> ordered;
  for (const auto& label : behaviour_labels()) {
    if (seen.count(label)) ordered.push_back(label);
  }
  return ordered;
}

Dataset::Dataset(std::vector<LabeledWindow> windows, std::vector<std::string> label_set)
    : windows_(std::move(windows)), label_set_(std::move(label_set)) {
  std::set<std::string> labels(label_set_.begin(), label_set_.end());
  if (labels.size() != label_set_.size()) {
    throw ValidationError("dataset label set contains duplicates");
  }
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const auto& w = windows_[i];
    if (w.channels == 0 || w.length == 0 || w.data.size() != w.channels * w.length) {
      throw ValidationError("window " + std::to_string(i) + " has inconsistent shape");
    }
    if (w.calf_id.empty()) {
      throw ValidationError("window " + std::to_string(i) + " has an empty calf id");
    }
    if (!labels.count(w.behaviour_label)) {
      throw ValidationError("window " + std::to_string(i) + " label '" + w.behaviour_label +
                            "' is not in the dataset label set");
    }
    calf_index_[w.calf_id].push_back(i);
  }
}

std::vector<std::string> Dataset::calves() const {
  std::vector<std::string> ids;
  ids.reserve(calf_index_.size());
  for (const auto& [id, _] : calf_index_) ids.push_back(id);
  return ids;  // std::map keeps them sorted
}

int Dataset::label_index(const std::string& label) const {
  const auto it = std::find(label_set_.begin(), label_set_.end(), label);
  return it == label_set_.end() ? -1 : static_cast<int>(it - label_set_.begin());
}

Dataset Dataset::subset_by_calves(const std::vector<std::string>& calf_ids) const {
  std::set<std::string> wanted(calf_ids.begin(), calf_ids.end());
  for (const auto& id : wanted) {
    if (!calf_index_.count(id)) {
      throw ValidationError("calf '" + id + "' is not in the dataset");
    }
  }
  std::vector<LabeledWindow> selected;
  for (const auto& w : windows_) {
    if (wanted.count(w.calf_id)) selected.push_back(w);
  }
  return Dataset(std::move(selected), label_set_);
}

std::pair<std::size_t, std::size_t> Dataset::uniform_shape() const {
  if (windows_.empty()) throw ValidationError("dataset has no windows");
  const std::size_t channels = windows_.front().channels;
  const std::size_t length = windows_.front().length;
  for (const auto& w : windows_) {
    if (w.channels != channels || w.length != length) {
      throw ValidationError("dataset windows have mixed shapes");
    }
  }
  return {channels, length};
}

}  // namespace calf
