#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "calf/types.hpp"

namespace calf {

// Reads the raw-recording CSV. Expected header (exact):
//   calf_id,segment_id,timestamp,accX,accY,accZ,label
// Rows belonging to one segment may appear anywhere in the file; grouping is
// re-derived from segment_id (keeping file order within a group), and each
// group must then have one calf, one label, and strictly increasing
// timestamps. Malformed rows are reported with their 1-based line number.
std::vector<LabeledSegment> read_accel_csv(const std::string& path);

// Per-behaviour totals of an ingested recording set.
struct IngestSummary {
  struct Row {
    std::string label;
    double minutes = 0.0;
    std::size_t segments = 0;
    std::size_t calves = 0;
  };
  std::vector<Row> rows;  // ethogram order, present labels only
  double total_minutes = 0.0;
  std::size_t total_segments = 0;
  std::size_t total_calves = 0;
};

IngestSummary summarize_segments(const std::vector<LabeledSegment>& segments,
                                 double sample_rate_hz);

std::string render_summary(const IngestSummary& summary);
std::string summary_to_csv(const IngestSummary& summary);

}  // namespace calf
