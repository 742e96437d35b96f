#include "calf/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "calf/error.hpp"
#include "calf/io.hpp"

namespace calf {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, std::size_t line_no, const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("line " + std::to_string(line_no) + ": bad " + what + " '" + field +
                          "'");
  }
  if (!std::isfinite(value)) {
    throw ValidationError("line " + std::to_string(line_no) + ": non-finite " + what);
  }
  return value;
}

}  // namespace

std::vector<LabeledSegment> read_accel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  static const std::string kHeader = "calf_id,segment_id,timestamp,accX,accY,accZ,label";
  if (line != kHeader) {
    throw ValidationError("line 1: expected header '" + kHeader + "', got '" + line + "'");
  }

  struct Group {
    LabeledSegment segment;
    std::size_t first_line = 0;
    std::size_t last_line = 0;
  };
  std::map<std::string, Group> groups;
  std::vector<std::string> group_order;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 7) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 7 fields, got " +
                            std::to_string(fields.size()));
    }
    const std::string& calf_id = fields[0];
    const std::string& segment_id = fields[1];
    if (calf_id.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty calf_id");
    }
    if (segment_id.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty segment_id");
    }
    const double timestamp = parse_double(fields[2], line_no, "timestamp");
    AccelRecord record;
    record.timestamp = timestamp;
    record.channels = {parse_double(fields[3], line_no, "accX"),
                       parse_double(fields[4], line_no, "accY"),
                       parse_double(fields[5], line_no, "accZ")};
    const std::string& label = fields[6];
    if (!is_known_label(label)) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown label '" + label +
                            "'");
    }

    auto it = groups.find(segment_id);
    if (it == groups.end()) {
      Group group;
      group.segment.calf_id = calf_id;
      group.segment.segment_id = segment_id;
      group.segment.behaviour_label = label;
      group.first_line = line_no;
      it = groups.emplace(segment_id, std::move(group)).first;
      group_order.push_back(segment_id);
    } else {
      const auto& seg = it->second.segment;
      if (seg.calf_id != calf_id) {
        throw ValidationError("line " + std::to_string(line_no) + ": segment '" + segment_id +
                              "' switches calf from '" + seg.calf_id + "' to '" + calf_id + "'");
      }
      if (seg.behaviour_label != label) {
        throw ValidationError("line " + std::to_string(line_no) + ": segment '" + segment_id +
                              "' switches label from '" + seg.behaviour_label + "' to '" + label +
                              "'");
      }
      if (!seg.samples.empty() && timestamp <= seg.samples.back().timestamp) {
        throw ValidationError("line " + std::to_string(line_no) + ": segment '" + segment_id +
                              "' timestamps do not strictly increase");
      }
    }
    it->second.segment.samples.push_back(std::move(record));
    it->second.last_line = line_no;
  }

  if (group_order.empty()) throw ValidationError("'" + path + "' has no data rows");

  std::vector<LabeledSegment> segments;
  segments.reserve(group_order.size());
  for (const auto& id : group_order) segments.push_back(std::move(groups.at(id).segment));
  return segments;
}

IngestSummary summarize_segments(const std::vector<LabeledSegment>& segments,
                                 double sample_rate_hz) {
  if (sample_rate_hz <= 0.0) throw ValidationError("sample rate must be positive");

  struct Acc {
    double samples = 0.0;
    std::size_t segments = 0;
    std::set<std::string> calves;
  };
  std::map<std::string, Acc> per_label;
  std::set<std::string> all_calves;
  for (const auto& segment : segments) {
    auto& acc = per_label[segment.behaviour_label];
    acc.samples += static_cast<double>(segment.samples.size());
    acc.segments += 1;
    acc.calves.insert(segment.calf_id);
    all_calves.insert(segment.calf_id);
  }

  IngestSummary summary;
  for (const auto& label : behaviour_labels()) {
    const auto it = per_label.find(label);
    if (it == per_label.end()) continue;
    IngestSummary::Row row;
    row.label = label;
    row.minutes = it->second.samples / sample_rate_hz / 60.0;
    row.segments = it->second.segments;
    row.calves = it->second.calves.size();
    summary.total_minutes += row.minutes;
    summary.total_segments += row.segments;
    summary.rows.push_back(std::move(row));
  }
  summary.total_calves = all_calves.size();
  return summary;
}

std::string render_summary(const IngestSummary& summary) {
  std::ostringstream out;
  out << "behaviour        minutes    segments  calves\n";
  for (const auto& row : summary.rows) {
    out << row.label;
    for (std::size_t i = row.label.size(); i < 17; ++i) out << ' ';
    std::string minutes = format_fixed(row.minutes, 1);
    out << minutes;
    for (std::size_t i = minutes.size(); i < 11; ++i) out << ' ';
    std::string segs = std::to_string(row.segments);
    out << segs;
    for (std::size_t i = segs.size(); i < 10; ++i) out << ' ';
    out << row.calves << "\n";
  }
  out << "total            " << format_fixed(summary.total_minutes, 1) << " min, "
      << summary.total_segments << " segments, " << summary.total_calves << " calves\n";
  return out.str();
}

std::string summary_to_csv(const IngestSummary& summary) {
  std::ostringstream out;
  out << "label,minutes,segments,calves\n";
  for (const auto& row : summary.rows) {
    out << row.label << ',' << format_double(row.minutes) << ',' << row.segments << ','
        << row.calves << "\n";
  }
  out << "total," << format_double(summary.total_minutes) << ',' << summary.total_segments << ','
      << summary.total_calves << "\n";
  return out.str();
}

}  // namespace calf
