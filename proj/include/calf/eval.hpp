#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace calf {

// Rows are true labels, columns predictions, both in label_order.
struct ConfusionMatrix {
  std::vector<std::string> label_order;
  std::vector<std::vector<std::int64_t>> counts;

  std::int64_t total() const;
};

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& label_order);

// Per-class and macro-averaged metrics. Conventions: a class never predicted
// has precision 0; a class absent from y_true has recall 0; F1 is 0 when
// precision + recall is 0. Macro averages are unweighted means over the full
// label order, empty classes included.
struct MetricReport {
  std::vector<std::string> label_order;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<std::int64_t> support;  // true-label counts
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

MetricReport macro_metrics(const ConfusionMatrix& cm);

// Human-readable report: per-class table, macro summary, row-normalized
// confusion matrix. Classes with zero support are footnoted.
std::string render_text_report(const MetricReport& report, const ConfusionMatrix& cm);

// Writes metrics.csv (per-class rows plus a "macro" row), confusion.csv
// (raw counts) and confusion_norm.csv (row-normalized, 4 decimal places)
// into out_dir.
void write_report_files(const MetricReport& report, const ConfusionMatrix& cm,
                        const std::string& out_dir);

}  // namespace calf
