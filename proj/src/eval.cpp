#include "calf/eval.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include "calf/error.hpp"
#include "calf/io.hpp"

namespace calf {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts) {
    for (const auto v : row) sum += v;
  }
  return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& label_order) {
  if (y_true.size() != y_pred.size()) {
    throw ValidationError("true and predicted label lists differ in length (" +
                          std::to_string(y_true.size()) + " vs " + std::to_string(y_pred.size()) +
                          ")");
  }
  if (label_order.empty()) throw ValidationError("label order is empty");

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < label_order.size(); ++i) {
    if (!index.emplace(label_order[i], i).second) {
      throw ValidationError("label order repeats '" + label_order[i] + "'");
    }
  }

  ConfusionMatrix cm;
  cm.label_order = label_order;
  cm.counts.assign(label_order.size(), std::vector<std::int64_t>(label_order.size(), 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = index.find(y_true[i]);
    if (t == index.end()) {
      throw ValidationError("true label '" + y_true[i] + "' is not in the label order");
    }
    const auto p = index.find(y_pred[i]);
    if (p == index.end()) {
      throw ValidationError("predicted label '" + y_pred[i] + "' is not in the label order");
    }
    ++cm.counts[t->second][p->second];
  }
  return cm;
}

MetricReport macro_metrics(const ConfusionMatrix& cm) {
  const std::size_t K = cm.label_order.size();
  if (cm.counts.size() != K) throw ValidationError("confusion matrix shape mismatch");
  for (const auto& row : cm.counts) {
    if (row.size() != K) throw ValidationError("confusion matrix shape mismatch");
    for (const auto v : row) {
      if (v < 0) throw ValidationError("confusion matrix has negative counts");
    }
  }

  MetricReport report;
  report.label_order = cm.label_order;
  report.precision.resize(K);
  report.recall.resize(K);
  report.f1.resize(K);
  report.support.resize(K);

  for (std::size_t k = 0; k < K; ++k) {
    const std::int64_t tp = cm.counts[k][k];
    std::int64_t row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < K; ++j) {
      row_sum += cm.counts[k][j];
      col_sum += cm.counts[j][k];
    }
    report.support[k] = row_sum;
    const double precision =
        col_sum > 0 ? static_cast<double>(tp) / static_cast<double>(col_sum) : 0.0;
    const double recall =
        row_sum > 0 ? static_cast<double>(tp) / static_cast<double>(row_sum) : 0.0;
    report.precision[k] = precision;
    report.recall[k] = recall;
    report.f1[k] =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }

  double sp = 0.0, sr = 0.0, sf = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    sp += report.precision[k];
    sr += report.recall[k];
    sf += report.f1[k];
  }
  report.macro_precision = sp / static_cast<double>(K);
  report.macro_recall = sr / static_cast<double>(K);
  report.macro_f1 = sf / static_cast<double>(K);
  return report;
}

namespace {

void pad_to(std::ostringstream& out, const std::string& text, std::size_t width) {
  out << text;
  for (std::size_t i = text.size(); i < width; ++i) out << ' ';
}

}  // namespace

std::string render_text_report(const MetricReport& report, const ConfusionMatrix& cm) {
  std::size_t label_width = 10;
  for (const auto& label : report.label_order) {
    label_width = std::max(label_width, label.size() + 2);
  }

  std::ostringstream out;
  out << "per-class metrics\n";
  pad_to(out, "label", label_width);
  out << "precision  recall     f1         support\n";
  bool any_empty = false;
  for (std::size_t k = 0; k < report.label_order.size(); ++k) {
    const bool empty = report.support[k] == 0;
    any_empty = any_empty || empty;
    pad_to(out, report.label_order[k] + (empty ? "*" : ""), label_width);
    pad_to(out, format_fixed(report.precision[k], 4), 11);
    pad_to(out, format_fixed(report.recall[k], 4), 11);
    pad_to(out, format_fixed(report.f1[k], 4), 11);
    out << report.support[k] << "\n";
  }
  out << "\nmacro: precision " << format_fixed(report.macro_precision, 4) << "  recall "
      << format_fixed(report.macro_recall, 4) << "  f1 " << format_fixed(report.macro_f1, 4)
      << "\n";

  out << "\nconfusion (rows true, columns predicted, row-normalized)\n";
  pad_to(out, "", label_width);
  for (const auto& label : cm.label_order) pad_to(out, label, label_width);
  out << "\n";
  for (std::size_t i = 0; i < cm.label_order.size(); ++i) {
    pad_to(out, cm.label_order[i], label_width);
    std::int64_t row_sum = 0;
    for (const auto v : cm.counts[i]) row_sum += v;
    for (std::size_t j = 0; j < cm.label_order.size(); ++j) {
      const double norm =
          row_sum > 0 ? static_cast<double>(cm.counts[i][j]) / static_cast<double>(row_sum) : 0.0;
      pad_to(out, format_fixed(norm, 4), label_width);
    }
    out << "\n";
  }
  if (any_empty) {
    out << "\n* no true instances of this class in the evaluated split\n";
  }
  return out.str();
}

void write_report_files(const MetricReport& report, const ConfusionMatrix& cm,
                        const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  std::ostringstream metrics;
  metrics << "label,precision,recall,f1,support\n";
  for (std::size_t k = 0; k < report.label_order.size(); ++k) {
    metrics << report.label_order[k] << ',' << format_double(report.precision[k]) << ','
            << format_double(report.recall[k]) << ',' << format_double(report.f1[k]) << ','
            << report.support[k] << "\n";
  }
  std::int64_t total_support = 0;
  for (const auto s : report.support) total_support += s;
  metrics << "macro," << format_double(report.macro_precision) << ','
          << format_double(report.macro_recall) << ',' << format_double(report.macro_f1) << ','
          << total_support << "\n";
  write_text_file((dir / "metrics.csv").string(), metrics.str());

  std::ostringstream raw;
  raw << "true\\pred";
  for (const auto& label : cm.label_order) raw << ',' << label;
  raw << "\n";
  for (std::size_t i = 0; i < cm.label_order.size(); ++i) {
    raw << cm.label_order[i];
    for (const auto v : cm.counts[i]) raw << ',' << v;
    raw << "\n";
  }
  write_text_file((dir / "confusion.csv").string(), raw.str());

  std::ostringstream norm;
  norm << "true\\pred";
  for (const auto& label : cm.label_order) norm << ',' << label;
  norm << "\n";
  for (std::size_t i = 0; i < cm.label_order.size(); ++i) {
    norm << cm.label_order[i];
    std::int64_t row_sum = 0;
    for (const auto v : cm.counts[i]) row_sum += v;
    for (const auto v : cm.counts[i]) {
      const double value =
          row_sum > 0 ? static_cast<double>(v) / static_cast<double>(row_sum) : 0.0;
      norm << ',' << format_fixed(value, 4);
    }
    norm << "\n";
  }
  write_text_file((dir / "confusion_norm.csv").string(), norm.str());
}

}  // namespace calf
