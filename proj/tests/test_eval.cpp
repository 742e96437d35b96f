#include <fstream>
#include <sstream>

#include "doctest.h"

#include "calf/error.hpp"
#include "calf/eval.hpp"
#include "calf/io.hpp"
#include "support/tempdir.hpp"

using namespace calf;

TEST_CASE("confusion places counts at (true row, predicted column)") {
  const std::vector<std::string> order = {"a", "b", "c"};
  const std::vector<std::string> y_true = {"a", "a", "b", "c", "c", "c"};
  const std::vector<std::string> y_pred = {"a", "b", "b", "c", "c", "a"};
  const auto cm = confusion(y_true, y_pred, order);
  CHECK(cm.counts[0][0] == 1);
  CHECK(cm.counts[0][1] == 1);
  CHECK(cm.counts[1][1] == 1);
  CHECK(cm.counts[2][2] == 2);
  CHECK(cm.counts[2][0] == 1);
  CHECK(cm.total() == 6);

  CHECK_THROWS_AS(confusion({"a"}, {"a", "b"}, order), ValidationError);
  CHECK_THROWS_AS(confusion({"z"}, {"a"}, order), ValidationError);
  CHECK_THROWS_AS(confusion({"a"}, {"z"}, order), ValidationError);
  CHECK_THROWS_AS(confusion({"a"}, {"a"}, {"a", "a"}), ValidationError);
  CHECK_THROWS_AS(confusion({"a"}, {"a"}, {}), ValidationError);
}

TEST_CASE("macro_metrics per-class arithmetic") {
  ConfusionMatrix cm;
  cm.label_order = {"a", "b"};
  cm.counts = {{5, 1}, {2, 2}};
  const auto m = macro_metrics(cm);
  CHECK(m.precision[0] == doctest::Approx(5.0 / 7.0));
  CHECK(m.precision[1] == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall[0] == doctest::Approx(5.0 / 6.0));
  CHECK(m.recall[1] == doctest::Approx(2.0 / 4.0));
  const double f1_0 = 2.0 * (5.0 / 7.0) * (5.0 / 6.0) / (5.0 / 7.0 + 5.0 / 6.0);
  CHECK(m.f1[0] == doctest::Approx(f1_0));
  CHECK(m.support[0] == 6);
  CHECK(m.support[1] == 4);
  CHECK(m.macro_precision == doctest::Approx((5.0 / 7.0 + 2.0 / 3.0) / 2.0));
  CHECK(m.macro_recall == doctest::Approx((5.0 / 6.0 + 0.5) / 2.0));
  CHECK(m.macro_f1 == doctest::Approx((m.f1[0] + m.f1[1]) / 2.0));
}

TEST_CASE("empty classes: precision, recall and F1 default to zero, macros still divide by K") {
  ConfusionMatrix cm;
  cm.label_order = {"a", "b", "c"};
  cm.counts = {{4, 0, 0}, {0, 3, 0}, {0, 0, 0}};  // c never true, never predicted
  const auto m = macro_metrics(cm);
  CHECK(m.precision[2] == 0.0);
  CHECK(m.recall[2] == 0.0);
  CHECK(m.f1[2] == 0.0);
  CHECK(m.support[2] == 0);
  CHECK(m.macro_precision == doctest::Approx(2.0 / 3.0));  // (1 + 1 + 0) / 3
  CHECK(m.macro_recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.macro_f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("one-sided empties: predicted never true, true never predicted") {
  ConfusionMatrix cm;
  cm.label_order = {"a", "b"};
  cm.counts = {{0, 3}, {0, 5}};  // "a" never predicted correctly; all mass predicted "b"
  const auto m = macro_metrics(cm);
  CHECK(m.precision[0] == 0.0);  // column a empty
  CHECK(m.recall[0] == 0.0);     // 0 of 3
  CHECK(m.f1[0] == 0.0);         // p + r == 0
  CHECK(m.precision[1] == doctest::Approx(5.0 / 8.0));
  CHECK(m.recall[1] == 1.0);
}

TEST_CASE("macro_metrics validates the matrix") {
  ConfusionMatrix cm;
  cm.label_order = {"a", "b"};
  cm.counts = {{1, 2}};
  CHECK_THROWS_AS(macro_metrics(cm), ValidationError);
  cm.counts = {{1, 2}, {3, -1}};
  CHECK_THROWS_AS(macro_metrics(cm), ValidationError);
}

TEST_CASE("text report footnotes empty classes") {
  const auto cm = confusion({"a", "a"}, {"a", "b"}, {"a", "b", "c"});
  const auto report = macro_metrics(cm);
  const auto text = render_text_report(report, cm);
  CHECK(text.find("macro") != std::string::npos);
  CHECK(text.find("c*") != std::string::npos);
  CHECK(text.find("no true instances") != std::string::npos);

  const auto cm_full = confusion({"a", "b"}, {"a", "b"}, {"a", "b"});
  const auto text_full = render_text_report(macro_metrics(cm_full), cm_full);
  CHECK(text_full.find("no true instances") == std::string::npos);
}

TEST_CASE("write_report_files emits the three CSVs") {
  test::TempDir dir("eval");
  const auto cm = confusion({"a", "a", "b", "b"}, {"a", "b", "b", "b"}, {"a", "b", "c"});
  const auto report = macro_metrics(cm);
  write_report_files(report, cm, dir.str());

  const auto metrics = read_text_file(dir.str("metrics.csv"));
  CHECK(metrics.find("label,precision,recall,f1,support") == 0);
  CHECK(metrics.find("macro,") != std::string::npos);
  std::size_t lines = 0;
  for (const char c : metrics) lines += c == '\n';
  CHECK(lines == 5);  // header + 3 classes + macro

  const auto counts = read_text_file(dir.str("confusion.csv"));
  CHECK(counts.find("true\\pred,a,b,c") == 0);
  CHECK(counts.find("a,1,1,0") != std::string::npos);

  const auto norm = read_text_file(dir.str("confusion_norm.csv"));
  CHECK(norm.find("0.5000") != std::string::npos);
  CHECK(norm.find("c,0.0000,0.0000,0.0000") != std::string::npos);  // empty row stays zero
}
