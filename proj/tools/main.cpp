#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "calf/error.hpp"
#include "calf/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

void add_common(CLI::App& cmd, CommonOptions& common) {
  cmd.add_option("--config", common.config_path, "Experiment configuration JSON");
  cmd.add_option("--seed", common.seed, "Master seed override");
  cmd.add_option("--workers", common.workers, "Worker thread count override (0 = auto)");
}

calf::ExperimentConfig resolve_config(const CommonOptions& common) {
  auto config = common.config_path.empty() ? calf::default_experiment_config()
                                           : calf::load_experiment_config(common.config_path);
  if (common.seed) config.seed = *common.seed;
  if (common.workers) config.workers = *common.workers;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calf behaviour classification from collar accelerometer recordings"};
  app.require_subcommand(1);

  CommonOptions common;

  std::string csv_path, data_path, split_path, model_dir, out_dir, predictions_path;
  std::vector<std::string> report_labels;

  auto* ingest = app.add_subcommand("ingest", "CSV recordings -> windowed dataset archive");
  ingest->add_option("--csv", csv_path, "Input recordings CSV")->required();
  ingest->add_option("--out", out_dir, "Output directory")->required();
  add_common(*ingest, common);

  auto* split = app.add_subcommand("split", "Dataset -> subject-level test/validation split");
  split->add_option("--data", data_path, "Dataset archive from ingest")->required();
  split->add_option("--out", out_dir, "Output directory")->required();
  add_common(*split, common);

  auto* train = app.add_subcommand("train", "Fit the transform and classifier on training calves");
  train->add_option("--data", data_path, "Dataset archive from ingest")->required();
  train->add_option("--split", split_path, "split.json from split")->required();
  train->add_option("--out", out_dir, "Output directory")->required();
  add_common(*train, common);

  auto* evaluate = app.add_subcommand("evaluate", "Score the fitted model on the test calves");
  evaluate->add_option("--data", data_path, "Dataset archive from ingest")->required();
  evaluate->add_option("--split", split_path, "split.json from split")->required();
  evaluate->add_option("--model", model_dir, "Directory holding train outputs")->required();
  evaluate->add_option("--out", out_dir, "Output directory")->required();
  add_common(*evaluate, common);

  auto* report = app.add_subcommand("report", "Regenerate metric reports from a predictions CSV");
  report->add_option("--predictions", predictions_path, "predictions.csv from evaluate")
      ->required();
  report->add_option("--out", out_dir, "Output directory")->required();
  report->add_option("--labels", report_labels, "Label order (default: labels present)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? calf::exit_code::kOk : calf::exit_code::kUsage;
  }

  try {
    std::string output;
    if (ingest->parsed()) {
      output = calf::cmd_ingest(resolve_config(common), csv_path, out_dir);
    } else if (split->parsed()) {
      output = calf::cmd_split(resolve_config(common), data_path, out_dir);
    } else if (train->parsed()) {
      output = calf::cmd_train(resolve_config(common), data_path, split_path, out_dir);
    } else if (evaluate->parsed()) {
      output = calf::cmd_evaluate(resolve_config(common), data_path, split_path, model_dir,
                                  out_dir);
    } else if (report->parsed()) {
      output = calf::cmd_report(predictions_path, out_dir, report_labels);
    }
    std::cout << output;
    return calf::exit_code::kOk;
  } catch (const calf::LeakageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return calf::exit_code::kLeakage;
  } catch (const calf::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return calf::exit_code::kNumerical;
  } catch (const calf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return calf::exit_code::kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return calf::exit_code::kUsage;
  }
}
