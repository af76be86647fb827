// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the engine exclusively through the
// C API in simscore.h; JSON is only assembled/parsed for configuration
// and presentation.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "simscore.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// RAII wrappers over the C handles.
struct DatasetDeleter {
  void operator()(ss_dataset* d) const { ss_dataset_free(d); }
};
struct ModelDeleter {
  void operator()(ss_model* m) const { ss_model_free(m); }
};
using DatasetPtr = std::unique_ptr<ss_dataset, DatasetDeleter>;
using ModelPtr = std::unique_ptr<ss_model, ModelDeleter>;

std::string take_string(char* text) {
  std::string out = text ? text : "";
  ss_string_free(text);
  return out;
}

// Fails with the library's error message; the status code doubles as the
// process exit code (1 usage, 2 data).
int report_error(int status) {
  std::cerr << "error: " << ss_last_error() << "\n";
  return status;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

DatasetPtr load_dataset_or_throw(const std::string& path, int* status) {
  ss_dataset* raw = nullptr;
  *status = ss_dataset_load(path.c_str(), &raw);
  return DatasetPtr(raw);
}

int run_ingest(const std::string& config_path, const std::string& out_path) {
  const std::string config = read_text(config_path);
  ss_dataset* raw = nullptr;
  if (const int status = ss_ingest(config.c_str(), &raw); status != SS_OK)
    return report_error(status);
  DatasetPtr dataset(raw);
  if (const int status = ss_dataset_save(dataset.get(), out_path.c_str());
      status != SS_OK)
    return report_error(status);

  char* info = nullptr;
  if (ss_dataset_info(dataset.get(), &info) == SS_OK)
    std::cout << take_string(info) << "\n";
  std::cerr << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_synth(std::uint64_t seed, double sigma, std::size_t groups, std::size_t impls,
              const std::string& spec_path, const std::string& emit_spec_path,
              const std::string& out_path) {
  json config = {{"seed", seed},
                 {"sigma", sigma},
                 {"group_count", groups},
                 {"impls_per_group", impls}};
  if (!spec_path.empty()) config["spec"] = json::parse(read_text(spec_path));

  if (!emit_spec_path.empty()) {
    char* spec_text = nullptr;
    if (!spec_path.empty()) {
      atomic_write_text(emit_spec_path, config.at("spec").dump(2));
    } else if (const int status = ss_default_spec(config.dump().c_str(), &spec_text);
               status == SS_OK) {
      atomic_write_text(emit_spec_path, take_string(spec_text));
    } else {
      return report_error(status);
    }
    std::cerr << "wrote " << emit_spec_path << "\n";
  }

  ss_dataset* raw = nullptr;
  if (const int status = ss_synthesize(config.dump().c_str(), &raw); status != SS_OK)
    return report_error(status);
  DatasetPtr dataset(raw);
  if (const int status = ss_dataset_save(dataset.get(), out_path.c_str());
      status != SS_OK)
    return report_error(status);
  std::cerr << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_train(const std::string& data_path, const std::string& predictor,
              std::uint64_t seed, const std::string& config_path,
              const std::string& out_path) {
  int status = SS_OK;
  DatasetPtr dataset = load_dataset_or_throw(data_path, &status);
  if (status != SS_OK) return report_error(status);

  json config = config_path.empty() ? json::object() : json::parse(read_text(config_path));
  config["predictor"] = predictor;
  config["seed"] = seed;

  ss_model* raw = nullptr;
  if ((status = ss_train(dataset.get(), config.dump().c_str(), &raw)) != SS_OK)
    return report_error(status);
  ModelPtr model(raw);
  if ((status = ss_model_save(model.get(), out_path.c_str())) != SS_OK)
    return report_error(status);

  char* info = nullptr;
  if (ss_model_info(model.get(), &info) == SS_OK) std::cout << take_string(info) << "\n";
  std::cerr << "wrote " << out_path << "\n";
  return kExitOk;
}

int run_tune(const std::string& data_path, const std::string& method,
             std::size_t budget, std::uint64_t seed, const std::string& loss,
             double test_fraction, const std::string& trace_csv_path) {
  int status = SS_OK;
  DatasetPtr dataset = load_dataset_or_throw(data_path, &status);
  if (status != SS_OK) return report_error(status);

  const json config = {{"method", method}, {"budget", budget},   {"seed", seed},
                       {"loss", loss},     {"test_fraction", test_fraction}};
  char* raw = nullptr;
  if ((status = ss_tune(dataset.get(), config.dump().c_str(), &raw)) != SS_OK)
    return report_error(status);
  const json result = json::parse(take_string(raw));

  if (!trace_csv_path.empty())
    atomic_write_text(trace_csv_path, result.at("trace_csv").get<std::string>());
  json printable = result;
  printable.erase("trace_csv");
  std::cout << printable.dump(2) << "\n";
  return kExitOk;
}

int run_evaluate(const std::string& data_path, std::size_t test_count,
                 std::size_t repetitions, std::uint64_t seed,
                 const std::vector<std::string>& predictors, bool include_perfect,
                 const std::string& logo, const std::string& csv_path) {
  int status = SS_OK;
  DatasetPtr dataset = load_dataset_or_throw(data_path, &status);
  if (status != SS_OK) return report_error(status);

  json plan = {{"test_count", test_count},
               {"repetitions", repetitions},
               {"seed", seed},
               {"include_perfect", include_perfect}};
  if (!predictors.empty()) plan["predictors"] = predictors;
  if (!logo.empty()) {
    // --logo kernel_type:group_id:predictor
    const auto first = logo.find(':');
    const auto second = logo.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      std::cerr << "error: --logo expects kernel_type:group_id:predictor\n";
      return kExitUsage;
    }
    plan["logo"] = {{"kernel_type", logo.substr(0, first)},
                    {"group_id", std::stoul(logo.substr(first + 1, second - first - 1))},
                    {"predictor", logo.substr(second + 1)}};
  }

  char* raw = nullptr;
  if ((status = ss_evaluate(dataset.get(), plan.dump().c_str(), &raw)) != SS_OK)
    return report_error(status);
  const json result = json::parse(take_string(raw));

  if (!csv_path.empty())
    atomic_write_text(csv_path, result.at("csv").get<std::string>());
  std::cout << result.at("table").get<std::string>();
  return kExitOk;
}

int run_rank(const std::string& data_path, const std::string& model_path,
             const std::string& window, std::size_t window_size,
             const std::string& csv_path, bool print_json) {
  int status = SS_OK;
  DatasetPtr dataset = load_dataset_or_throw(data_path, &status);
  if (status != SS_OK) return report_error(status);
  ss_model* raw_model = nullptr;
  if ((status = ss_model_load(model_path.c_str(), &raw_model)) != SS_OK)
    return report_error(status);
  ModelPtr model(raw_model);

  json config = {{"window", window}};
  if (window_size > 0) config["window_size"] = window_size;
  char* raw = nullptr;
  if ((status = ss_rank(dataset.get(), model.get(), config.dump().c_str(), &raw)) !=
      SS_OK)
    return report_error(status);
  const json result = json::parse(take_string(raw));

  if (!csv_path.empty())
    atomic_write_text(csv_path, result.at("csv").get<std::string>());
  if (print_json)
    std::cout << result.dump(2) << "\n";
  else
    std::cout << result.at("csv").get<std::string>();
  return kExitOk;
}

int run_plan(double t_sim, double t_cool, double t_ref, std::uint64_t n_exe) {
  std::uint64_t count = 0;
  if (const int status = ss_plan_parallelism(t_sim, t_cool, t_ref, n_exe, &count);
      status != SS_OK)
    return report_error(status);
  std::cout << count << "\n";
  return kExitOk;
}

int run_loop(const std::string& config_path, std::optional<std::uint64_t> seed) {
  json config = json::parse(read_text(config_path));
  if (seed) config["seed"] = *seed;
  char* raw = nullptr;
  if (const int status = ss_run_loop(config.dump().c_str(), &raw); status != SS_OK)
    return report_error(status);
  std::cout << take_string(raw) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranks ML-kernel implementations from simulator statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("simscore ") + ss_version());

  // ingest
  std::string ingest_config, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "Build a dataset from stats dumps");
  ingest->add_option("--config", ingest_config, "Ingest configuration JSON")->required();
  ingest->add_option("--out", ingest_out, "Output dataset (JSONL)")->required();

  // synth
  std::uint64_t synth_seed = 0;
  double synth_sigma = 0.02;
  std::size_t synth_groups = 5, synth_impls = 500;
  std::string synth_spec, synth_emit_spec, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic benchmark dataset");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--sigma", synth_sigma, "Runtime noise sigma");
  synth->add_option("--groups", synth_groups, "Number of kernel groups");
  synth->add_option("--impls", synth_impls, "Implementations per group");
  synth->add_option("--spec", synth_spec, "Full synthetic spec JSON (overrides the rest)");
  synth->add_option("--emit-spec", synth_emit_spec, "Write the effective spec JSON here");
  synth->add_option("--out", synth_out, "Output dataset (JSONL)")->required();

  // train
  std::string train_data, train_predictor = "gbt", train_config, train_out;
  std::uint64_t train_seed = 0;
  auto* train = app.add_subcommand("train", "Fit a predictor on a dataset");
  train->add_option("--data", train_data, "Dataset (JSONL)")->required();
  train->add_option("--predictor", train_predictor, "mlr | mlp | gp | gbt");
  train->add_option("--seed", train_seed, "Random seed");
  train->add_option("--config", train_config, "Hyperparameter JSON");
  train->add_option("--out", train_out, "Output model (JSON)")->required();

  // tune
  std::string tune_data, tune_method = "bayes", tune_loss = "mse", tune_trace;
  std::size_t tune_budget = 30;
  std::uint64_t tune_seed = 0;
  double tune_fraction = 0.25;
  auto* tune = app.add_subcommand("tune", "Tune GP hyperparameters on a dataset");
  tune->add_option("--data", tune_data, "Dataset (JSONL)")->required();
  tune->add_option("--method", tune_method, "bayes | grid");
  tune->add_option("--budget", tune_budget, "Evaluation budget");
  tune->add_option("--seed", tune_seed, "Random seed");
  tune->add_option("--loss", tune_loss, "mse | mae | rss");
  tune->add_option("--test-fraction", tune_fraction, "Held-out fraction");
  tune->add_option("--trace-csv", tune_trace, "Write the evaluation trace CSV here");

  // evaluate
  std::string eval_data, eval_logo, eval_csv;
  std::size_t eval_test = 100, eval_reps = 10;
  std::uint64_t eval_seed = 0;
  std::vector<std::string> eval_predictors;
  bool eval_perfect = false;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated ranking metrics");
  evaluate->add_option("--data", eval_data, "Dataset (JSONL)")->required();
  evaluate->add_option("--test-count", eval_test, "Held-out samples per group");
  evaluate->add_option("--reps", eval_reps, "Split repetitions");
  evaluate->add_option("--seed", eval_seed, "Random seed");
  evaluate->add_option("--predictors", eval_predictors, "Subset of mlr,mlp,gp,gbt")
      ->delimiter(',');
  evaluate->add_flag("--perfect", eval_perfect, "Include the oracle predictor");
  evaluate->add_option("--logo", eval_logo,
                       "Leave-one-group-out: kernel_type:group_id:predictor");
  evaluate->add_option("--csv", eval_csv, "Write the report CSV here");

  // rank
  std::string rank_data, rank_model, rank_window = "exact", rank_csv;
  std::size_t rank_window_size = 0;
  bool rank_json = false;
  auto* rank = app.add_subcommand("rank", "Score and rank a dataset with a model");
  rank->add_option("--data", rank_data, "Dataset (JSONL)")->required();
  rank->add_option("--model", rank_model, "Model (JSON)")->required();
  rank->add_option("--window", rank_window, "exact | static | dynamic");
  rank->add_option("--window-size", rank_window_size, "Static window size");
  rank->add_option("--csv", rank_csv, "Write the report CSV here");
  rank->add_flag("--json", rank_json, "Print the full result JSON");

  // plan-parallelism
  double plan_sim = 0.0, plan_cool = 0.0, plan_ref = 0.0;
  std::uint64_t plan_exe = 15;
  auto* plan = app.add_subcommand("plan-parallelism",
                                  "Break-even parallel simulator count");
  plan->add_option("--t-sim", plan_sim, "Simulator runtime, seconds")->required();
  plan->add_option("--cooldown,--t-cool", plan_cool, "Hardware cooldown, seconds")
      ->required();
  plan->add_option("--t-ref", plan_ref, "Native kernel runtime, seconds")->required();
  plan->add_option("--n-exe", plan_exe, "Measured executions per implementation");

  // run
  std::string run_config;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Batched candidate-tuning loop");
  run->add_option("--config", run_config, "Run configuration JSON")->required();
  run->add_option("--seed", run_seed, "Random seed (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) return run_ingest(ingest_config, ingest_out);
    if (*synth)
      return run_synth(synth_seed, synth_sigma, synth_groups, synth_impls, synth_spec,
                       synth_emit_spec, synth_out);
    if (*train)
      return run_train(train_data, train_predictor, train_seed, train_config, train_out);
    if (*tune)
      return run_tune(tune_data, tune_method, tune_budget, tune_seed, tune_loss,
                      tune_fraction, tune_trace);
    if (*evaluate)
      return run_evaluate(eval_data, eval_test, eval_reps, eval_seed, eval_predictors,
                          eval_perfect, eval_logo, eval_csv);
    if (*rank)
      return run_rank(rank_data, rank_model, rank_window, rank_window_size, rank_csv,
                      rank_json);
    if (*plan) return run_plan(plan_sim, plan_cool, plan_ref, plan_exe);
    if (*run) return run_loop(run_config, run_seed);
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
