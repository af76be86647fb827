// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "simscore/dataset.hpp"
#include "simscore/evaluation.hpp"
#include "simscore/features.hpp"
#include "simscore/hyperopt.hpp"
#include "simscore/metrics.hpp"
#include "simscore/orchestrator.hpp"
#include "simscore/predictors.hpp"
#include "simscore/stats_parser.hpp"
#include "simscore/synthetic.hpp"

using nlohmann::json;
using namespace simscore;

struct ss_dataset {
  Dataset value;
};

struct ss_model {
  PredictorModel value;
};

namespace {

thread_local std::string g_last_error;

/// Raised for malformed configuration; maps to SS_USAGE where DataError
/// maps to SS_DATA.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return SS_OK;
  } catch (const UsageError& e) {
    return fail(SS_USAGE, e.what());
  } catch (const json::exception& e) {
    return fail(SS_USAGE, std::string("invalid JSON: ") + e.what());
  } catch (const DataError& e) {
    return fail(SS_DATA, e.what());
  } catch (const std::exception& e) {
    return fail(SS_DATA, e.what());
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

json parse_config(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return json::object();
  const json j = json::parse(config_json);
  if (!j.is_object()) throw UsageError("configuration must be a JSON object");
  return j;
}

void require_out(const void* out, const char* name) {
  if (out == nullptr) throw UsageError(std::string(name) + " must not be null");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json report_to_json(const RankingReport& report) {
  return {{"kernel_type", report.group.kernel_type},
          {"group_id", report.group.group_id},
          {"predictor", report.predictor},
          {"e_top1", report.e_top1},
          {"r_top1", report.r_top1},
          {"q_low", report.q_low},
          {"q_high", report.q_high},
          {"n", report.sample_count}};
}

GroupKey group_key_from_json(const json& j) {
  GroupKey key;
  key.kernel_type = j.at("kernel_type").get<std::string>();
  key.group_id = j.at("group_id").get<std::uint32_t>();
  return key;
}

MlpConfig mlp_config_from_json(const json& j) {
  MlpConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "learning_rate") config.learning_rate = value.get<double>();
    else if (key == "batch_size") config.batch_size = value.get<std::size_t>();
    else if (key == "epochs") config.epochs = value.get<std::size_t>();
    else if (key == "patience") config.patience = value.get<std::size_t>();
    else if (key == "validation_fraction") config.validation_fraction = value.get<double>();
    else if (key == "standardize") config.standardize = value.get<bool>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else throw UsageError("unknown mlp option: " + key);
  }
  return config;
}

GbtConfig gbt_config_from_json(const json& j) {
  GbtConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_trees") config.n_trees = value.get<std::size_t>();
    else if (key == "max_depth") config.max_depth = value.get<int>();
    else if (key == "learning_rate") config.learning_rate = value.get<double>();
    else if (key == "subsample") config.subsample = value.get<double>();
    else if (key == "colsample") config.colsample = value.get<double>();
    else if (key == "reg_lambda") config.reg_lambda = value.get<double>();
    else if (key == "reg_alpha") config.reg_alpha = value.get<double>();
    else if (key == "min_child_weight") config.min_child_weight = value.get<double>();
    else if (key == "base_score") config.base_score = value.get<double>();
    else if (key == "seed") config.seed = value.get<std::uint64_t>();
    else throw UsageError("unknown gbt option: " + key);
  }
  return config;
}

GpHyper gp_hyper_from_json(const json& j, GpHyper hyper) {
  for (const auto& [key, value] : j.items()) {
    if (key == "constant") hyper.constant = value.get<double>();
    else if (key == "length_scale") hyper.length_scale = value.get<double>();
    else if (key == "noise") hyper.noise = value.get<double>();
    else throw UsageError("unknown gp option: " + key);
  }
  return hyper;
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "1.0.0"; }

const char* ss_last_error(void) { return g_last_error.c_str(); }

void ss_string_free(char* text) { std::free(text); }

// ---- datasets ------------------------------------------------------------

int ss_dataset_load(const char* path, ss_dataset** out) {
  return guarded([&] {
    require_out(out, "out");
    if (path == nullptr) throw UsageError("path must not be null");
    auto handle = std::make_unique<ss_dataset>();
    try {
      handle->value = load_dataset(path);
    } catch (const nlohmann::json::exception& e) {
      // A file that parses but has the wrong shape is bad data, not misuse.
      throw DataError(std::string("invalid dataset file: ") + e.what());
    }
    *out = handle.release();
  });
}

int ss_dataset_save(const ss_dataset* dataset, const char* path) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    if (path == nullptr) throw UsageError("path must not be null");
    save_dataset(dataset->value, path);
  });
}

void ss_dataset_free(ss_dataset* dataset) { delete dataset; }

int ss_dataset_info(const ss_dataset* dataset, char** out_json) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    require_out(out_json, "out_json");
    const Dataset& d = dataset->value;
    std::map<GroupKey, std::size_t> counts;
    for (const auto& record : d.records) ++counts[record.group];
    json groups = json::array();
    for (const auto& group : d.groups)
      groups.push_back({{"kernel_type", group.kernel_type},
                        {"group_id", group.group_id},
                        {"records", counts[group.key()]}});
    json levels = json::array();
    for (const auto& level : d.topology.levels)
      levels.push_back({{"name", level.name},
                        {"size_bytes", level.size_bytes},
                        {"sets", level.sets},
                        {"associativity", level.associativity}});
    const json info = {{"records", d.records.size()},
                       {"groups", groups},
                       {"architecture", d.topology.architecture},
                       {"line_size_bytes", d.topology.line_size_bytes},
                       {"levels", levels}};
    *out_json = copy_string(info.dump(2));
  });
}

int ss_ingest(const char* config_json, ss_dataset** out) {
  return guarded([&] {
    require_out(out, "out");
    const json config = parse_config(config_json);

    Dataset dataset;
    if (config.contains("topology"))
      dataset.topology = topology_from_json(config.at("topology"));
    else if (config.contains("topology_path"))
      dataset.topology = load_topology(config.at("topology_path").get<std::string>());
    else
      throw UsageError("ingest config needs \"topology\" or \"topology_path\"");
    dataset.topology.validate();

    StatsMapping mapping = config.contains("mapping_path")
                               ? StatsMapping::from_file(
                                     config.at("mapping_path").get<std::string>())
                               : default_gem5_mapping(dataset.topology);
    mapping.require_roles_for(dataset.topology);

    for (const json& g : config.value("groups", json::array())) {
      KernelGroup group;
      group.kernel_type = g.at("kernel_type").get<std::string>();
      group.group_id = g.at("group_id").get<std::uint32_t>();
      const json group_params = g.value("params", json::object());
      for (const auto& [name, value] : group_params.items()) {
        std::vector<std::int64_t> values;
        if (value.is_array())
          for (const json& v : value) values.push_back(v.get<std::int64_t>());
        else
          values.push_back(value.get<std::int64_t>());
        group.params.emplace_back(name, std::move(values));
      }
      dataset.groups.push_back(std::move(group));
    }

    if (!config.contains("records")) throw UsageError("ingest config needs \"records\"");
    for (const json& r : config.at("records")) {
      ImplementationRecord record;
      record.group.kernel_type = r.at("kernel_type").get<std::string>();
      record.group.group_id = r.at("group_id").get<std::uint32_t>();
      record.impl_id = r.at("impl_id").get<std::uint32_t>();
      record.runtime_samples = r.at("runtime_samples").get<std::vector<double>>();
      record.reference_runtime = median(record.runtime_samples);

      const std::string stats_path = r.at("stats_path").get<std::string>();
      const auto dumps = parse_stats_text(read_file(stats_path));
      record.stats = extract_stat_vector(dumps.back(), mapping, dataset.topology);

      if (!dataset.find_group(record.group)) {
        KernelGroup group;
        group.kernel_type = record.group.kernel_type;
        group.group_id = record.group.group_id;
        dataset.groups.push_back(std::move(group));
      }
      dataset.records.push_back(std::move(record));
    }
    if (dataset.records.empty()) throw DataError("ingest produced no records");

    auto handle = std::make_unique<ss_dataset>();
    handle->value = std::move(dataset);
    *out = handle.release();
  });
}

int ss_default_spec(const char* config_json, char** out_json) {
  return guarded([&] {
    require_out(out_json, "out_json");
    const json config = parse_config(config_json);
    const SyntheticSpec spec =
        SyntheticSpec::example(config.value("seed", std::uint64_t{0}),
                               config.value("sigma", 0.02),
                               config.value("group_count", std::size_t{5}));
    *out_json = copy_string(spec.to_json());
  });
}

int ss_synthesize(const char* config_json, ss_dataset** out) {
  return guarded([&] {
    require_out(out, "out");
    const json config = parse_config(config_json);
    SyntheticSpec spec;
    if (config.contains("spec")) {
      spec = SyntheticSpec::from_json(config.at("spec").dump());
    } else {
      spec = SyntheticSpec::example(config.value("seed", std::uint64_t{0}),
                                    config.value("sigma", 0.02),
                                    config.value("group_count", std::size_t{5}));
    }
    const std::size_t impls = config.value("impls_per_group", std::size_t{500});
    if (impls == 0) throw UsageError("impls_per_group must be positive");
    auto handle = std::make_unique<ss_dataset>();
    handle->value = synthesize_dataset(spec, impls);
    *out = handle.release();
  });
}

// ---- models --------------------------------------------------------------

int ss_train(const ss_dataset* dataset, const char* config_json, ss_model** out) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    require_out(out, "out");
    const json config = parse_config(config_json);

    PredictorKind kind;
    try {
      kind = predictor_kind_from_string(config.value("predictor", "gbt"));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
    const std::uint64_t seed = config.value("seed", std::uint64_t{0});

    const TrainingSet training = build_training_set(dataset->value);
    auto handle = std::make_unique<ss_model>();
    switch (kind) {
      case PredictorKind::kMlr:
        handle->value = fit_mlr(training.features, training.targets, training.schema);
        break;
      case PredictorKind::kMlp: {
        MlpConfig mlp = mlp_config_from_json(config.value("mlp", json::object()));
        if (!config.contains("mlp") || !config.at("mlp").contains("seed")) mlp.seed = seed;
        handle->value = fit_mlp(training.features, training.targets, training.schema, mlp);
        break;
      }
      case PredictorKind::kGp: {
        const GpHyper hyper =
            gp_hyper_from_json(config.value("gp", json::object()), GpHyper{1.0, 4.0, 1e-4});
        handle->value = fit_gp(training.features, training.targets, training.schema, hyper);
        break;
      }
      case PredictorKind::kGbt: {
        GbtConfig gbt = gbt_config_from_json(config.value("gbt", json::object()));
        if (!config.contains("gbt") || !config.at("gbt").contains("seed")) gbt.seed = seed;
        handle->value = fit_gbt(training.features, training.targets, training.schema, gbt);
        break;
      }
    }
    *out = handle.release();
  });
}

int ss_model_save(const ss_model* model, const char* path) {
  return guarded([&] {
    if (model == nullptr) throw UsageError("model must not be null");
    if (path == nullptr) throw UsageError("path must not be null");
    save_model(model->value, path);
  });
}

int ss_model_load(const char* path, ss_model** out) {
  return guarded([&] {
    require_out(out, "out");
    if (path == nullptr) throw UsageError("path must not be null");
    auto handle = std::make_unique<ss_model>();
    try {
      handle->value = load_model(path);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("invalid model file: ") + e.what());
    }
    *out = handle.release();
  });
}

void ss_model_free(ss_model* model) { delete model; }

int ss_model_info(const ss_model* model, char** out_json) {
  return guarded([&] {
    if (model == nullptr) throw UsageError("model must not be null");
    require_out(out_json, "out_json");
    const json info = {{"kind", to_string(model->value.kind)},
                       {"schema_fingerprint", schema_fingerprint(model->value.schema)},
                       {"feature_count", model->value.schema.size()}};
    *out_json = copy_string(info.dump(2));
  });
}

// ---- ranking and evaluation ----------------------------------------------

int ss_rank(const ss_dataset* dataset, const ss_model* model, const char* config_json,
            char** out_json) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    if (model == nullptr) throw UsageError("model must not be null");
    require_out(out_json, "out_json");
    const json config = parse_config(config_json);
    const std::string window_mode = config.value("window", "exact");

    const Dataset& d = dataset->value;
    const FeatureSchema& schema = model->value.schema;
    if (schema_fingerprint(schema) !=
        schema_fingerprint(make_feature_schema(d.topology)))
      throw DataError("model schema does not match the dataset topology");

    const auto summaries = summarize_groups(d);
    std::map<GroupKey, std::vector<std::size_t>> rows_by_group;
    for (std::size_t i = 0; i < d.records.size(); ++i)
      rows_by_group[d.records[i].group].push_back(i);

    json reports = json::array();
    json rankings = json::array();
    std::vector<RankingReport> report_list;
    for (const auto& [key, rows] : rows_by_group) {
      WindowState window = WindowState::exact(summaries.at(key));
      if (window_mode != "exact") {
        const std::size_t window_size =
            config.value("window_size", std::min<std::size_t>(rows.size(), 32));
        if (window_mode == "static")
          window = WindowState::static_window(window_size, schema.raw_block_size());
        else if (window_mode == "dynamic")
          window = WindowState::dynamic_window(schema.raw_block_size());
        else
          throw UsageError("unknown window mode: " + window_mode);
        std::vector<std::vector<double>> raw_batch;
        std::vector<double> inst_counts;
        for (std::size_t row : rows) {
          raw_batch.push_back(raw_features(d.records[row].stats, d.topology));
          inst_counts.push_back(
              static_cast<double>(d.records[row].stats.total_instructions));
        }
        window.update(raw_batch, inst_counts);
      }

      Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size()),
                               static_cast<Eigen::Index>(schema.size()));
      std::vector<double> runtimes;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto fv = assemble_feature_vector(d.records[rows[i]].stats, window, schema);
        for (std::size_t c = 0; c < fv.values.size(); ++c)
          features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
              fv.values[c];
        runtimes.push_back(d.records[rows[i]].reference_runtime);
      }
      const Eigen::VectorXd scores = predict(model->value, features);
      const std::vector<double> score_vec(scores.data(), scores.data() + scores.size());

      const RankingReport report =
          rank_predictions(key, to_string(model->value.kind), score_vec, runtimes);
      report_list.push_back(report);
      reports.push_back(report_to_json(report));

      json order = json::array();
      for (std::size_t index : prediction_order_indices(score_vec))
        order.push_back(d.records[rows[index]].impl_id);
      rankings.push_back({{"kernel_type", key.kernel_type},
                          {"group_id", key.group_id},
                          {"order", order}});
    }

    const json result = {{"reports", reports},
                         {"rankings", rankings},
                         {"csv", report_csv(report_list)}};
    *out_json = copy_string(result.dump(2));
  });
}

int ss_evaluate(const ss_dataset* dataset, const char* plan_json, char** out_json) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    require_out(out_json, "out_json");
    const json config = parse_config(plan_json);

    ExperimentPlan plan;
    plan.test_count = config.value("test_count", plan.test_count);
    plan.repetitions = config.value("repetitions", plan.repetitions);
    plan.seed = config.value("seed", plan.seed);
    plan.roster.include_perfect = config.value("include_perfect", false);
    if (config.contains("predictors")) {
      plan.roster.use_mlr = plan.roster.use_mlp = false;
      plan.roster.use_gp = plan.roster.use_gbt = false;
      for (const json& name : config.at("predictors")) {
        PredictorKind kind;
        try {
          kind = predictor_kind_from_string(name.get<std::string>());
        } catch (const DataError& e) {
          throw UsageError(e.what());
        }
        switch (kind) {
          case PredictorKind::kMlr: plan.roster.use_mlr = true; break;
          case PredictorKind::kMlp: plan.roster.use_mlp = true; break;
          case PredictorKind::kGp: plan.roster.use_gp = true; break;
          case PredictorKind::kGbt: plan.roster.use_gbt = true; break;
        }
      }
    }

    std::vector<RankingReport> report_list;
    if (config.contains("logo")) {
      const json& logo = config.at("logo");
      PredictorKind kind;
      try {
        kind = predictor_kind_from_string(logo.value("predictor", "gbt"));
      } catch (const DataError& e) {
        throw UsageError(e.what());
      }
      const LogoResult result =
          leave_one_group_out(dataset->value, plan, group_key_from_json(logo), kind);
      report_list = {result.excluded, result.included};
    } else {
      report_list = run_experiment(dataset->value, plan);
    }

    json reports = json::array();
    for (const auto& report : report_list) reports.push_back(report_to_json(report));
    const json result = {{"reports", reports},
                         {"csv", report_csv(report_list)},
                         {"table", report_table(report_list)}};
    *out_json = copy_string(result.dump(2));
  });
}

// ---- hyperparameter tuning -----------------------------------------------

int ss_tune(const ss_dataset* dataset, const char* config_json, char** out_json) {
  return guarded([&] {
    if (dataset == nullptr) throw UsageError("dataset must not be null");
    require_out(out_json, "out_json");
    const json config = parse_config(config_json);

    const std::uint64_t seed = config.value("seed", std::uint64_t{0});
    const double test_fraction = config.value("test_fraction", 0.25);
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
      throw UsageError("test_fraction must be in (0, 1)");
    LossKind loss_kind;
    try {
      loss_kind = loss_kind_from_string(config.value("loss", "mse"));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }

    const TrainingSet training = build_training_set(dataset->value);
    const std::size_t n = static_cast<std::size_t>(training.features.rows());
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t test_n =
        std::max<std::size_t>(1, static_cast<std::size_t>(test_fraction * n));
    if (test_n >= n) throw DataError("dataset too small for the requested split");

    Eigen::MatrixXd test_x(static_cast<Eigen::Index>(test_n), training.features.cols());
    Eigen::VectorXd test_y(static_cast<Eigen::Index>(test_n));
    Eigen::MatrixXd train_x(static_cast<Eigen::Index>(n - test_n),
                            training.features.cols());
    Eigen::VectorXd train_y(static_cast<Eigen::Index>(n - test_n));
    for (std::size_t i = 0; i < test_n; ++i) {
      test_x.row(static_cast<Eigen::Index>(i)) =
          training.features.row(static_cast<Eigen::Index>(rows[i]));
      test_y(static_cast<Eigen::Index>(i)) =
          training.targets(static_cast<Eigen::Index>(rows[i]));
    }
    for (std::size_t i = test_n; i < n; ++i) {
      train_x.row(static_cast<Eigen::Index>(i - test_n)) =
          training.features.row(static_cast<Eigen::Index>(rows[i]));
      train_y(static_cast<Eigen::Index>(i - test_n)) =
          training.targets(static_cast<Eigen::Index>(rows[i]));
    }

    const SearchSpace space = default_gp_search_space();
    const Objective objective = [&](const std::vector<double>& point) {
      const GpHyper hyper{point[0], point[1], point[2]};
      return objective_gp(hyper, train_x, train_y, test_x, test_y, loss_kind);
    };

    OptResult result;
    const std::string method = config.value("method", "bayes");
    if (method == "bayes") {
      BoConfig bo;
      bo.budget = config.value("budget", bo.budget);
      bo.n_init = config.value("n_init", bo.n_init);
      bo.seed = seed;
      result = bayes_optimize(objective, space, bo);
    } else if (method == "grid") {
      const json& grid_json = config.value(
          "grid", json{{"constant", {0.1, 1.0, 10.0}},
                       {"length_scale", {1.0, 4.0, 16.0}},
                       {"noise", {1e-6, 1e-4, 1e-2}}});
      std::vector<std::vector<double>> grid;
      for (const char* name : {"constant", "length_scale", "noise"})
        grid.push_back(grid_json.at(name).get<std::vector<double>>());
      // grid_search minimizes, so hand it the positive loss.
      const Objective loss_objective = [&](const std::vector<double>& point) {
        return -objective(point);
      };
      result = grid_search(loss_objective, grid);
      result.best_objective = -result.best_objective;
      for (auto& evaluation : result.trace) evaluation.objective = -evaluation.objective;
    } else {
      throw UsageError("unknown tuning method: " + method);
    }

    json trace = json::array();
    std::ostringstream trace_csv;
    trace_csv << "constant,length_scale,noise,objective,failed\n";
    for (const auto& evaluation : result.trace) {
      trace.push_back({{"constant", evaluation.point[0]},
                       {"length_scale", evaluation.point[1]},
                       {"noise", evaluation.point[2]},
                       {"objective", evaluation.objective},
                       {"failed", evaluation.failed}});
      trace_csv << evaluation.point[0] << ',' << evaluation.point[1] << ','
                << evaluation.point[2] << ',' << evaluation.objective << ','
                << (evaluation.failed ? 1 : 0) << '\n';
    }
    const json out = {{"best",
                       {{"constant", result.best_point[0]},
                        {"length_scale", result.best_point[1]},
                        {"noise", result.best_point[2]}}},
                      {"best_objective", result.best_objective},
                      {"trace", trace},
                      {"trace_csv", trace_csv.str()}};
    *out_json = copy_string(out.dump(2));
  });
}

// ---- orchestration -------------------------------------------------------

int ss_plan_parallelism(double t_simulator, double t_cooldown, double t_ref,
                        uint64_t n_exe, uint64_t* out_count) {
  return guarded([&] {
    require_out(out_count, "out_count");
    *out_count = parallel_break_even(t_simulator, t_cooldown, t_ref, n_exe);
  });
}

int ss_run_loop(const char* config_json, char** out_json) {
  return guarded([&] {
    require_out(out_json, "out_json");
    const json config = parse_config(config_json);
    for (const char* key : {"model_path", "workdir"})
      if (!config.contains(key))
        throw UsageError(std::string("run config needs \"") + key + "\"");

    SyntheticSpec spec;
    if (config.contains("spec"))
      spec = SyntheticSpec::from_json(config.at("spec").dump());
    else if (config.contains("spec_path"))
      spec = SyntheticSpec::from_json(
          read_file(config.at("spec_path").get<std::string>()));
    else
      throw UsageError("run config needs \"spec\" or \"spec_path\"");
    spec.validate();

    const PredictorModel model =
        load_model(config.at("model_path").get<std::string>());
    if (schema_fingerprint(model.schema) !=
        schema_fingerprint(make_feature_schema(spec.topology)))
      throw DataError("model schema does not match the run topology");

    std::size_t group_index = 0;
    if (config.contains("group"))
      group_index = group_index_of(spec, group_key_from_json(config.at("group")));

    const StatsMapping mapping =
        config.contains("mapping_path")
            ? StatsMapping::from_file(config.at("mapping_path").get<std::string>())
            : default_gem5_mapping(spec.topology);
    mapping.require_roles_for(spec.topology);

    std::unique_ptr<SimulatorAdapter> adapter;
    const std::string adapter_kind = config.value("adapter", "mock");
    if (adapter_kind == "mock") {
      adapter = std::make_unique<MockSimulatorAdapter>(spec);
    } else if (adapter_kind == "command") {
      if (!config.contains("command"))
        throw UsageError("command adapter needs a \"command\" block");
      const json& c = config.at("command");
      auto command = std::make_unique<CommandAdapter>();
      command->build_command = c.value("build_command", "");
      command->run_command = c.at("run_command").get<std::string>();
      command->timeout_seconds = c.value("timeout_seconds", 600.0);
      if (command->run_command.find("{stats_out}") == std::string::npos)
        throw UsageError("run_command is missing placeholder {stats_out}");
      adapter = std::move(command);
    } else {
      throw UsageError("unknown adapter: " + adapter_kind);
    }

    const std::size_t rounds = config.value("rounds", std::size_t{4});
    const std::size_t batch_size = config.value("batch_size", std::size_t{8});
    const std::size_t n_parallel = config.value("n_parallel", std::size_t{4});
    const std::uint64_t seed = config.value("seed", std::uint64_t{0});
    const std::filesystem::path workdir = config.at("workdir").get<std::string>();
    if (batch_size == 0) throw UsageError("batch_size must be positive");

    std::unique_ptr<CandidateGenerator> generator;
    const std::string generator_kind = config.value("generator", "random");
    if (generator_kind == "random")
      generator = std::make_unique<RandomGenerator>(spec, group_index, batch_size,
                                                    workdir, seed);
    else if (generator_kind == "greedy")
      generator = std::make_unique<GreedyGenerator>(spec, group_index, batch_size,
                                                    workdir, seed);
    else
      throw UsageError("unknown generator: " + generator_kind);

    const std::string window_mode = config.value("window", "static");
    const std::size_t window_size = config.value("window_size", batch_size);
    WindowState window = WindowState::dynamic_window(model.schema.raw_block_size());
    if (window_mode == "static")
      window = WindowState::static_window(window_size, model.schema.raw_block_size());
    else if (window_mode != "dynamic")
      throw UsageError("unknown window mode: " + window_mode);

    const TuningLoopResult result =
        tuning_loop(*generator, *adapter, mapping, model, window, rounds, n_parallel);
    if (config.contains("archive_path"))
      save_archive(result, config.at("archive_path").get<std::string>());

    std::map<std::string, std::size_t> statuses;
    const ArchiveEntry* best = nullptr;
    std::size_t ok = 0;
    for (const auto& entry : result.archive) {
      ++statuses[to_string(entry.result.status)];
      if (entry.result.status == JobStatus::kOk) ++ok;
      if (entry.result.score &&
          (!best || entry.archive_score < best->archive_score))
        best = &entry;
    }
    json best_json = nullptr;
    if (best)
      best_json = {{"job_id", best->job.job_id},
                   {"score", *best->result.score},
                   {"impl_params", json::parse(best->job.impl_params_json)}};
    const json out = {{"jobs", result.archive.size()},
                      {"ok", ok},
                      {"failed", result.archive.size() - ok},
                      {"exhausted_early", result.exhausted_early},
                      {"best", best_json},
                      {"statuses", statuses}};
    *out_json = copy_string(out.dump(2));
  });
}

}  // extern "C"
