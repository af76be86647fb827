// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace simscore {

void ExperimentPlan::validate() const {
  if (test_count < 4) throw DataError("test count must be at least 4");
  if (repetitions < 1) throw DataError("repetitions must be at least 1");
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(rows[i]));
  return out;
}

struct RosterModels {
  std::vector<std::pair<std::string, PredictorModel>> models;
};

RosterModels fit_roster(const PredictorRoster& roster, const Eigen::MatrixXd& train_x,
                        const Eigen::VectorXd& train_y, const FeatureSchema& schema,
                        std::uint64_t seed) {
  RosterModels out;
  if (roster.use_mlr) out.models.emplace_back("mlr", fit_mlr(train_x, train_y, schema));
  if (roster.use_mlp) {
    MlpConfig config = roster.mlp;
    config.seed = mix_seed(seed, 11);
    out.models.emplace_back("mlp", fit_mlp(train_x, train_y, schema, config));
  }
  if (roster.use_gp) out.models.emplace_back("gp", fit_gp(train_x, train_y, schema, roster.gp));
  if (roster.use_gbt) {
    GbtConfig config = roster.gbt;
    config.seed = mix_seed(seed, 13);
    out.models.emplace_back("gbt", fit_gbt(train_x, train_y, schema, config));
  }
  return out;
}

}  // namespace

std::vector<RankingReport> run_experiment(const Dataset& dataset, const ExperimentPlan& plan) {
  plan.validate();
  const TrainingSet full = build_training_set(dataset);

  std::map<GroupKey, std::vector<std::size_t>> rows_by_group;
  for (std::size_t r = 0; r < full.row_groups.size(); ++r)
    rows_by_group[full.row_groups[r]].push_back(r);
  for (const auto& [key, rows] : rows_by_group)
    if (rows.size() <= plan.test_count)
      throw DataError("group " + key.kernel_type + "/" + std::to_string(key.group_id) +
                      " too small for the test split");

  std::vector<std::string> predictor_names;
  // predictions[name][row] collects one value per repetition in which the
  // row landed in the test set.
  std::map<std::string, std::vector<std::vector<double>>> predictions;

  for (std::size_t rep = 0; rep < plan.repetitions; ++rep) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (auto& [key, rows] : rows_by_group) {
      std::vector<std::size_t> shuffled = rows;
      std::mt19937_64 rng(mix_seed(plan.seed, rep * 1000 + key.group_id));
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      test_rows.insert(test_rows.end(), shuffled.begin(), shuffled.begin() + plan.test_count);
      train_rows.insert(train_rows.end(), shuffled.begin() + plan.test_count, shuffled.end());
    }

    const Eigen::MatrixXd train_x = take_rows(full.features, train_rows);
    const Eigen::VectorXd train_y = take_rows(full.targets, train_rows);
    const Eigen::MatrixXd test_x = take_rows(full.features, test_rows);

    RosterModels fitted =
        fit_roster(plan.roster, train_x, train_y, full.schema, mix_seed(plan.seed, rep));
    for (auto& [name, model] : fitted.models) {
      if (predictions.find(name) == predictions.end()) {
        predictor_names.push_back(name);
        predictions[name].resize(full.row_groups.size());
      }
      const Eigen::VectorXd scores = predict(model, test_x);
      for (std::size_t i = 0; i < test_rows.size(); ++i)
        predictions[name][test_rows[i]].push_back(scores(static_cast<Eigen::Index>(i)));
    }
    if (plan.roster.include_perfect) {
      const std::string name = "perfect";
      if (predictions.find(name) == predictions.end()) {
        predictor_names.push_back(name);
        predictions[name].resize(full.row_groups.size());
      }
      for (std::size_t row : test_rows)
        predictions[name][row].push_back(full.targets(static_cast<Eigen::Index>(row)));
    }
  }

  std::vector<RankingReport> reports;
  for (const auto& [key, rows] : rows_by_group) {
    for (const auto& name : predictor_names) {
      std::vector<double> scores;
      std::vector<double> runtimes;
      for (std::size_t row : rows) {
        const auto& samples = predictions.at(name)[row];
        if (samples.empty()) continue;  // never held out
        scores.push_back(median(samples));
        runtimes.push_back(dataset.records[full.record_indices[row]].reference_runtime);
      }
      reports.push_back(rank_predictions(key, name, scores, runtimes));
    }
  }
  return reports;
}

namespace {

PredictorModel fit_kind(PredictorKind kind, const PredictorRoster& roster,
                        const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const FeatureSchema& schema, std::uint64_t seed) {
  switch (kind) {
    case PredictorKind::kMlr: return fit_mlr(x, y, schema);
    case PredictorKind::kMlp: {
      MlpConfig config = roster.mlp;
      config.seed = seed;
      return fit_mlp(x, y, schema, config);
    }
    case PredictorKind::kGp: return fit_gp(x, y, schema, roster.gp);
    case PredictorKind::kGbt: {
      GbtConfig config = roster.gbt;
      config.seed = seed;
      return fit_gbt(x, y, schema, config);
    }
  }
  throw DataError("unknown predictor kind");
}

}  // namespace

LogoResult leave_one_group_out(const Dataset& dataset, const ExperimentPlan& plan,
                               const GroupKey& held_out, PredictorKind kind) {
  plan.validate();
  if (!dataset.find_group(held_out)) throw DataError("unknown group");
  if (dataset.groups.size() < 2) throw DataError("need at least two groups");

  const TrainingSet full = build_training_set(dataset);
  std::vector<std::size_t> held_rows;
  std::vector<std::size_t> other_rows;
  for (std::size_t r = 0; r < full.row_groups.size(); ++r)
    (full.row_groups[r] == held_out ? held_rows : other_rows).push_back(r);
  if (held_rows.size() <= plan.test_count)
    throw DataError("held-out group too small for the test split");

  std::mt19937_64 rng(mix_seed(plan.seed, 77));
  std::shuffle(held_rows.begin(), held_rows.end(), rng);
  const std::vector<std::size_t> test_rows(held_rows.begin(),
                                           held_rows.begin() + plan.test_count);
  const std::vector<std::size_t> held_train_rows(held_rows.begin() + plan.test_count,
                                                 held_rows.end());

  std::vector<std::size_t> included_rows = other_rows;
  included_rows.insert(included_rows.end(), held_train_rows.begin(), held_train_rows.end());

  const PredictorModel excluded_model =
      fit_kind(kind, plan.roster, take_rows(full.features, other_rows),
               take_rows(full.targets, other_rows), full.schema, mix_seed(plan.seed, 1));
  const PredictorModel included_model =
      fit_kind(kind, plan.roster, take_rows(full.features, included_rows),
               take_rows(full.targets, included_rows), full.schema, mix_seed(plan.seed, 1));

  // Inference-style normalization: group means approximated by a static
  // window over the arriving samples, no oracle summaries.
  WindowState window =
      WindowState::static_window(plan.test_count, full.schema.raw_block_size());
  std::vector<std::vector<double>> raw_batch;
  std::vector<double> inst_counts;
  std::vector<double> runtimes;
  for (std::size_t row : test_rows) {
    const auto& record = dataset.records[full.record_indices[row]];
    raw_batch.push_back(raw_features(record.stats, dataset.topology));
    inst_counts.push_back(static_cast<double>(record.stats.total_instructions));
    runtimes.push_back(record.reference_runtime);
  }
  window.update(raw_batch, inst_counts);

  Eigen::MatrixXd test_x(static_cast<Eigen::Index>(test_rows.size()),
                         static_cast<Eigen::Index>(full.schema.size()));
  for (std::size_t i = 0; i < test_rows.size(); ++i) {
    const auto& record = dataset.records[full.record_indices[test_rows[i]]];
    const auto fv = assemble_feature_vector(record.stats, window, full.schema);
    for (std::size_t c = 0; c < fv.values.size(); ++c)
      test_x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = fv.values[c];
  }

  auto report_for = [&](const PredictorModel& model, const std::string& label) {
    const Eigen::VectorXd scores = predict(model, test_x);
    std::vector<double> score_vec(scores.data(), scores.data() + scores.size());
    return rank_predictions(held_out, label, score_vec, runtimes);
  };

  LogoResult result;
  result.excluded = report_for(excluded_model, to_string(kind) + "-excluded");
  result.included = report_for(included_model, to_string(kind) + "-included");
  return result;
}

std::string sorted_curve_data(const std::vector<double>& scores,
                              const std::vector<double>& runtimes) {
  const std::vector<double> t_pred = prediction_order(scores, runtimes);
  std::vector<double> t_ref = runtimes;
  std::sort(t_ref.begin(), t_ref.end());

  std::ostringstream out;
  out << "# index t_ref t_pred\n";
  out.precision(17);
  for (std::size_t i = 0; i < t_pred.size(); ++i)
    out << i << ' ' << t_ref[i] << ' ' << t_pred[i] << '\n';
  return out.str();
}

}  // namespace simscore
