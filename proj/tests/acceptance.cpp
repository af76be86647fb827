// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one check per release criterion, one PASS/FAIL line
// each. Exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "simscore/evaluation.hpp"
#include "simscore/hyperopt.hpp"
#include "simscore/metrics.hpp"
#include "simscore/orchestrator.hpp"
#include "simscore/predictors.hpp"
#include "simscore/stats_parser.hpp"
#include "simscore/synthetic.hpp"

using namespace simscore;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title,
               const std::function<void(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail << " exception: " << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!ok) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%.1fs)%s\n", ok ? "PASS" : "FAIL", number,
              title.c_str(), seconds, detail.str().c_str());
  std::fflush(stdout);
}

void require(bool condition, std::ostringstream& detail, const std::string& what) {
  if (!condition) {
    detail << " FAILED: " << what << ";";
    throw DataError("requirement not met: " + what);
  }
}

FeatureSchema dummy_schema(std::size_t n_features) {
  FeatureSchema schema;
  schema.topology.architecture = "x86";
  schema.topology.line_size_bytes = 64;
  schema.topology.levels.push_back({"L1D", 64ull * 8 * 64, 64, 8});
  for (std::size_t i = 0; i < n_features; ++i)
    schema.names.push_back("f" + std::to_string(i));
  return schema;
}

// ---- criterion bodies ----------------------------------------------------

void metric_fixtures(std::ostringstream& detail) {
  require(prediction_order({0.3, 0.1, 0.2}, {10, 5, 7}) ==
              std::vector<double>{5, 7, 10},
          detail, "prediction_order example");
  require(e_top1({1.0, 3.0}, {1.0, 3.0}) == 0.0, detail, "e_top1 perfect");
  require(std::abs(e_top1({2.0, 1.0}, {1.0, 2.0}) - 50.0) <= 1e-12, detail,
          "e_top1 = 50");
  require(std::abs(r_top1({0.1, 0.2, 0.3}, {2.0, 1.0, 4.0}) - 200.0 / 3.0) <= 1e-12,
          detail, "r_top1 = 66.67");
  require(quality_score({1, 2, 3, 4}) == 0.0, detail, "Q ascending");
  require(std::abs(quality_score({2, 1, 4}) - (100.0 / 3.0) * 0.5) <= 1e-12, detail,
          "Q = 16.67");
  const auto [q_low, q_high] = q_split({1, 3, 2, 4});
  require(q_low == 0.0 && q_high == 0.0, detail, "q_split boundary drop uncounted");
  require(parallel_break_even(90, 1, 1, 15) == 3, detail, "K example");

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uniform(0.5, 5.0);
  for (std::size_t n : {4u, 100u, 500u}) {
    std::vector<double> runtimes(n);
    for (auto& r : runtimes) r = uniform(rng);
    const RankingReport report =
        rank_predictions({"k", 0}, "perfect", runtimes, runtimes);
    require(report.e_top1 == 0.0 && report.q_low == 0.0 && report.q_high == 0.0,
            detail, "perfect identity E/Q at n=" + std::to_string(n));
    require(std::abs(report.r_top1 - 100.0 / n) <= 1e-12, detail,
            "perfect identity R at n=" + std::to_string(n));
  }
}

void oracle_equivalence(std::ostringstream& detail) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> n_dist(5, 50), d_dist(1, 10);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_dist(rng);
    const int d = std::min(d_dist(rng), n - 1);
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = gauss(rng);
      y(i) = gauss(rng);
    }
    const PredictorModel fitted = fit_mlr(x, y, dummy_schema(d));
    const auto& mlr = std::get<MlrModel>(fitted.params);
    Eigen::MatrixXd design(n, d + 1);
    design.col(0).setOnes();
    design.rightCols(d) = x;
    const Eigen::VectorXd beta =
        design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    worst = std::max(worst, std::abs(mlr.intercept - beta(0)));
    for (int j = 0; j < d; ++j)
      worst = std::max(worst, std::abs(mlr.coefficients(j) - beta(j + 1)));
  }
  detail << " mlr max |delta| = " << worst << ";";
  require(worst < 1e-8, detail, "mlr vs pseudo-inverse oracle");

  // GP posterior mean vs hand-inverted 2x2 kernel algebra.
  const double C = 2.0, ell = 1.5, noise = 0.1, q = 0.3;
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, 2.0;
  const PredictorModel model = fit_gp(x, y, dummy_schema(1), {C, ell, noise});
  auto rbf = [&](double a, double b) {
    return C * std::exp(-(a - b) * (a - b) / (2 * ell * ell));
  };
  const double k00 = C + noise, k01 = rbf(0.0, 1.0);
  const double det = k00 * k00 - k01 * k01;
  const double a0 = (k00 * y(0) - k01 * y(1)) / det;
  const double a1 = (-k01 * y(0) + k00 * y(1)) / det;
  const double expected = rbf(q, 0.0) * a0 + rbf(q, 1.0) * a1;
  Eigen::MatrixXd query(1, 1);
  query << q;
  const double got = predict(model, query)(0);
  detail << " gp |delta| = " << std::abs(got - expected) << ";";
  require(std::abs(got - expected) < 1e-8, detail, "gp vs 2x2 hand algebra");
}

void gradient_check(std::ostringstream& detail) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  MlpModel model;
  const auto widths = mlp_layer_widths(2);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Eigen::MatrixXd w(widths[l + 1], widths[l]);
    Eigen::VectorXd b(widths[l + 1]);
    for (int i = 0; i < w.size(); ++i) w.data()[i] = 0.3 * gauss(rng);
    for (int i = 0; i < b.size(); ++i) b(i) = 0.1 * gauss(rng);
    model.weights.push_back(w);
    model.biases.push_back(b);
  }
  Eigen::MatrixXd x(4, 2);
  Eigen::VectorXd y(4);
  for (int i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
  for (int i = 0; i < 4; ++i) y(i) = gauss(rng);

  MlpGradients gradients;
  mlp_loss_and_gradients(model, x, y, &gradients);
  const double h = 1e-5;
  double max_rel = 0.0;
  auto check_param = [&](double* param, double analytic) {
    const double saved = *param;
    *param = saved + h;
    const double up = mlp_loss_and_gradients(model, x, y, nullptr);
    *param = saved - h;
    const double down = mlp_loss_and_gradients(model, x, y, nullptr);
    *param = saved;
    const double numeric = (up - down) / (2 * h);
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    max_rel = std::max(max_rel, std::abs(numeric - analytic) / denom);
  };
  // Every bias plus a dense stride of weights in every layer keeps the
  // runtime budget while still exercising each layer's backprop path.
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (int i = 0; i < model.biases[l].size(); ++i)
      check_param(&model.biases[l](i), gradients.biases[l](i));
    const int stride = std::max<int>(1, static_cast<int>(model.weights[l].size()) / 256);
    for (int i = 0; i < model.weights[l].size(); i += stride)
      check_param(&model.weights[l].data()[i], gradients.weights[l].data()[i]);
  }
  detail << " max relative error = " << max_rel << ";";
  require(max_rel < 1e-4, detail, "finite-difference gradient agreement");
}

void gbt_properties(std::ostringstream& detail) {
  // Hand-computed stump leaves.
  Eigen::MatrixXd x(4, 1);
  x << 0, 0, 1, 1;
  Eigen::VectorXd y(4);
  y << 2, 2, 4, 4;
  GbtConfig stump;
  stump.n_trees = 1;
  stump.max_depth = 1;
  stump.learning_rate = 1.0;
  stump.subsample = 1.0;
  stump.colsample = 1.0;
  stump.reg_lambda = 0.1;
  stump.base_score = 0.0;
  const PredictorModel stump_model = fit_gbt(x, y, dummy_schema(1), stump);
  const auto& tree = std::get<GbtModel>(stump_model.params).trees.at(0);
  Eigen::RowVectorXd left(1), right(1);
  left << 0;
  right << 1;
  require(tree.eval(left) == 4.0 / 2.1, detail, "left leaf 4/2.1 exact");
  require(tree.eval(right) == 8.0 / 2.1, detail, "right leaf 8/2.1 exact");

  // Monotone training RSS across 300 rounds without subsampling.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd bx(120, 5);
  Eigen::VectorXd by(120);
  for (int i = 0; i < 120; ++i) {
    for (int j = 0; j < 5; ++j) bx(i, j) = gauss(rng);
    by(i) = bx(i, 0) + bx(i, 1) * bx(i, 1) + 0.1 * gauss(rng);
  }
  GbtConfig full;
  full.subsample = 1.0;
  full.colsample = 1.0;
  const PredictorModel full_model = fit_gbt(bx, by, dummy_schema(5), full);
  const auto& boosted = std::get<GbtModel>(full_model.params);
  require(boosted.trees.size() == 300, detail, "300 trees");
  Eigen::VectorXd running = Eigen::VectorXd::Constant(120, boosted.base_score);
  double previous_rss = loss(LossKind::kRss, running, by);
  for (const auto& t : boosted.trees) {
    for (int i = 0; i < 120; ++i)
      running(i) += boosted.learning_rate * t.eval(bx.row(i));
    const double rss = loss(LossKind::kRss, running, by);
    require(rss <= previous_rss + 1e-9, detail, "RSS non-increasing per round");
    previous_rss = rss;
  }

  GbtConfig frozen;
  frozen.learning_rate = 0.0;
  const Eigen::VectorXd constant =
      predict(fit_gbt(bx, by, dummy_schema(5), frozen), bx);
  for (int i = 0; i < constant.size(); ++i)
    require(std::abs(constant(i) - by.mean()) <= 1e-12, detail,
            "lr=0 predicts base score");
}

void bayes_optimization(std::ostringstream& detail) {
  const auto objective = [](const std::vector<double>& p) {
    return -(p[0] - 2.0) * (p[0] - 2.0);
  };
  // Grid oracle: dense evaluation over [0,5].
  double oracle_best = 0.0, oracle_value = -1e300;
  for (int i = 0; i <= 5000; ++i) {
    const double v = objective({i * 5.0 / 5000});
    if (v > oracle_value) {
      oracle_value = v;
      oracle_best = i * 5.0 / 5000;
    }
  }
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 5.0, ParamScale::kLinear});
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BoConfig config;
    config.budget = 30;
    config.seed = seed;
    const auto result = bayes_optimize(objective, space, config);
    if (std::abs(result.best_point[0] - oracle_best) <= 0.2) ++hits;
  }
  detail << " " << hits << "/20 seeds within 0.2;";
  require(hits >= 18, detail, "best x within 0.2 of the grid oracle in >= 18 seeds");
}

ExperimentPlan benchmark_plan(std::uint64_t seed) {
  ExperimentPlan plan;
  plan.test_count = 100;
  plan.repetitions = 10;
  plan.seed = seed;
  plan.roster.mlp.epochs = 80;
  plan.roster.gbt.n_trees = 300;
  return plan;
}

void synthetic_end_to_end(std::ostringstream& detail) {
  const SyntheticSpec spec = SyntheticSpec::example(2024, 0.02, 5);
  const Dataset dataset = synthesize_dataset(spec, 500);
  const auto reports = run_experiment(dataset, benchmark_plan(7));

  std::map<std::string, std::vector<double>> e_by_predictor;
  for (const auto& report : reports) {
    e_by_predictor[report.predictor].push_back(report.e_top1);
    if (report.predictor != "mlr") {
      require(report.r_top1 <= 3.0, detail,
              report.predictor + " R_top1 <= 3% on group " +
                  std::to_string(report.group.group_id) + " (got " +
                  std::to_string(report.r_top1) + ")");
      require(report.e_top1 <= 10.0, detail,
              report.predictor + " E_top1 <= 10% on group " +
                  std::to_string(report.group.group_id) + " (got " +
                  std::to_string(report.e_top1) + ")");
    }
  }
  const double mlr_median = median(e_by_predictor.at("mlr"));
  double best_nonlinear = 1e300;
  for (const char* name : {"mlp", "gp", "gbt"})
    best_nonlinear = std::min(best_nonlinear, median(e_by_predictor.at(name)));
  detail << " median E_top1: mlr " << mlr_median << " vs best nonlinear "
         << best_nonlinear << ";";
  require(mlr_median > best_nonlinear, detail,
          "linear predictor strictly worse on median E_top1");
}

void leave_one_group_out_stability(std::ostringstream& detail) {
  const SyntheticSpec spec = SyntheticSpec::example(2024, 0.02, 5);
  const Dataset dataset = synthesize_dataset(spec, 500);
  double worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentPlan plan = benchmark_plan(seed);
    const LogoResult result = leave_one_group_out(
        dataset, plan, dataset.groups[3].key(), PredictorKind::kGbt);
    const double gap = std::abs(result.excluded.r_top1 - result.included.r_top1);
    worst_gap = std::max(worst_gap, gap);
    require(gap <= 2.0, detail,
            "held-out R_top1 within 2pp at seed " + std::to_string(seed) + " (gap " +
                std::to_string(gap) + ")");
  }
  detail << " worst paired gap = " << worst_gap << "pp;";
}

void window_equivalence(std::ostringstream& detail) {
  const SyntheticSpec spec = SyntheticSpec::example(77, 0.02, 2);
  const Dataset dataset = synthesize_dataset(spec, 60);
  const FeatureSchema schema = make_feature_schema(dataset.topology);
  const auto summaries = summarize_groups(dataset);

  const TrainingSet training = build_training_set(dataset);
  const PredictorModel model = fit_mlr(training.features, training.targets, schema);

  for (const auto& [key, summary] : summaries) {
    std::vector<const ImplementationRecord*> members;
    for (const auto& record : dataset.records)
      if (record.group == key) members.push_back(&record);

    WindowState window =
        WindowState::static_window(members.size(), schema.raw_block_size());
    std::vector<std::vector<double>> raw_batch;
    std::vector<double> inst_counts;
    for (const auto* record : members) {
      raw_batch.push_back(raw_features(record->stats, dataset.topology));
      inst_counts.push_back(static_cast<double>(record->stats.total_instructions));
    }
    window.update(raw_batch, inst_counts);

    std::vector<double> exact_scores, window_scores, runtimes;
    for (const auto* record : members) {
      const auto exact_fv = assemble_feature_vector(record->stats, summary, schema);
      const auto window_fv = assemble_feature_vector(record->stats, window, schema);
      require(exact_fv.values == window_fv.values, detail,
              "bitwise-identical feature vectors");
      Eigen::MatrixXd row(1, static_cast<Eigen::Index>(schema.size()));
      for (std::size_t c = 0; c < schema.size(); ++c)
        row(0, static_cast<Eigen::Index>(c)) = exact_fv.values[c];
      exact_scores.push_back(predict(model, row)(0));
      window_scores.push_back(exact_scores.back());
      runtimes.push_back(record->reference_runtime);
    }
    const RankingReport exact_report =
        rank_predictions(key, "exact", exact_scores, runtimes);
    const RankingReport window_report =
        rank_predictions(key, "window", window_scores, runtimes);
    require(exact_report.e_top1 == window_report.e_top1 &&
                exact_report.r_top1 == window_report.r_top1 &&
                exact_report.q_low == window_report.q_low &&
                exact_report.q_high == window_report.q_high,
            detail, "identical metrics");
  }
}

void parser_round_trip(std::ostringstream& detail) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> count_dist(3, 40);
  std::uniform_real_distribution<double> value_dist(0.0, 1e9);
  for (int file = 0; file < 20; ++file) {
    RawStatsDump dump;
    const int entries = count_dist(rng);
    for (int i = 0; i < entries; ++i) {
      StatEntry entry;
      entry.name = "sys.block" + std::to_string(file) + ".stat" + std::to_string(i);
      entry.value = value_dist(rng);
      if (i % 2 == 0) entry.description = "generated stat " + std::to_string(i);
      dump.entries.push_back(entry);
    }
    const std::string text = serialize_stats_dump(dump);
    const auto parsed = parse_stats_text(text);
    require(parsed.size() == 1, detail, "one section");
    const std::string text2 = serialize_stats_dump(parsed[0]);
    require(text == text2, detail, "serialize-parse-serialize fixpoint");
    const auto reparsed = parse_stats_text(text2);
    require(reparsed[0].entries.size() == dump.entries.size(), detail, "entry count");
    for (std::size_t i = 0; i < dump.entries.size(); ++i) {
      require(reparsed[0].entries[i].name == dump.entries[i].name, detail, "names");
      require(reparsed[0].entries[i].value == dump.entries[i].value, detail,
              "values exact");
    }
  }

  // Mock simulator output re-parses to the generating StatVector exactly.
  const SyntheticSpec spec = SyntheticSpec::example(5, 0.02, 2);
  ImplParams params;
  params.values = {{"tile", 16}, {"unroll", 2}, {"vectorize", 4}, {"loop_order", 3}};
  const StatVector expected = synth_stats(spec, 0, params);
  const auto dumps = parse_stats_text(mock_stats_text(spec, 0, params));
  const StatVector parsed = extract_stat_vector(
      dumps.back(), default_gem5_mapping(spec.topology), spec.topology);
  require(parsed.total_instructions == expected.total_instructions &&
              parsed.loads == expected.loads && parsed.stores == expected.stores &&
              parsed.branches == expected.branches,
          detail, "scalar counters exact");
  for (const auto& [name, counters] : expected.per_cache) {
    const auto& p = parsed.per_cache.at(name);
    require(p.read_accesses == counters.read_accesses &&
                p.read_hits == counters.read_hits &&
                p.read_misses == counters.read_misses &&
                p.read_replacements == counters.read_replacements &&
                p.write_accesses == counters.write_accesses &&
                p.write_hits == counters.write_hits &&
                p.write_misses == counters.write_misses &&
                p.write_replacements == counters.write_replacements,
            detail, "cache counters exact for " + name);
  }
}

void orchestrator_contract(std::ostringstream& detail) {
  const SyntheticSpec spec = SyntheticSpec::example(1, 0.02, 2);
  const Dataset dataset = synthesize_dataset(spec, 30);
  const TrainingSet training = build_training_set(dataset);
  const PredictorModel model =
      fit_mlr(training.features, training.targets, training.schema);
  const StatsMapping mapping = default_gem5_mapping(spec.topology);
  const auto root = std::filesystem::temp_directory_path() / "simscore_acceptance";
  std::filesystem::create_directories(root);

  std::mt19937_64 rng(2);
  std::vector<TuningJob> jobs;
  for (std::size_t i = 0; i < 12; ++i) {
    TuningJob job;
    job.job_id = i;
    job.group = spec.groups[0].group.key();
    job.impl_params_json = random_params(spec, rng).to_json();
    job.workdir = root / ("job_" + std::to_string(i));
    jobs.push_back(std::move(job));
  }

  std::vector<std::optional<double>> reference_scores;
  for (std::size_t n_parallel : {1u, 2u, 8u}) {
    MockSimulatorAdapter adapter(spec);
    adapter.delay_seconds = 0.005;
    WindowState window =
        WindowState::static_window(6, model.schema.raw_block_size());
    const auto results = run_batch(jobs, adapter, mapping, model, window, n_parallel);
    require(adapter.peak_concurrency() <= static_cast<int>(n_parallel), detail,
            "peak concurrency <= " + std::to_string(n_parallel));
    std::vector<std::optional<double>> scores;
    for (const auto& result : results) {
      require(result.status == JobStatus::kOk, detail, "all jobs ok");
      scores.push_back(result.score);
    }
    if (reference_scores.empty())
      reference_scores = scores;
    else
      require(scores == reference_scores, detail,
              "identical results across n_parallel settings");
  }

  // Single-job failure isolates.
  MockSimulatorAdapter adapter(spec);
  adapter.fail_job_ids = {5};
  WindowState window = WindowState::dynamic_window(model.schema.raw_block_size());
  const auto results = run_batch(jobs, adapter, mapping, model, window, 4);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i == 5)
      require(results[i].status == JobStatus::kRunFailed, detail, "job 5 failed");
    else
      require(results[i].status == JobStatus::kOk, detail, "other jobs unaffected");
  }
  std::filesystem::remove_all(root);
}

void break_even_calibration(std::ostringstream& detail) {
  require(parallel_break_even(90, 1, 1, 15) == 3, detail, "K = 3 for (90,1,1,15)");
  for (double t_sim : {0.1, 1.0, 10.0, 29.9, 30.0})
    require(parallel_break_even(t_sim, 1, 1, 15) == 1, detail,
            "K = 1 for t_sim <= 30");
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> positive(1e-6, 1e6);
  std::uniform_int_distribution<std::uint64_t> exe(1, 1000);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t k =
        parallel_break_even(positive(rng), positive(rng), positive(rng), exe(rng));
    require(k >= 1, detail, "K integer >= 1 on random positive inputs");
  }
}

}  // namespace

int main() {
  criterion(1, "metric fixtures and perfect-predictor identity", metric_fixtures);
  criterion(2, "least-squares and GP oracle equivalence", oracle_equivalence);
  criterion(3, "MLP gradient vs central finite differences", gradient_check);
  criterion(4, "GBT leaf weights, monotone RSS, lr=0 constancy", gbt_properties);
  criterion(5, "Bayesian optimization finds the quadratic optimum", bayes_optimization);
  criterion(6, "synthetic end-to-end: tuned nonlinear predictors rank within 3%",
            synthetic_end_to_end);
  criterion(7, "leave-one-group-out R_top1 stability within 2pp",
            leave_one_group_out_stability);
  criterion(8, "static full-size window equals exact normalization bitwise",
            window_equivalence);
  criterion(9, "stats parser round-trip and mock-simulator fidelity",
            parser_round_trip);
  criterion(10, "orchestrator concurrency bound, determinism, failure isolation",
            orchestrator_contract);
  criterion(11, "parallel break-even calibration", break_even_calibration);

  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
