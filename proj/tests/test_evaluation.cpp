// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "simscore/evaluation.hpp"

using namespace simscore;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.test_count = 10;
  plan.repetitions = 2;
  plan.seed = 1;
  plan.roster.use_mlr = true;
  plan.roster.use_mlp = false;  // keep unit tests fast
  plan.roster.use_gp = false;
  plan.roster.use_gbt = true;
  plan.roster.gbt.n_trees = 40;
  return plan;
}

}  // namespace

TEST_CASE("plan validation") {
  ExperimentPlan plan;
  plan.test_count = 3;
  CHECK_THROWS_AS(plan.validate(), DataError);
  plan.test_count = 10;
  plan.repetitions = 0;
  CHECK_THROWS_AS(plan.validate(), DataError);
}

TEST_CASE("run_experiment reports per group per predictor") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(4, 0.02, 2), 40);
  const auto reports = run_experiment(dataset, small_plan());
  CHECK(reports.size() == 2 * 2);  // 2 groups x {mlr, gbt}
  for (const auto& report : reports) {
    CHECK(report.sample_count >= 10);
    CHECK(report.sample_count <= 40);
    CHECK(report.e_top1 >= 0.0);
  }
}

TEST_CASE("run_experiment rejects groups smaller than the split") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(4, 0.02, 1), 8);
  CHECK_THROWS_AS(run_experiment(dataset, small_plan()), DataError);
}

TEST_CASE("the injected perfect predictor achieves the identity metrics") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(6, 0.02, 2), 30);
  ExperimentPlan plan = small_plan();
  plan.roster.use_mlr = false;
  plan.roster.use_gbt = false;
  plan.roster.include_perfect = true;
  const auto reports = run_experiment(dataset, plan);
  REQUIRE(reports.size() == 2);
  for (const auto& report : reports) {
    CHECK(report.predictor == "perfect");
    CHECK(report.e_top1 == 0.0);
    CHECK(report.q_low == 0.0);
    CHECK(report.q_high == 0.0);
    CHECK(report.r_top1 ==
          doctest::Approx(100.0 / report.sample_count).epsilon(1e-12));
  }
}

TEST_CASE("experiment results are reproducible under the plan seed") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(4, 0.02, 2), 30);
  const auto a = run_experiment(dataset, small_plan());
  const auto b = run_experiment(dataset, small_plan());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].e_top1 == b[i].e_top1);
    CHECK(a[i].r_top1 == b[i].r_top1);
    CHECK(a[i].q_low == b[i].q_low);
    CHECK(a[i].q_high == b[i].q_high);
  }
}

TEST_CASE("leave-one-group-out evaluates both models on the same samples") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(4, 0.02, 3), 40);
  ExperimentPlan plan = small_plan();
  const GroupKey held_out = dataset.groups[1].key();
  const LogoResult result =
      leave_one_group_out(dataset, plan, held_out, PredictorKind::kGbt);
  CHECK(result.excluded.group == held_out);
  CHECK(result.included.group == held_out);
  CHECK(result.excluded.sample_count == plan.test_count);
  CHECK(result.included.sample_count == plan.test_count);
  CHECK(result.excluded.predictor == "gbt-excluded");
  CHECK(result.included.predictor == "gbt-included");
}

TEST_CASE("leave-one-group-out rejects unknown groups and single-group data") {
  const Dataset dataset = synthesize_dataset(SyntheticSpec::example(4, 0.02, 2), 30);
  CHECK_THROWS_AS(
      leave_one_group_out(dataset, small_plan(), {"missing", 7}, PredictorKind::kMlr),
      DataError);
  const Dataset single = synthesize_dataset(SyntheticSpec::example(4, 0.02, 1), 30);
  CHECK_THROWS_AS(leave_one_group_out(single, small_plan(), single.groups[0].key(),
                                      PredictorKind::kMlr),
                  DataError);
}

TEST_CASE("sorted curve data emits one row per sample") {
  const std::string data = sorted_curve_data({0.3, 0.1, 0.2}, {10, 5, 7});
  std::istringstream in(data);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# index t_ref t_pred");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "0 5 5");  // best predicted is truly fastest here
}
