// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "simscore/hyperopt.hpp"

using namespace simscore;

TEST_CASE("grid search on a 1x1 grid returns that cell") {
  const auto result = grid_search([](const std::vector<double>& p) { return p[0]; },
                                  {{4.0}});
  CHECK(result.best_point == std::vector<double>{4.0});
  CHECK(result.best_objective == 4.0);
  CHECK(result.trace.size() == 1);
}

TEST_CASE("grid search finds the argmin cell of a 2x2 grid") {
  // f(a,b) = (a-2)^2 + (b-3)^2 over {1,2} x {1,3}: argmin (2,3).
  const auto result = grid_search(
      [](const std::vector<double>& p) {
        return (p[0] - 2) * (p[0] - 2) + (p[1] - 3) * (p[1] - 3);
      },
      {{1.0, 2.0}, {1.0, 3.0}});
  CHECK(result.best_point == std::vector<double>{2.0, 3.0});
  CHECK(result.best_objective == 0.0);
  CHECK(result.trace.size() == 4);
}

TEST_CASE("grid search trace covers the product in row-major order") {
  std::vector<std::vector<double>> seen;
  grid_search(
      [&](const std::vector<double>& p) {
        seen.push_back(p);
        return 0.0;
      },
      {{1.0, 2.0}, {10.0, 20.0, 30.0}});
  REQUIRE(seen.size() == 6);
  CHECK(seen[0] == std::vector<double>{1.0, 10.0});
  CHECK(seen[1] == std::vector<double>{1.0, 20.0});
  CHECK(seen[2] == std::vector<double>{1.0, 30.0});
  CHECK(seen[3] == std::vector<double>{2.0, 10.0});
}

TEST_CASE("grid search ties go to the first cell in row-major order") {
  const auto result = grid_search([](const std::vector<double>&) { return 1.0; },
                                  {{5.0, 6.0}, {7.0, 8.0}});
  CHECK(result.best_point == std::vector<double>{5.0, 7.0});
}

TEST_CASE("bayes optimize with budget 1 returns its single point") {
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 5.0, ParamScale::kLinear});
  BoConfig config;
  config.budget = 1;
  config.n_init = 1;
  config.seed = 3;
  const auto result =
      bayes_optimize([](const std::vector<double>& p) { return -p[0]; }, space, config);
  REQUIRE(result.trace.size() == 1);
  CHECK(result.best_point == result.trace[0].point);
}

TEST_CASE("bayes optimize trace length equals the budget") {
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 5.0, ParamScale::kLinear});
  BoConfig config;
  config.budget = 12;
  config.seed = 5;
  const auto result = bayes_optimize(
      [](const std::vector<double>& p) { return -(p[0] - 2) * (p[0] - 2); }, space,
      config);
  CHECK(result.trace.size() == 12);
}

TEST_CASE("bayes optimize locates the quadratic optimum in most seeds") {
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 5.0, ParamScale::kLinear});
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BoConfig config;
    config.budget = 30;
    config.seed = seed;
    const auto result = bayes_optimize(
        [](const std::vector<double>& p) { return -(p[0] - 2) * (p[0] - 2); }, space,
        config);
    if (std::abs(result.best_point[0] - 2.0) <= 0.2) ++hits;
  }
  CHECK(hits >= 18);
}

TEST_CASE("bayes optimize never loses to its own initial points") {
  SearchSpace space;
  space.dims.push_back({"x", -3.0, 3.0, ParamScale::kLinear});
  BoConfig config;
  config.budget = 15;
  config.n_init = 5;
  config.seed = 8;
  const auto objective = [](const std::vector<double>& p) {
    return std::sin(3 * p[0]) - 0.2 * p[0] * p[0];
  };
  const auto result = bayes_optimize(objective, space, config);
  double best_init = -1e300;
  for (std::size_t i = 0; i < config.n_init; ++i)
    best_init = std::max(best_init, result.trace[i].objective);
  CHECK(result.best_objective >= best_init);
}

TEST_CASE("bayes optimize is deterministic under a fixed seed") {
  SearchSpace space;
  space.dims.push_back({"x", 1e-3, 1e3, ParamScale::kLog});
  BoConfig config;
  config.budget = 10;
  config.seed = 17;
  const auto objective = [](const std::vector<double>& p) {
    return -std::abs(std::log10(p[0]) - 1.0);
  };
  const auto a = bayes_optimize(objective, space, config);
  const auto b = bayes_optimize(objective, space, config);
  CHECK(a.best_point == b.best_point);
  CHECK(a.best_objective == b.best_objective);
}

TEST_CASE("log-scaled dimensions stay inside their bounds") {
  SearchSpace space;
  space.dims.push_back({"x", 1e-6, 1.0, ParamScale::kLog});
  BoConfig config;
  config.budget = 20;
  config.seed = 2;
  const auto result = bayes_optimize(
      [](const std::vector<double>& p) { return -p[0]; }, space, config);
  for (const auto& evaluation : result.trace) {
    CHECK(evaluation.point[0] >= 1e-6 * (1 - 1e-12));
    CHECK(evaluation.point[0] <= 1.0 * (1 + 1e-12));
  }
}

TEST_CASE("failed evaluations are recorded and survivors win") {
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 1.0, ParamScale::kLinear});
  BoConfig config;
  config.budget = 10;
  config.seed = 4;
  const auto result = bayes_optimize(
      [](const std::vector<double>& p) {
        if (p[0] < 0.5) throw DataError("bad region");
        return -p[0];
      },
      space, config);
  bool any_failed = false;
  for (const auto& evaluation : result.trace) any_failed |= evaluation.failed;
  CHECK(any_failed);
  CHECK(result.best_point[0] >= 0.5);
}

TEST_CASE("all evaluations failing is an error") {
  SearchSpace space;
  space.dims.push_back({"x", 0.0, 1.0, ParamScale::kLinear});
  BoConfig config;
  config.budget = 5;
  config.seed = 6;
  CHECK_THROWS_AS(
      bayes_optimize([](const std::vector<double>&) -> double {
        throw DataError("always fails");
      }, space, config),
      DataError);
}

TEST_CASE("search space validation") {
  SearchSpace space;
  space.dims.push_back({"x", 2.0, 1.0, ParamScale::kLinear});
  CHECK_THROWS_AS(space.validate(), DataError);
  SearchSpace log_space;
  log_space.dims.push_back({"x", -1.0, 1.0, ParamScale::kLog});
  CHECK_THROWS_AS(log_space.validate(), DataError);
  CHECK_THROWS_AS(SearchSpace{}.validate(), DataError);
}

TEST_CASE("objective_gp reaches near-zero loss on noiseless linear data") {
  Eigen::MatrixXd x(20, 1);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i / 20.0;
    y(i) = 2.0 * x(i, 0);
  }
  const double objective =
      objective_gp({1.0, 1.0, 1e-8}, x, y, x, y, LossKind::kMse);
  CHECK(objective > -1e-6);  // loss ~ 0, objective = -loss

  // A huge-noise point is strictly worse on the same fixture.
  const double noisy = objective_gp({1.0, 1.0, 1e3}, x, y, x, y, LossKind::kMse);
  CHECK(noisy < objective);
}

TEST_CASE("objective_gp is deterministic") {
  Eigen::MatrixXd x(10, 2);
  x.setRandom();
  Eigen::VectorXd y = x.col(0);
  const double a = objective_gp({2.0, 1.5, 1e-4}, x, y, x, y, LossKind::kMae);
  const double b = objective_gp({2.0, 1.5, 1e-4}, x, y, x, y, LossKind::kMae);
  CHECK(a == b);
}

TEST_CASE("default gp search space bounds") {
  const SearchSpace space = default_gp_search_space();
  REQUIRE(space.dims.size() == 3);
  CHECK(space.dims[0].lower == 1e-3);
  CHECK(space.dims[0].upper == 1e3);
  CHECK(space.dims[1].lower == 1e-2);
  CHECK(space.dims[1].upper == 1e2);
  CHECK(space.dims[2].lower == 1e-6);
  CHECK(space.dims[2].upper == 1.0);
  for (const auto& dim : space.dims) CHECK(dim.scale == ParamScale::kLog);
}
