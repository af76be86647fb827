// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "simscore/metrics.hpp"

using namespace simscore;

TEST_CASE("prediction order sorts runtimes by ascending score") {
  CHECK(prediction_order({0.3, 0.1, 0.2}, {10, 5, 7}) == std::vector<double>{5, 7, 10});
  CHECK(prediction_order({1, 2, 3}, {4, 5, 6}) == std::vector<double>{4, 5, 6});
  // Ties keep the original order (stable).
  CHECK(prediction_order({1, 1, 1}, {9, 8, 7}) == std::vector<double>{9, 8, 7});
}

TEST_CASE("e_top1 worked examples, exact") {
  CHECK(e_top1({1.0, 3.0}, {1.0, 3.0}) == 0.0);
  CHECK(e_top1({2.0, 1.0}, {1.0, 2.0}) == 50.0);
}

TEST_CASE("r_top1 worked examples, exact") {
  // Fastest ranked first among 100.
  std::vector<double> scores(100), runtimes(100);
  for (int i = 0; i < 100; ++i) {
    scores[i] = i;
    runtimes[i] = i + 1.0;
  }
  CHECK(r_top1(scores, runtimes) == 1.0);
  // t_pred = [2,1,4]: true minimum 1 sits at position 2 (1-based).
  CHECK(r_top1({0.1, 0.2, 0.3}, {2.0, 1.0, 4.0}) == (2.0 * 100.0) / 3.0);
  CHECK(r_top1_from_rank(1, 3) == (2.0 * 100.0) / 3.0);
}

TEST_CASE("quality score worked examples, exact") {
  CHECK(quality_score({1, 2, 3, 4}) == 0.0);
  CHECK(quality_score({2, 1, 4}) == (100.0 / 3.0) * 0.5);
  CHECK(quality_score({4, 3, 2}) > 0.0);
}

TEST_CASE("quality score is scale invariant") {
  const std::vector<double> seq{3, 1, 4, 1.5, 9};
  std::vector<double> scaled = seq;
  for (double& v : scaled) v *= 137.0;
  CHECK(quality_score(seq) == doctest::Approx(quality_score(scaled)).epsilon(1e-12));
}

TEST_CASE("q_split halves exclude the boundary pair") {
  const auto [q_low, q_high] = q_split({1, 3, 2, 4});
  CHECK(q_low == 0.0);   // over [1,3]
  CHECK(q_high == 0.0);  // over [2,4]; the 3->2 drop is uncounted
  const auto [p_low, p_high] = q_split({1, 2, 3, 4, 5, 6});
  CHECK(p_low == 0.0);
  CHECK(p_high == 0.0);
}

TEST_CASE("q_split needs at least four samples") {
  CHECK_THROWS_AS(q_split({1, 2, 3}), DataError);
}

TEST_CASE("parallel break-even worked examples") {
  CHECK(parallel_break_even(90, 1, 1, 15) == 3);
  CHECK(parallel_break_even(30, 1, 1, 15) == 1);
  CHECK(parallel_break_even(1, 1, 1, 15) == 1);
  CHECK(parallel_break_even(3600, 3, 0.5, 15) == 69);
}

TEST_CASE("parallel break-even rejects non-positive inputs") {
  CHECK_THROWS_AS(parallel_break_even(0, 1, 1, 15), DataError);
  CHECK_THROWS_AS(parallel_break_even(90, 1, -1, 15), DataError);
  CHECK_THROWS_AS(parallel_break_even(90, 1, 1, 0), DataError);
}

TEST_CASE("perfect predictor identity for n in {4, 100, 500}") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uniform(0.5, 5.0);
  for (std::size_t n : {4u, 100u, 500u}) {
    std::vector<double> runtimes(n);
    for (auto& r : runtimes) r = uniform(rng);
    const RankingReport report =
        rank_predictions({"k", 0}, "perfect", runtimes, runtimes);
    CHECK(report.e_top1 == 0.0);
    CHECK(report.q_low == 0.0);
    CHECK(report.q_high == 0.0);
    CHECK(report.r_top1 == doctest::Approx(100.0 / n).epsilon(1e-12));
    CHECK(report.sample_count == n);
  }
}

TEST_CASE("e_top1 is non-negative for arbitrary predictions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uniform(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> scores(20), runtimes(20);
    for (int i = 0; i < 20; ++i) {
      scores[i] = uniform(rng);
      runtimes[i] = uniform(rng);
    }
    const RankingReport report = rank_predictions({"k", 0}, "p", scores, runtimes);
    CHECK(report.e_top1 >= 0.0);
    CHECK(report.r_top1 >= 100.0 / 20 - 1e-12);
    CHECK(report.r_top1 <= 100.0 + 1e-12);
  }
}

TEST_CASE("r_top1 tracks identity, not runtime value ties") {
  // Two implementations share the minimal runtime; the truly fastest is
  // index 1, which the predictor ranks last.
  const std::vector<double> scores{0.0, 1.0, 0.5};
  const std::vector<double> runtimes{1.0, 1.0, 2.0};
  // The true argmin by stable convention is index 0 (first minimal).
  CHECK(r_top1(scores, runtimes) == doctest::Approx(100.0 / 3).epsilon(1e-12));
}

TEST_CASE("report csv has the documented header and row count") {
  const RankingReport report = rank_predictions({"conv", 2}, "gbt",
                                                {1.0, 2.0, 3.0, 4.0},
                                                {1.0, 2.0, 3.0, 4.0});
  const std::string csv = report_csv({report});
  CHECK(csv.find("kernel_type,group_id,predictor,e_top1,q_low,q_high,r_top1,n") == 0);
  CHECK(csv.find("conv,2,gbt,") != std::string::npos);
}
