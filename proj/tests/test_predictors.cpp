// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "simscore/predictors.hpp"

using namespace simscore;

namespace {

FeatureSchema dummy_schema(std::size_t n_features) {
  FeatureSchema schema;
  schema.topology.architecture = "x86";
  schema.topology.line_size_bytes = 64;
  schema.topology.levels.push_back({"L1D", 64ull * 8 * 64, 64, 8});
  for (std::size_t i = 0; i < n_features; ++i)
    schema.names.push_back("f" + std::to_string(i));
  return schema;
}

}  // namespace

TEST_CASE("loss functions") {
  Eigen::VectorXd a(2), b(2);
  a << 1, 2;
  b << 1, 2;
  CHECK(loss(LossKind::kMse, a, b) == 0.0);
  CHECK(loss(LossKind::kMae, a, b) == 0.0);
  CHECK(loss(LossKind::kRss, a, b) == 0.0);
  Eigen::VectorXd p(2), y(2);
  p << 0, 0;
  y << 1, -1;
  CHECK(loss(LossKind::kMse, p, y) == 1.0);
  CHECK(loss(LossKind::kRss, p, y) == 2.0);
  CHECK(loss(LossKind::kMae, p, y) == 1.0);
}

TEST_CASE("loss rejects length mismatch") {
  Eigen::VectorXd a(2), b(3);
  a.setZero();
  b.setZero();
  CHECK_THROWS_AS(loss(LossKind::kMse, a, b), DataError);
}

TEST_CASE("mlr interpolates two points exactly") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  Eigen::VectorXd y(2);
  y << 1, 3;
  const PredictorModel model = fit_mlr(x, y, dummy_schema(1));
  const auto& mlr = std::get<MlrModel>(model.params);
  CHECK(mlr.intercept == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mlr.coefficients(0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("mlr on constant targets has zero slopes") {
  Eigen::MatrixXd x(5, 2);
  x.setRandom();
  Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 3.5);
  const PredictorModel model = fit_mlr(x, y, dummy_schema(2));
  const auto& mlr = std::get<MlrModel>(model.params);
  CHECK(mlr.intercept == doctest::Approx(3.5).epsilon(1e-8));
  for (int i = 0; i < mlr.coefficients.size(); ++i)
    CHECK(std::abs(mlr.coefficients(i)) <= 1e-8);
}

TEST_CASE("mlr matches the pseudo-inverse oracle on 100 random systems") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> n_dist(5, 50), d_dist(1, 10);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_dist(rng);
    const int d = std::min(d_dist(rng), n - 1);
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) x(i, j) = gauss(rng);
      y(i) = gauss(rng);
    }
    const PredictorModel model = fit_mlr(x, y, dummy_schema(d));
    const auto& mlr = std::get<MlrModel>(model.params);

    // Independent oracle: SVD pseudo-inverse on the augmented design.
    Eigen::MatrixXd design(n, d + 1);
    design.col(0).setOnes();
    design.rightCols(d) = x;
    const Eigen::VectorXd beta =
        design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);

    CHECK(std::abs(mlr.intercept - beta(0)) < 1e-8);
    for (int j = 0; j < d; ++j)
      CHECK(std::abs(mlr.coefficients(j) - beta(j + 1)) < 1e-8);
  }
}

TEST_CASE("mlr training loss never exceeds the constant predictor's") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(30, 4);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = gauss(rng);
    y(i) = gauss(rng);
  }
  const PredictorModel model = fit_mlr(x, y, dummy_schema(4));
  const Eigen::VectorXd fitted = predict(model, x);
  const Eigen::VectorXd constant = Eigen::VectorXd::Constant(30, y.mean());
  CHECK(loss(LossKind::kRss, fitted, y) <= loss(LossKind::kRss, constant, y) + 1e-12);
}

TEST_CASE("mlr predict evaluates the linear form") {
  PredictorModel model;
  model.kind = PredictorKind::kMlr;
  model.schema = dummy_schema(1);
  MlrModel mlr;
  mlr.intercept = 1.0;
  mlr.coefficients = Eigen::VectorXd::Constant(1, 2.0);
  model.params = mlr;
  Eigen::MatrixXd x(1, 1);
  x << 3;
  CHECK(predict(model, x)(0) == 7.0);
}

TEST_CASE("predict rejects schema-width mismatch") {
  Eigen::MatrixXd x(2, 1);
  x << 0, 1;
  Eigen::VectorXd y(2);
  y << 1, 3;
  const PredictorModel model = fit_mlr(x, y, dummy_schema(1));
  Eigen::MatrixXd wide(1, 2);
  wide.setZero();
  CHECK_THROWS_AS(predict(model, wide), DataError);
}

TEST_CASE("mlp layer widths are fixed") {
  CHECK(mlp_layer_widths(43) ==
        std::vector<std::size_t>{43, 128, 128, 64, 32, 16, 1});
}

TEST_CASE("zero mlp predicts zero") {
  MlpModel model;
  const auto widths = mlp_layer_widths(3);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    model.weights.push_back(Eigen::MatrixXd::Zero(widths[l + 1], widths[l]));
    model.biases.push_back(Eigen::VectorXd::Zero(widths[l + 1]));
  }
  Eigen::MatrixXd x(2, 3);
  x.setRandom();
  const Eigen::VectorXd out = mlp_forward(model, x);
  CHECK(out(0) == 0.0);
  CHECK(out(1) == 0.0);
}

TEST_CASE("mlp analytic gradients match central finite differences") {
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
  // Spot-check every layer: all biases and a stride of weights (checking
  // all ~25k weights at h=1e-5 is wasteful; strides cover each layer).
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (int i = 0; i < model.biases[l].size(); i += 7)
      check_param(&model.biases[l](i), gradients.biases[l](i));
    const int stride = std::max<int>(1, model.weights[l].size() / 40);
    for (int i = 0; i < model.weights[l].size(); i += stride)
      check_param(&model.weights[l].data()[i], gradients.weights[l].data()[i]);
  }
  CHECK(max_rel < 1e-4);
}

TEST_CASE("mlp learns a linear function of the first feature") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(500, 3);
  Eigen::VectorXd y(500);
  for (int i = 0; i < 500; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = gauss(rng);
    y(i) = x(i, 0);
  }
  MlpConfig config;
  config.seed = 9;
  config.epochs = 60;
  const PredictorModel model = fit_mlp(x, y, dummy_schema(3), config);
  const Eigen::VectorXd fitted = predict(model, x);
  const double variance = (y.array() - y.mean()).square().mean();
  CHECK(loss(LossKind::kMse, fitted, y) < 0.05 * variance);
}

TEST_CASE("mlp training is deterministic under a fixed seed") {
  Eigen::MatrixXd x(40, 2);
  x.setRandom();
  Eigen::VectorXd y = x.col(0);
  MlpConfig config;
  config.seed = 21;
  config.epochs = 5;
  const auto a = predict(fit_mlp(x, y, dummy_schema(2), config), x);
  const auto b = predict(fit_mlp(x, y, dummy_schema(2), config), x);
  CHECK(a == b);
}

TEST_CASE("noise-free gp interpolates a single training point") {
  Eigen::MatrixXd x(1, 2);
  x << 0.5, -1.0;
  Eigen::VectorXd y(1);
  y << 3.25;
  const PredictorModel model = fit_gp(x, y, dummy_schema(2), {1.0, 1.0, 0.0});
  CHECK(std::abs(predict(model, x)(0) - 3.25) < 1e-8);
}

TEST_CASE("gp reverts to the zero prior far from training data") {
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, -1.0;
  const PredictorModel model = fit_gp(x, y, dummy_schema(1), {1.0, 0.5, 0.0});
  Eigen::MatrixXd far(1, 1);
  far << 100.0;
  CHECK(std::abs(predict(model, far)(0)) < 1e-6);
}

TEST_CASE("gp posterior mean matches hand-inverted 2x2 kernel algebra") {
  const double C = 2.0, ell = 1.5, noise = 0.1;
  Eigen::MatrixXd x(2, 1);
  x << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, 2.0;
  const PredictorModel model = fit_gp(x, y, dummy_schema(1), {C, ell, noise});

  const double q = 0.3;  // query point
  auto rbf = [&](double a, double b) {
    return C * std::exp(-(a - b) * (a - b) / (2 * ell * ell));
  };
  // K = [[C+noise, k01], [k01, C+noise]] inverted by the closed 2x2 formula.
  const double k00 = C + noise, k01 = rbf(0.0, 1.0);
  const double det = k00 * k00 - k01 * k01;
  const double i00 = k00 / det, i01 = -k01 / det;
  const double a0 = i00 * y(0) + i01 * y(1);
  const double a1 = i01 * y(0) + i00 * y(1);
  const double expected = rbf(q, 0.0) * a0 + rbf(q, 1.0) * a1;

  Eigen::MatrixXd query(1, 1);
  query << q;
  CHECK(std::abs(predict(model, query)(0) - expected) < 1e-8);
}

TEST_CASE("gp noise never decreases training RSS versus the noise-free fit") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(20, 2);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 2; ++j) x(i, j) = gauss(rng);
    y(i) = gauss(rng);
  }
  const auto clean = fit_gp(x, y, dummy_schema(2), {1.0, 1.0, 0.0});
  const auto noisy = fit_gp(x, y, dummy_schema(2), {1.0, 1.0, 0.5});
  const double rss_clean = loss(LossKind::kRss, predict(clean, x), y);
  const double rss_noisy = loss(LossKind::kRss, predict(noisy, x), y);
  CHECK(rss_noisy >= rss_clean - 1e-9);
}

TEST_CASE("gbt stump reproduces the hand-computed leaf weights") {
  // y = {2,2,4,4} split perfectly by the single feature; with base score 0,
  // lr 1, lambda 0.1: G_left = -4, H_left = 2 -> w = 4/2.1.
  Eigen::MatrixXd x(4, 1);
  x << 0, 0, 1, 1;
  Eigen::VectorXd y(4);
  y << 2, 2, 4, 4;
  GbtConfig config;
  config.n_trees = 1;
  config.max_depth = 1;
  config.learning_rate = 1.0;
  config.subsample = 1.0;
  config.colsample = 1.0;
  config.reg_lambda = 0.1;
  config.reg_alpha = 0.0;
  config.base_score = 0.0;
  const PredictorModel model = fit_gbt(x, y, dummy_schema(1), config);
  const auto& gbt = std::get<GbtModel>(model.params);
  REQUIRE(gbt.trees.size() == 1);

  Eigen::RowVectorXd left(1), right(1);
  left << 0;
  right << 1;
  CHECK(gbt.trees[0].eval(left) == doctest::Approx(4.0 / 2.1).epsilon(1e-12));
  CHECK(gbt.trees[0].eval(right) == doctest::Approx(8.0 / 2.1).epsilon(1e-12));
  // Full prediction includes the base score (0 here).
  CHECK(predict(model, x)(0) == doctest::Approx(4.0 / 2.1).epsilon(1e-12));
}

TEST_CASE("gbt on constant targets predicts the base score") {
  Eigen::MatrixXd x(6, 2);
  x.setRandom();
  Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 2.5);
  GbtConfig config;
  config.subsample = 1.0;
  config.colsample = 1.0;
  const PredictorModel model = fit_gbt(x, y, dummy_schema(2), config);
  const Eigen::VectorXd out = predict(model, x);
  for (int i = 0; i < out.size(); ++i) CHECK(out(i) == doctest::Approx(2.5));
}

TEST_CASE("gbt with zero learning rate predicts the base score everywhere") {
  Eigen::MatrixXd x(10, 2);
  x.setRandom();
  Eigen::VectorXd y = x.col(0);
  GbtConfig config;
  config.learning_rate = 0.0;
  const PredictorModel model = fit_gbt(x, y, dummy_schema(2), config);
  const Eigen::VectorXd out = predict(model, x);
  for (int i = 0; i < out.size(); ++i)
    CHECK(out(i) == doctest::Approx(y.mean()).epsilon(1e-12));
}

TEST_CASE("gbt training is deterministic under a fixed seed") {
  Eigen::MatrixXd x(50, 3);
  x.setRandom();
  Eigen::VectorXd y = x.col(0).array().square();
  GbtConfig config;
  config.n_trees = 20;
  config.seed = 77;
  const auto a = predict(fit_gbt(x, y, dummy_schema(3), config), x);
  const auto b = predict(fit_gbt(x, y, dummy_schema(3), config), x);
  CHECK(a == b);
}

TEST_CASE("predictor kind string round-trips and aliases") {
  CHECK(predictor_kind_from_string("mlr") == PredictorKind::kMlr);
  CHECK(predictor_kind_from_string("linreg") == PredictorKind::kMlr);
  CHECK(predictor_kind_from_string("dnn") == PredictorKind::kMlp);
  CHECK(predictor_kind_from_string("xgboost") == PredictorKind::kGbt);
  CHECK(predictor_kind_from_string("bayes") == PredictorKind::kGp);
  CHECK_THROWS_AS(predictor_kind_from_string("nope"), DataError);
  CHECK(to_string(PredictorKind::kGbt) == "gbt");
}
