// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <variant>
#include <vector>

#include "simscore/core.hpp"

namespace simscore {

enum class LossKind { kMse, kMae, kRss };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

/// MSE = mean squared residual, MAE = mean absolute residual,
/// RSS = sum of squared residuals.
double loss(LossKind kind, const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);

enum class PredictorKind { kMlr, kMlp, kGp, kGbt };

PredictorKind predictor_kind_from_string(const std::string& name);
std::string to_string(PredictorKind kind);

// ---- Multiple linear regression ------------------------------------------

struct MlrModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
};

// ---- Multilayer perceptron -----------------------------------------------

struct MlpConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 32;
  std::size_t epochs = 200;
  std::size_t patience = 20;           // early stop on validation MAE
  double validation_fraction = 0.1;
  bool standardize = true;
  std::uint64_t seed = 0;
};

/// Fixed regression architecture: dense layers of widths
/// input -> 128 -> 128 -> 64 -> 32 -> 16 -> 1, tanh hidden activations,
/// linear output.
std::vector<std::size_t> mlp_layer_widths(std::size_t input_dim);

struct MlpModel {
  std::vector<Eigen::MatrixXd> weights;  // weights[l] is out x in
  std::vector<Eigen::VectorXd> biases;
  bool standardized = false;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_scale;
};

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

/// Forward pass on already-standardized inputs.
Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// MAE loss and its analytic gradient w.r.t. every weight and bias; used
/// by training and directly checkable against finite differences.
double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets, MlpGradients* gradients);

// ---- Gaussian process ----------------------------------------------------

struct GpHyper {
  double constant = 1.0;      // C
  double length_scale = 1.0;  // l
  double noise = 0.0;         // sigma_n^2
};

struct GpModel {
  GpHyper hyper;
  Eigen::MatrixXd train_inputs;
  Eigen::VectorXd alpha;  // (K + jitter I)^-1 y
};

// ---- Gradient-boosted trees ----------------------------------------------

struct GbtNode {
  bool is_leaf = true;
  int feature = -1;
  double threshold = 0.0;
  double value = 0.0;  // leaf weight
  int left = -1;
  int right = -1;
};

struct GbtTree {
  std::vector<GbtNode> nodes;  // nodes[0] is the root
  double eval(const Eigen::RowVectorXd& row) const;
};

struct GbtConfig {
  std::size_t n_trees = 300;
  int max_depth = 3;
  double learning_rate = 0.05;
  double subsample = 0.8;
  double colsample = 0.6;
  double reg_lambda = 0.1;
  double reg_alpha = 0.0;
  double min_child_weight = 1.0;
  std::optional<double> base_score;  // defaults to mean(y)
  std::uint64_t seed = 0;
};

struct GbtModel {
  std::vector<GbtTree> trees;
  double learning_rate = 0.05;
  double base_score = 0.0;
};

// ---- Unified model -------------------------------------------------------

struct PredictorModel {
  PredictorKind kind = PredictorKind::kMlr;
  FeatureSchema schema;
  std::variant<MlrModel, MlpModel, GpModel, GbtModel> params;
};

/// Least squares via normal equations with ridge jitter 1e-10 on the Gram
/// diagonal, so rank-deficient designs still solve.
PredictorModel fit_mlr(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema);

PredictorModel fit_mlp(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema, const MlpConfig& config);

/// Kernel k(x,x') = C exp(-|x-x'|^2 / (2 l^2)) + sigma_n^2 [x == x' as a
/// training pair]. Factorization jitter starts at 1e-9 and escalates x10
/// up to 1e-3 before giving up.
PredictorModel fit_gp(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                      const FeatureSchema& schema, const GpHyper& hyper);

PredictorModel fit_gbt(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema, const GbtConfig& config);

/// Deterministic batch prediction; lower score means predicted faster.
Eigen::VectorXd predict(const PredictorModel& model, const Eigen::MatrixXd& features);

// Versioned JSON model files keyed by a schema fingerprint; loading
// refuses a fingerprint mismatch when `expected` is given.
void save_model(const PredictorModel& model, const std::filesystem::path& path);
PredictorModel load_model(const std::filesystem::path& path,
                          const std::optional<FeatureSchema>& expected = std::nullopt);

std::string model_to_json(const PredictorModel& model);
PredictorModel model_from_json(const std::string& text,
                               const std::optional<FeatureSchema>& expected = std::nullopt);

}  // namespace simscore
