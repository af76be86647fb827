// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/predictors.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace simscore {

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "mse" || name == "MSE") return LossKind::kMse;
  if (name == "mae" || name == "MAE") return LossKind::kMae;
  if (name == "rss" || name == "RSS") return LossKind::kRss;
  throw DataError("unknown loss kind: " + name);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kMse: return "mse";
    case LossKind::kMae: return "mae";
    case LossKind::kRss: return "rss";
  }
  return "?";
}

double loss(LossKind kind, const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
  if (predicted.size() != actual.size() || predicted.size() == 0)
    throw DataError("loss: length mismatch or empty vectors");
  const Eigen::VectorXd residual = predicted - actual;
  switch (kind) {
    case LossKind::kMse: return residual.squaredNorm() / static_cast<double>(residual.size());
    case LossKind::kMae: return residual.cwiseAbs().mean();
    case LossKind::kRss: return residual.squaredNorm();
  }
  throw DataError("unknown loss kind");
}

PredictorKind predictor_kind_from_string(const std::string& name) {
  if (name == "mlr" || name == "linreg") return PredictorKind::kMlr;
  if (name == "mlp" || name == "dnn") return PredictorKind::kMlp;
  if (name == "gp" || name == "bayes") return PredictorKind::kGp;
  if (name == "gbt" || name == "xgboost") return PredictorKind::kGbt;
  throw DataError("unknown predictor kind: " + name);
}

std::string to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kMlr: return "mlr";
    case PredictorKind::kMlp: return "mlp";
    case PredictorKind::kGp: return "gp";
    case PredictorKind::kGbt: return "gbt";
  }
  return "?";
}

PredictorModel fit_mlr(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema) {
  if (features.rows() < 1 || features.rows() != targets.size())
    throw DataError("fit_mlr: bad input shape");
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();

  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = features;

  // SVD gives the minimum-norm least-squares solution, i.e. the
  // pseudo-inverse result, and stays stable on ill-conditioned designs.
  const Eigen::VectorXd solution =
      design.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(targets);

  MlrModel mlr;
  mlr.intercept = solution(0);
  mlr.coefficients = solution.tail(d);

  PredictorModel model;
  model.kind = PredictorKind::kMlr;
  model.schema = schema;
  model.params = std::move(mlr);
  return model;
}

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::VectorXd a2 = a.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = -2.0 * a * b.transpose();
  d2.colwise() += a2;
  d2.rowwise() += b2.transpose();
  return d2.cwiseMax(0.0);
}

Eigen::MatrixXd rbf_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const GpHyper& hyper) {
  const double inv = 1.0 / (2.0 * hyper.length_scale * hyper.length_scale);
  return hyper.constant * (-inv * squared_distances(a, b).array()).exp();
}

}  // namespace

PredictorModel fit_gp(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                      const FeatureSchema& schema, const GpHyper& hyper) {
  if (features.rows() < 1 || features.rows() != targets.size())
    throw DataError("fit_gp: bad input shape");
  if (hyper.constant <= 0 || hyper.length_scale <= 0 || hyper.noise < 0)
    throw DataError("fit_gp: invalid hyperparameters");

  Eigen::MatrixXd kernel = rbf_kernel(features, features, hyper);
  kernel.diagonal().array() += hyper.noise;

  GpModel gp;
  gp.hyper = hyper;
  gp.train_inputs = features;

  for (double jitter = 1e-9; jitter <= 1e-3 * 1.0000001; jitter *= 10.0) {
    Eigen::MatrixXd k = kernel;
    k.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      gp.alpha = llt.solve(targets);
      PredictorModel model;
      model.kind = PredictorKind::kGp;
      model.schema = schema;
      model.params = std::move(gp);
      return model;
    }
  }
  throw DataError("kernel not positive definite");
}

Eigen::VectorXd predict(const PredictorModel& model, const Eigen::MatrixXd& features) {
  if (static_cast<std::size_t>(features.cols()) != model.schema.names.size())
    throw DataError("predict: feature width does not match model schema");

  switch (model.kind) {
    case PredictorKind::kMlr: {
      const auto& mlr = std::get<MlrModel>(model.params);
      return (features * mlr.coefficients).array() + mlr.intercept;
    }
    case PredictorKind::kMlp: {
      const auto& mlp = std::get<MlpModel>(model.params);
      Eigen::MatrixXd inputs = features;
      if (mlp.standardized) {
        inputs.rowwise() -= mlp.feature_mean.transpose();
        inputs.array().rowwise() /= mlp.feature_scale.transpose().array();
      }
      return mlp_forward(mlp, inputs);
    }
    case PredictorKind::kGp: {
      const auto& gp = std::get<GpModel>(model.params);
      return rbf_kernel(features, gp.train_inputs, gp.hyper) * gp.alpha;
    }
    case PredictorKind::kGbt: {
      const auto& gbt = std::get<GbtModel>(model.params);
      Eigen::VectorXd out = Eigen::VectorXd::Constant(features.rows(), gbt.base_score);
      for (const auto& tree : gbt.trees)
        for (Eigen::Index r = 0; r < features.rows(); ++r)
          out(r) += gbt.learning_rate * tree.eval(features.row(r));
      return out;
    }
  }
  throw DataError("unknown predictor kind");
}

}  // namespace simscore
