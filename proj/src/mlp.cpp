// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "simscore/predictors.hpp"

namespace simscore {

std::vector<std::size_t> mlp_layer_widths(std::size_t input_dim) {
  return {input_dim, 128, 128, 64, 32, 16, 1};
}

Eigen::VectorXd mlp_forward(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd activation = inputs;
  const std::size_t layers = model.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = activation * model.weights[l].transpose();
    z.rowwise() += model.biases[l].transpose();
    if (l + 1 < layers)
      activation = z.array().tanh();
    else
      activation = std::move(z);
  }
  return activation.col(0);
}

double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& inputs,
                              const Eigen::VectorXd& targets, MlpGradients* gradients) {
  const std::size_t layers = model.weights.size();
  const double n = static_cast<double>(inputs.rows());

  // Forward pass keeping activations for backprop.
  std::vector<Eigen::MatrixXd> activations(layers + 1);
  activations[0] = inputs;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = activations[l] * model.weights[l].transpose();
    z.rowwise() += model.biases[l].transpose();
    activations[l + 1] = (l + 1 < layers) ? z.array().tanh().matrix() : z;
  }

  const Eigen::VectorXd residual = activations[layers].col(0) - targets;
  const double value = residual.cwiseAbs().mean();

  if (gradients) {
    gradients->weights.resize(layers);
    gradients->biases.resize(layers);
    // d(MAE)/d(pred) = sign(residual) / n
    Eigen::MatrixXd delta = (residual.array().sign() / n).matrix();
    for (std::size_t l = layers; l-- > 0;) {
      gradients->weights[l] = delta.transpose() * activations[l];
      gradients->biases[l] = delta.colwise().sum().transpose();
      if (l > 0) {
        Eigen::MatrixXd upstream = delta * model.weights[l];
        // tanh'(z) = 1 - tanh(z)^2 and activations[l] stores tanh(z)
        delta = upstream.array() * (1.0 - activations[l].array().square());
      }
    }
  }
  return value;
}

namespace {

MlpModel init_mlp(std::size_t input_dim, std::mt19937_64& rng) {
  MlpModel model;
  const auto widths = mlp_layer_widths(input_dim);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t fan_in = widths[l];
    const std::size_t fan_out = widths[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(Eigen::VectorXd::Zero(fan_out));
  }
  return model;
}

struct AdamState {
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  std::size_t step = 0;

  explicit AdamState(const MlpModel& model) {
    for (const auto& w : model.weights) {
      mw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      vw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : model.biases) {
      mb.push_back(Eigen::VectorXd::Zero(b.size()));
      vb.push_back(Eigen::VectorXd::Zero(b.size()));
    }
  }

  void apply(MlpModel& model, const MlpGradients& grads, const MlpConfig& cfg) {
    ++step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
      mw[l] = cfg.beta1 * mw[l] + (1.0 - cfg.beta1) * grads.weights[l];
      vw[l] = cfg.beta2 * vw[l].array() + (1.0 - cfg.beta2) * grads.weights[l].array().square();
      model.weights[l].array() -=
          cfg.learning_rate * (mw[l].array() / bc1) / ((vw[l].array() / bc2).sqrt() + cfg.epsilon);

      mb[l] = cfg.beta1 * mb[l] + (1.0 - cfg.beta1) * grads.biases[l];
      vb[l] = cfg.beta2 * vb[l].array() + (1.0 - cfg.beta2) * grads.biases[l].array().square();
      model.biases[l].array() -=
          cfg.learning_rate * (mb[l].array() / bc1) / ((vb[l].array() / bc2).sqrt() + cfg.epsilon);
    }
  }
};

}  // namespace

PredictorModel fit_mlp(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema, const MlpConfig& config) {
  if (features.rows() < 1 || features.rows() != targets.size())
    throw DataError("fit_mlp: bad input shape");
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();

  std::mt19937_64 rng(config.seed);
  MlpModel model = init_mlp(static_cast<std::size_t>(d), rng);

  model.standardized = config.standardize;
  model.feature_mean = Eigen::VectorXd::Zero(d);
  model.feature_scale = Eigen::VectorXd::Ones(d);
  Eigen::MatrixXd inputs = features;
  if (config.standardize) {
    model.feature_mean = features.colwise().mean();
    for (Eigen::Index c = 0; c < d; ++c) {
      const double var = (features.col(c).array() - model.feature_mean(c)).square().mean();
      const double sd = std::sqrt(var);
      model.feature_scale(c) = sd > 0.0 ? sd : 1.0;
    }
    inputs.rowwise() -= model.feature_mean.transpose();
    inputs.array().rowwise() /= model.feature_scale.transpose().array();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t val_count =
      n >= 10 ? static_cast<std::size_t>(config.validation_fraction * static_cast<double>(n)) : 0;
  std::vector<Eigen::Index> val_rows(order.begin(), order.begin() + val_count);
  std::vector<Eigen::Index> train_rows(order.begin() + val_count, order.end());

  Eigen::MatrixXd val_x(val_rows.size(), d);
  Eigen::VectorXd val_y(val_rows.size());
  for (std::size_t i = 0; i < val_rows.size(); ++i) {
    val_x.row(static_cast<Eigen::Index>(i)) = inputs.row(val_rows[i]);
    val_y(static_cast<Eigen::Index>(i)) = targets(val_rows[i]);
  }

  AdamState adam(model);
  MlpModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t stale_epochs = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(train_rows.begin(), train_rows.end(), rng);
    for (std::size_t start = 0; start < train_rows.size(); start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, train_rows.size() - start);
      Eigen::MatrixXd batch_x(count, d);
      Eigen::VectorXd batch_y(count);
      for (std::size_t i = 0; i < count; ++i) {
        batch_x.row(static_cast<Eigen::Index>(i)) = inputs.row(train_rows[start + i]);
        batch_y(static_cast<Eigen::Index>(i)) = targets(train_rows[start + i]);
      }
      MlpGradients grads;
      const double batch_loss = mlp_loss_and_gradients(model, batch_x, batch_y, &grads);
      if (!std::isfinite(batch_loss)) throw DataError("diverged");
      adam.apply(model, grads, config);
    }

    if (!val_rows.empty()) {
      const double val_mae = mlp_loss_and_gradients(model, val_x, val_y, nullptr);
      if (!std::isfinite(val_mae)) throw DataError("diverged");
      if (val_mae < best_val) {
        best_val = val_mae;
        best = model;
        stale_epochs = 0;
      } else if (++stale_epochs >= config.patience) {
        break;
      }
    }
  }
  if (!val_rows.empty()) model = best;

  PredictorModel out;
  out.kind = PredictorKind::kMlp;
  out.schema = schema;
  out.params = std::move(model);
  return out;
}

}  // namespace simscore
