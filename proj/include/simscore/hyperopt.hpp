// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "simscore/predictors.hpp"

namespace simscore {

enum class ParamScale { kLinear, kLog };

struct SearchDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  ParamScale scale = ParamScale::kLinear;
};

struct SearchSpace {
  std::vector<SearchDim> dims;
  void validate() const;
};

/// Throwing or returning -inf marks the point as failed.
using Objective = std::function<double(const std::vector<double>&)>;

struct Evaluation {
  std::vector<double> point;
  double objective = 0.0;
  bool failed = false;
};

struct OptResult {
  std::vector<double> best_point;
  double best_objective = 0.0;
  std::vector<Evaluation> trace;
};

struct BoConfig {
  std::size_t budget = 30;
  std::size_t n_init = 5;          // random points before the surrogate kicks in
  std::size_t n_candidates = 1024; // random multistart per acquisition step
  double xi = 0.01;                // expected-improvement exploration jitter
  std::uint64_t seed = 0;
};

/// Maximizes the objective with a GP surrogate and expected-improvement
/// acquisition. Log-scaled dimensions are searched in log space.
OptResult bayes_optimize(const Objective& objective, const SearchSpace& space,
                         const BoConfig& config);

/// Minimizes over the full Cartesian product of per-parameter value lists;
/// ties go to the first cell in row-major order (last parameter fastest).
OptResult grid_search(const Objective& objective,
                      const std::vector<std::vector<double>>& grid);

/// Fits a GP with the given hyperparameters on the train split, predicts
/// the test split, and returns the negated loss (maximization convention).
/// A failed kernel factorization yields -inf.
double objective_gp(const GpHyper& hyper, const Eigen::MatrixXd& train_x,
                    const Eigen::VectorXd& train_y, const Eigen::MatrixXd& test_x,
                    const Eigen::VectorXd& test_y, LossKind loss_kind);

/// Bounds for GP hyperparameter search: C in [1e-3, 1e3] log,
/// length_scale in [1e-2, 1e2] log, noise in [1e-6, 1] log.
SearchSpace default_gp_search_space();

void write_trace_csv(const std::filesystem::path& path, const SearchSpace& space,
                     const std::vector<Evaluation>& trace);

}  // namespace simscore
