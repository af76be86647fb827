// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "simscore/features.hpp"
#include "simscore/metrics.hpp"
#include "simscore/predictors.hpp"
#include "simscore/synthetic.hpp"

namespace simscore {

/// Tuned configurations for the predictor roster; defaults mirror the
/// reference setups (GBT: 300 trees depth 3, lr 0.05, subsample 0.8,
/// colsample 0.6, lambda 0.1; MLP: fixed architecture, MAE loss).
struct PredictorRoster {
  bool use_mlr = true;
  bool use_mlp = true;
  bool use_gp = true;
  bool use_gbt = true;
  bool include_perfect = false;  // injects scores := true targets
  MlpConfig mlp;
  GbtConfig gbt;
  GpHyper gp{1.0, 4.0, 1e-4};
};

struct ExperimentPlan {
  std::size_t test_count = 100;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;
  PredictorRoster roster;

  void validate() const;
};

/// The experimental protocol: per repetition a random train/test split per
/// group, one model per predictor trained on the combined train rows,
/// predictions on every group's test rows; after all repetitions the
/// per-sample median prediction (over the repetitions in which the sample
/// was held out) feeds the ranking metrics per group per predictor.
std::vector<RankingReport> run_experiment(const Dataset& dataset, const ExperimentPlan& plan);

struct LogoResult {
  RankingReport excluded;  // held-out group absent from training
  RankingReport included;  // same samples, group present in training
};

/// Trains one predictor kind twice -- without and with the held-out
/// group -- and evaluates both on the held-out group's test samples using
/// window-based normalization (no oracle group means).
LogoResult leave_one_group_out(const Dataset& dataset, const ExperimentPlan& plan,
                               const GroupKey& held_out, PredictorKind kind);

/// Per-sample sorted t_ref vs prediction-ordered t_pred columns, gnuplot
/// friendly, for one group and one predictor's scores.
std::string sorted_curve_data(const std::vector<double>& scores,
                              const std::vector<double>& runtimes);

}  // namespace simscore
