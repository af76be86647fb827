// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "simscore/core.hpp"

namespace simscore {

/// Ranking quality of one predictor on one group, all in percent.
struct RankingReport {
  GroupKey group;
  std::string predictor;
  double e_top1 = 0.0;
  double r_top1 = 0.0;
  double q_low = 0.0;
  double q_high = 0.0;
  std::size_t sample_count = 0;
};

/// Reference runtimes reordered by ascending predicted score; score ties
/// keep the original index order (stable sort).
std::vector<double> prediction_order(const std::vector<double>& scores,
                                     const std::vector<double>& runtimes);

/// Permutation of indices by ascending score, stable on ties.
std::vector<std::size_t> prediction_order_indices(const std::vector<double>& scores);

/// Relative error between the true fastest runtime and the runtime of the
/// top-ranked prediction: (1 - t_ref[0] / t_pred[0]) * 100.
double e_top1(const std::vector<double>& t_pred, const std::vector<double>& t_ref_sorted);

/// Percentile position of the truly fastest implementation in the
/// predicted ordering. `fastest_rank` is the zero-based position of the
/// true argmin within the prediction order (tracked by identity, not by
/// runtime value comparison).
double r_top1_from_rank(std::size_t fastest_rank, std::size_t n);

/// Identity-tracked R_top1: scores and runtimes are parallel arrays for
/// the same implementations.
double r_top1(const std::vector<double>& scores, const std::vector<double>& runtimes);

/// Averaged relative magnitude of consecutive order inversions:
/// (100/n) * sum_i (seq[i] - min(seq[i], seq[i+1])) / seq[i].
double quality_score(const std::vector<double>& sequence);

/// Q over the lower and upper index halves of the prediction-ordered
/// runtimes, split at floor(n/2); the boundary pair is uncounted.
std::pair<double, double> q_split(const std::vector<double>& t_pred);

/// Minimum number of parallel simulators whose throughput beats
/// sequential native benchmarking:
/// ceil(t_simulator / ((t_cooldown + t_ref) * N_exe)).
std::uint64_t parallel_break_even(double t_simulator, double t_cooldown, double t_ref,
                                  std::uint64_t n_exe);

/// Full report for one predictor's scores on one group.
RankingReport rank_predictions(const GroupKey& group, const std::string& predictor,
                               const std::vector<double>& scores,
                               const std::vector<double>& runtimes);

/// CSV rows in the order E_top1, Q_low, Q_high, R_top1 per predictor.
void write_report_csv(const std::filesystem::path& path,
                      const std::vector<RankingReport>& reports);
std::string report_table(const std::vector<RankingReport>& reports);
std::string report_csv(const std::vector<RankingReport>& reports);

}  // namespace simscore
