// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <vector>

#include "simscore/core.hpp"
#include "simscore/dataset.hpp"

namespace simscore {

/// Raw ratio block for one StatVector:
/// [loads/total, stores/total, branches/total] then per cache level the six
/// ratios hits/accesses, misses/accesses, replacements/accesses for reads
/// and writes. Ratios with a zero denominator are defined as 0.
std::vector<double> raw_features(const StatVector& stats, const CacheTopology& topology);

/// Entry-wise (P - mean) / mean; a zero mean yields 0.
std::vector<double> normalize_to_group(const std::vector<double>& raw,
                                       const std::vector<double>& means);

enum class WindowMode { kExact, kStatic, kDynamic };

/// Group-mean estimate used at inference time when the true group means
/// are unknown. Static windows freeze after the first `window_size`
/// samples; dynamic windows keep a running mean over every batch.
class WindowState {
 public:
  static WindowState exact(const GroupSummary& summary);
  static WindowState static_window(std::size_t window_size, std::size_t raw_len);
  static WindowState dynamic_window(std::size_t raw_len);

  // Folds a batch of raw feature vectors (plus instruction counts) into
  // the running means. Throws on exact mode.
  void update(const std::vector<std::vector<double>>& raw_batch,
              const std::vector<double>& instruction_counts);

  WindowMode mode() const { return mode_; }
  bool frozen() const { return frozen_; }
  std::size_t samples_seen() const { return samples_seen_; }
  std::size_t window_size() const { return window_size_; }

  bool ready() const;
  std::vector<double> feature_means() const;
  double mean_instructions() const;

 private:
  WindowState() = default;

  WindowMode mode_ = WindowMode::kDynamic;
  std::size_t window_size_ = 0;  // static mode only
  bool frozen_ = false;
  std::size_t samples_seen_ = 0;
  // Accumulated while not frozen; exact mode stores count 1 with sums
  // equal to the precomputed means.
  std::vector<double> feature_sums_;
  double instruction_sum_ = 0.0;
  std::size_t accumulated_ = 0;
};

/// Sequential-sum group means over a record range; the same accumulation
/// order a window fed with the records would use.
GroupSummary summarize_group(const std::vector<const ImplementationRecord*>& records,
                             const CacheTopology& topology);

std::map<GroupKey, GroupSummary> summarize_groups(const Dataset& dataset);

/// [raw block | group-normalized block | inst_count_group_rel].
FeatureVector assemble_feature_vector(const StatVector& stats, const GroupSummary& summary,
                                      const FeatureSchema& schema);
FeatureVector assemble_feature_vector(const StatVector& stats, const WindowState& window,
                                      const FeatureSchema& schema);

/// Training target: reference runtime normalized to the group mean.
double target_score(const ImplementationRecord& record, const GroupSummary& summary);

/// Feature matrix plus targets for a whole dataset, rows in record order.
struct TrainingSet {
  FeatureSchema schema;
  Eigen::MatrixXd features;  // n x schema.size()
  Eigen::VectorXd targets;
  std::vector<GroupKey> row_groups;
  std::vector<std::size_t> record_indices;
};

TrainingSet build_training_set(const Dataset& dataset);
TrainingSet build_training_set(const Dataset& dataset, const std::vector<std::size_t>& rows,
                               const std::map<GroupKey, GroupSummary>& summaries);

void write_feature_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                       const Eigen::MatrixXd& features);

}  // namespace simscore
