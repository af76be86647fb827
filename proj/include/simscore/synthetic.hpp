// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "simscore/core.hpp"
#include "simscore/dataset.hpp"

namespace simscore {

/// One candidate schedule's tuning knobs.
struct ImplParams {
  std::map<std::string, std::int64_t> values;

  std::string to_json() const;
  static ImplParams from_json(const std::string& text);
};

struct ParamRange {
  std::string name;
  std::int64_t lower = 1;
  std::int64_t upper = 1;  // inclusive
};

struct SyntheticGroupSpec {
  KernelGroup group;
  double optimum_shift = 0.3;  // preferred tiling position in [0, 1]
  double instruction_scale = 1.0;
};

/// Desk-scale stand-in for real hardware plus a simulator: a documented
/// closed-form cost model over the realized ratio features,
///   runtime = c0 + sum_i c_i * feature_i + c_quad * (L1D rd miss ratio)^2
/// with per-sample multiplicative lognormal(0, sigma) noise on measured
/// runtimes. Counters are a deterministic function of (group, knobs).
struct SyntheticSpec {
  std::uint64_t seed = 0;
  CacheTopology topology;
  std::vector<SyntheticGroupSpec> groups;
  std::vector<ParamRange> param_space;
  std::vector<double> coefficients;  // one per raw feature, see raw_features()
  double quadratic_l1d_miss = 0.06;
  double base_cost = 0.002;  // seconds
  double sigma = 0.02;
  std::size_t n_exe = 15;

  void validate() const;

  /// Default benchmark family: 3-level topology, 4 knobs
  /// (tile 1..64, unroll 1..16, vectorize 1..8, loop_order 1..8),
  /// `group_count` groups with shifted optima.
  static SyntheticSpec example(std::uint64_t seed, double sigma, std::size_t group_count = 5);

  std::string to_json() const;
  static SyntheticSpec from_json(const std::string& text);
};

/// Deterministic counters for one implementation; no randomness involved.
StatVector synth_stats(const SyntheticSpec& spec, std::size_t group_index,
                       const ImplParams& params);

/// Closed-form noise-free cost of a counter set.
double true_cost(const SyntheticSpec& spec, const StatVector& stats);

ImplParams random_params(const SyntheticSpec& spec, std::mt19937_64& rng);

/// Clamped single-step neighborhood mutation of one knob.
ImplParams mutate_params(const SyntheticSpec& spec, const ImplParams& params,
                         std::mt19937_64& rng);

ImplementationRecord synth_record(const SyntheticSpec& spec, std::size_t group_index,
                                  std::uint32_t impl_id, const ImplParams& params,
                                  std::mt19937_64& noise_rng);

/// Full reproducible dataset: `impls_per_group` random implementations per
/// group, each with n_exe noisy runtime samples.
Dataset synthesize_dataset(const SyntheticSpec& spec, std::size_t impls_per_group);

/// gem5-grammar stats text for one implementation, counter names matching
/// default_gem5_mapping(spec.topology).
std::string mock_stats_text(const SyntheticSpec& spec, std::size_t group_index,
                            const ImplParams& params);

std::size_t group_index_of(const SyntheticSpec& spec, const GroupKey& key);

}  // namespace simscore
