// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace simscore {

/// Error raised for malformed or inconsistent input data. The CLI maps this
/// to a distinct exit code from plain usage errors.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collects non-fatal issues (inconsistent counters, skipped lines).
struct WarningLog {
  std::vector<std::string> items;
  void add(std::string msg) { items.push_back(std::move(msg)); }
  std::size_t count() const { return items.size(); }
};

struct CacheLevelSpec {
  std::string name;  // "L1D", "L1I", "L2", "L3"
  std::uint64_t size_bytes = 0;
  std::uint32_t sets = 0;
  std::uint32_t associativity = 0;
};

struct CacheTopology {
  std::string architecture;  // "x86", "arm", "riscv"
  std::uint32_t line_size_bytes = 64;
  std::vector<CacheLevelSpec> levels;

  // Checks size = sets * assoc * line_size per level, unique names,
  // at least one level. Throws DataError on violation.
  void validate() const;
};

struct GroupKey {
  std::string kernel_type;
  std::uint32_t group_id = 0;
  auto operator<=>(const GroupKey&) const = default;
};

struct KernelGroup {
  std::string kernel_type;  // e.g. "conv2d_bias_relu"
  std::uint32_t group_id = 0;
  // Parameter values are scalars or pairs, e.g. stride=(2,2).
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> params;

  GroupKey key() const { return {kernel_type, group_id}; }
};

struct CacheCounterSet {
  std::uint64_t read_accesses = 0;
  std::uint64_t read_hits = 0;
  std::uint64_t read_misses = 0;
  std::uint64_t read_replacements = 0;
  std::uint64_t write_accesses = 0;
  std::uint64_t write_hits = 0;
  std::uint64_t write_misses = 0;
  std::uint64_t write_replacements = 0;

  // hits + misses should equal accesses; mismatches are reported as
  // warnings (gem5 may count prefetches asymmetrically), never errors.
  void check_consistency(const std::string& cache_name, WarningLog* warnings) const;
};

struct StatVector {
  std::uint64_t total_instructions = 0;
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t branches = 0;
  std::map<std::string, CacheCounterSet> per_cache;
};

struct ImplementationRecord {
  GroupKey group;
  std::uint32_t impl_id = 0;
  StatVector stats;
  std::vector<double> runtime_samples;  // seconds
  double reference_runtime = 0.0;       // median of runtime_samples
};

struct FeatureSchema {
  CacheTopology topology;
  std::vector<std::string> names;

  std::size_t size() const { return names.size(); }
  // Length of the raw ratio block: 3 + 6 * levels.
  std::size_t raw_block_size() const { return 3 + 6 * topology.levels.size(); }
};

struct FeatureVector {
  std::vector<double> values;
};

struct GroupSummary {
  GroupKey key;
  std::vector<double> raw_feature_means;  // over the raw block only
  double mean_total_instructions = 0.0;
  double mean_reference_runtime = 0.0;
  std::size_t sample_count = 0;
};

/// Median of a non-empty sample list. Even length takes the arithmetic
/// mean of the two central values. Throws DataError on an empty list.
double median(std::vector<double> samples);

/// Deterministic feature schema for a topology:
/// [load_frac, store_frac, branch_frac,
///  per level: rd_hit_ratio, rd_miss_ratio, rd_repl_ratio,
///             wr_hit_ratio, wr_miss_ratio, wr_repl_ratio]
/// followed by the group-normalized copy (suffix "_norm") of that block,
/// then inst_count_group_rel. Total length 2*(3 + 6*levels) + 1.
FeatureSchema make_feature_schema(const CacheTopology& topology);

/// FNV-1a hash over the ordered feature names; used to refuse loading a
/// model against a mismatched schema.
std::uint64_t schema_fingerprint(const FeatureSchema& schema);

}  // namespace simscore
