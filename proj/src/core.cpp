// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/core.hpp"

#include <algorithm>
#include <set>

namespace simscore {

void CacheTopology::validate() const {
  if (levels.empty()) throw DataError("topology has no cache levels");
  if (line_size_bytes == 0) throw DataError("line size must be positive");
  std::set<std::string> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level.name).second)
      throw DataError("duplicate cache level name: " + level.name);
    if (level.size_bytes == 0 || level.sets == 0 || level.associativity == 0)
      throw DataError("cache level " + level.name + " has zero-valued geometry");
    const std::uint64_t expect =
        static_cast<std::uint64_t>(level.sets) * level.associativity * line_size_bytes;
    if (level.size_bytes != expect)
      throw DataError("cache level " + level.name +
                      ": size_bytes != sets * associativity * line_size");
  }
}

void CacheCounterSet::check_consistency(const std::string& cache_name,
                                        WarningLog* warnings) const {
  if (!warnings) return;
  if (read_hits + read_misses != read_accesses)
    warnings->add(cache_name + ": read hits + misses != accesses");
  if (write_hits + write_misses != write_accesses)
    warnings->add(cache_name + ": write hits + misses != accesses");
}

double median(std::vector<double> samples) {
  if (samples.empty()) throw DataError("no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n % 2 == 1) return samples[n / 2];
  return 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

FeatureSchema make_feature_schema(const CacheTopology& topology) {
  topology.validate();
  FeatureSchema schema;
  schema.topology = topology;

  std::vector<std::string> raw;
  raw.emplace_back("load_frac");
  raw.emplace_back("store_frac");
  raw.emplace_back("branch_frac");
  for (const auto& level : topology.levels) {
    raw.push_back(level.name + ".rd_hit_ratio");
    raw.push_back(level.name + ".rd_miss_ratio");
    raw.push_back(level.name + ".rd_repl_ratio");
    raw.push_back(level.name + ".wr_hit_ratio");
    raw.push_back(level.name + ".wr_miss_ratio");
    raw.push_back(level.name + ".wr_repl_ratio");
  }

  schema.names = raw;
  for (const auto& name : raw) schema.names.push_back(name + "_norm");
  schema.names.emplace_back("inst_count_group_rel");
  return schema;
}

std::uint64_t schema_fingerprint(const FeatureSchema& schema) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& name : schema.names) {
    for (char c : name) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

}  // namespace simscore
