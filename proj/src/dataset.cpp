// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace simscore {

using nlohmann::json;

json topology_to_json(const CacheTopology& topology) {
  json levels = json::array();
  for (const auto& level : topology.levels) {
    levels.push_back({{"name", level.name},
                      {"size_bytes", level.size_bytes},
                      {"sets", level.sets},
                      {"associativity", level.associativity}});
  }
  return {{"architecture", topology.architecture},
          {"line_size_bytes", topology.line_size_bytes},
          {"levels", levels}};
}

CacheTopology topology_from_json(const json& j) {
  CacheTopology topology;
  topology.architecture = j.at("architecture").get<std::string>();
  topology.line_size_bytes = j.value("line_size_bytes", 64u);
  for (const auto& jl : j.at("levels")) {
    CacheLevelSpec level;
    level.name = jl.at("name").get<std::string>();
    level.size_bytes = jl.at("size_bytes").get<std::uint64_t>();
    level.sets = jl.at("sets").get<std::uint32_t>();
    level.associativity = jl.at("associativity").get<std::uint32_t>();
    topology.levels.push_back(std::move(level));
  }
  topology.validate();
  return topology;
}

namespace {

json group_to_json(const KernelGroup& group) {
  json params = json::object();
  for (const auto& [name, values] : group.params) {
    if (values.size() == 1)
      params[name] = values[0];
    else
      params[name] = values;
  }
  return {{"kernel_type", group.kernel_type},
          {"group_id", group.group_id},
          {"params", params}};
}

KernelGroup group_from_json(const json& j) {
  KernelGroup group;
  group.kernel_type = j.at("kernel_type").get<std::string>();
  group.group_id = j.at("group_id").get<std::uint32_t>();
  const json params = j.value("params", json::object());
  for (const auto& [name, value] : params.items()) {
    std::vector<std::int64_t> values;
    if (value.is_array())
      values = value.get<std::vector<std::int64_t>>();
    else
      values.push_back(value.get<std::int64_t>());
    group.params.emplace_back(name, std::move(values));
  }
  return group;
}

json counters_to_json(const CacheCounterSet& c) {
  return {{"read_accesses", c.read_accesses},
          {"read_hits", c.read_hits},
          {"read_misses", c.read_misses},
          {"read_replacements", c.read_replacements},
          {"write_accesses", c.write_accesses},
          {"write_hits", c.write_hits},
          {"write_misses", c.write_misses},
          {"write_replacements", c.write_replacements}};
}

CacheCounterSet counters_from_json(const json& j) {
  CacheCounterSet c;
  c.read_accesses = j.value("read_accesses", 0ull);
  c.read_hits = j.value("read_hits", 0ull);
  c.read_misses = j.value("read_misses", 0ull);
  c.read_replacements = j.value("read_replacements", 0ull);
  c.write_accesses = j.value("write_accesses", 0ull);
  c.write_hits = j.value("write_hits", 0ull);
  c.write_misses = j.value("write_misses", 0ull);
  c.write_replacements = j.value("write_replacements", 0ull);
  return c;
}

json stats_to_json(const StatVector& stats) {
  json per_cache = json::object();
  for (const auto& [name, counters] : stats.per_cache)
    per_cache[name] = counters_to_json(counters);
  return {{"total_instructions", stats.total_instructions},
          {"loads", stats.loads},
          {"stores", stats.stores},
          {"branches", stats.branches},
          {"per_cache", per_cache}};
}

StatVector stats_from_json(const json& j) {
  StatVector stats;
  stats.total_instructions = j.at("total_instructions").get<std::uint64_t>();
  stats.loads = j.value("loads", 0ull);
  stats.stores = j.value("stores", 0ull);
  stats.branches = j.value("branches", 0ull);
  const json per_cache = j.value("per_cache", json::object());
  for (const auto& [name, value] : per_cache.items())
    stats.per_cache[name] = counters_from_json(value);
  return stats;
}

}  // namespace

const KernelGroup* Dataset::find_group(const GroupKey& key) const {
  for (const auto& group : groups)
    if (group.key() == key) return &group;
  return nullptr;
}

std::vector<GroupKey> Dataset::group_keys() const {
  std::vector<GroupKey> keys;
  keys.reserve(groups.size());
  for (const auto& group : groups) keys.push_back(group.key());
  return keys;
}

std::string dataset_header_json(const Dataset& dataset) {
  json groups = json::array();
  for (const auto& group : dataset.groups) groups.push_back(group_to_json(group));
  json header = {{"format_version", kDatasetFormatVersion},
                 {"topology", topology_to_json(dataset.topology)},
                 {"groups", groups}};
  return header.dump();
}

std::string record_json(const ImplementationRecord& record) {
  json j = {{"kernel_type", record.group.kernel_type},
            {"group_id", record.group.group_id},
            {"impl_id", record.impl_id},
            {"stats", stats_to_json(record.stats)},
            {"runtime_samples", record.runtime_samples},
            {"reference_runtime", record.reference_runtime}};
  return j.dump();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path.string());

  Dataset dataset;
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded())
    throw DataError("malformed dataset header in " + path.string());
  dataset.topology = topology_from_json(header.at("topology"));
  for (const auto& jg : header.at("groups"))
    dataset.groups.push_back(group_from_json(jg));

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw DataError("malformed record at line " + std::to_string(lineno) + " of " +
                      path.string());
    ImplementationRecord record;
    record.group.kernel_type = j.at("kernel_type").get<std::string>();
    record.group.group_id = j.at("group_id").get<std::uint32_t>();
    record.impl_id = j.at("impl_id").get<std::uint32_t>();
    record.stats = stats_from_json(j.at("stats"));
    record.runtime_samples = j.at("runtime_samples").get<std::vector<double>>();
    record.reference_runtime = j.at("reference_runtime").get<double>();
    if (!dataset.find_group(record.group))
      throw DataError("record at line " + std::to_string(lineno) +
                      " references unknown group");
    dataset.records.push_back(std::move(record));
  }
  return dataset;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream out;
  out << dataset_header_json(dataset) << '\n';
  for (const auto& record : dataset.records) out << record_json(record) << '\n';
  atomic_write(path, out.str());
}

CacheTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open topology: " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed topology file: " + path.string());
  return topology_from_json(j);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write: " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace simscore
