// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "simscore/core.hpp"

namespace simscore {

/// A full dataset: one topology, the group table, and all records.
struct Dataset {
  CacheTopology topology;
  std::vector<KernelGroup> groups;
  std::vector<ImplementationRecord> records;

  const KernelGroup* find_group(const GroupKey& key) const;
  std::vector<GroupKey> group_keys() const;
};

// JSON-Lines interchange: line 1 is a header object carrying the topology
// and group table; every following line is one ImplementationRecord.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

std::string dataset_header_json(const Dataset& dataset);
std::string record_json(const ImplementationRecord& record);

CacheTopology load_topology(const std::filesystem::path& path);

nlohmann::json topology_to_json(const CacheTopology& topology);
CacheTopology topology_from_json(const nlohmann::json& j);

/// Writes via a temp file in the same directory, then renames.
void atomic_write(const std::filesystem::path& path, const std::string& content);

inline constexpr const char* kDatasetFormatVersion = "1";
inline constexpr const char* kModelFormatVersion = "1";

}  // namespace simscore
