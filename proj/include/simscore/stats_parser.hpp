// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simscore/core.hpp"

namespace simscore {

/// One `name value [# description]` entry of a gem5 stats dump.
struct StatEntry {
  std::string name;
  double value = 0.0;
  std::optional<std::string> description;
};

/// One delimiter-bounded statistics section of a stats.txt file.
struct RawStatsDump {
  std::vector<StatEntry> entries;
  std::size_t snapshot_index = 0;

  const StatEntry* find(const std::string& name) const;
};

/// Maps semantic counter roles ("loads", "L1D.write_hits", ...) to gem5
/// statistic names; a pattern may contain `*` wildcards, and a wildcard
/// matching several entries sums them.
struct StatsMapping {
  std::map<std::string, std::string> role_to_pattern;

  static StatsMapping from_json_text(const std::string& text);
  static StatsMapping from_file(const std::filesystem::path& path);

  // Roles required for a topology: loads, stores, branches,
  // total_instructions, and <level>.{read,write}_{accesses,hits,misses,
  // replacements} per cache level.
  void require_roles_for(const CacheTopology& topology) const;
};

std::vector<std::string> required_roles(const CacheTopology& topology);

/// Splits gem5 stats text on the Begin/End delimiter lines and parses each
/// section. Unparseable lines inside a section are skipped with a warning.
/// Throws DataError("no statistics section") when no section is found.
std::vector<RawStatsDump> parse_stats_text(const std::string& text,
                                           WarningLog* warnings = nullptr);

/// Serializes a dump back to the stats.txt grammar (one section).
std::string serialize_stats_dump(const RawStatsDump& dump);

/// Resolves every role for the topology against the dump. Missing roles
/// map to 0 with a warning; total_instructions of 0 is an error.
StatVector extract_stat_vector(const RawStatsDump& dump, const StatsMapping& mapping,
                               const CacheTopology& topology,
                               WarningLog* warnings = nullptr);

/// Default mapping for gem5 syscall-emulation dumps with classic caches;
/// cache level names are substituted into the patterns below.
StatsMapping default_gem5_mapping(const CacheTopology& topology);

bool glob_match(const std::string& pattern, const std::string& text);

}  // namespace simscore
