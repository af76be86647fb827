// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/stats_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace simscore {

namespace {

constexpr const char* kBeginDelim = "---------- Begin Simulation Statistics ----------";
constexpr const char* kEndDelim = "---------- End Simulation Statistics ----------";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_value(std::string_view token, double* out) {
  if (token == "nan") {
    *out = std::nan("");
    return true;
  }
  if (token == "inf") {
    *out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (token == "-inf") {
    *out = -std::numeric_limits<double>::infinity();
    return true;
  }
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

const StatEntry* RawStatsDump::find(const std::string& name) const {
  for (const auto& entry : entries)
    if (entry.name == name) return &entry;
  return nullptr;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  // Iterative `*` matcher with backtracking to the last star.
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<RawStatsDump> parse_stats_text(const std::string& text, WarningLog* warnings) {
  std::vector<RawStatsDump> dumps;
  std::istringstream in(text);
  std::string line;
  bool inside = false;
  RawStatsDump current;
  std::set<std::string> names;

  auto close_section = [&]() {
    current.snapshot_index = dumps.size();
    dumps.push_back(std::move(current));
    current = RawStatsDump{};
    names.clear();
    inside = false;
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv = trim(line);
    if (sv == kBeginDelim) {
      if (inside) close_section();  // unterminated previous section
      inside = true;
      continue;
    }
    if (sv == kEndDelim) {
      if (inside) close_section();
      continue;
    }
    if (!inside || sv.empty()) continue;

    // name <ws> value [<ws> # <ws> description]
    StatEntry entry;
    std::size_t name_end = sv.find_first_of(" \t");
    if (name_end == std::string_view::npos) {
      if (warnings) warnings->add("skipped stats line: " + std::string(sv));
      continue;
    }
    entry.name = std::string(sv.substr(0, name_end));
    std::string_view rest = trim(sv.substr(name_end));
    std::size_t value_end = rest.find_first_of(" \t");
    std::string_view value_tok = rest.substr(0, value_end);
    double value = 0.0;
    if (!parse_value(value_tok, &value)) {
      if (warnings) warnings->add("skipped stats line: " + std::string(sv));
      continue;
    }
    if (warnings && !std::isfinite(value))
      warnings->add("non-finite value for " + entry.name);
    entry.value = value;
    if (value_end != std::string_view::npos) {
      std::string_view tail = trim(rest.substr(value_end));
      if (!tail.empty() && tail.front() == '#')
        entry.description = std::string(trim(tail.substr(1)));
    }
    if (!names.insert(entry.name).second) {
      if (warnings) warnings->add("duplicate stat name: " + entry.name);
      continue;
    }
    current.entries.push_back(std::move(entry));
  }
  if (inside) close_section();

  if (dumps.empty()) throw DataError("no statistics section");
  return dumps;
}

std::string serialize_stats_dump(const RawStatsDump& dump) {
  std::ostringstream out;
  out << kBeginDelim << '\n';
  out.precision(17);
  for (const auto& entry : dump.entries) {
    out << entry.name << ' ' << entry.value;
    if (entry.description) out << " # " << *entry.description;
    out << '\n';
  }
  out << kEndDelim << '\n';
  return out.str();
}

StatsMapping StatsMapping::from_json_text(const std::string& text) {
  StatsMapping mapping;
  const nlohmann::json j = nlohmann::json::parse(text);
  for (const auto& [role, pattern] : j.items())
    mapping.role_to_pattern[role] = pattern.get<std::string>();
  return mapping;
}

StatsMapping StatsMapping::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open mapping: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<std::string> required_roles(const CacheTopology& topology) {
  std::vector<std::string> roles = {"total_instructions", "loads", "stores", "branches"};
  for (const auto& level : topology.levels)
    for (const char* rw : {"read", "write"})
      for (const char* kind : {"accesses", "hits", "misses", "replacements"})
        roles.push_back(level.name + "." + rw + "_" + kind);
  return roles;
}

void StatsMapping::require_roles_for(const CacheTopology& topology) const {
  for (const auto& role : required_roles(topology))
    if (!role_to_pattern.count(role))
      throw DataError("stats mapping is missing role: " + role);
}

namespace {

double resolve_role(const RawStatsDump& dump, const std::string& role,
                    const std::string& pattern, WarningLog* warnings) {
  if (pattern.find('*') == std::string::npos) {
    if (const StatEntry* entry = dump.find(pattern)) return entry->value;
    if (warnings) warnings->add("no match for role " + role + " (" + pattern + "), using 0");
    return 0.0;
  }
  double sum = 0.0;
  std::size_t matches = 0;
  for (const auto& entry : dump.entries) {
    if (glob_match(pattern, entry.name)) {
      sum += entry.value;
      ++matches;
    }
  }
  if (matches == 0 && warnings)
    warnings->add("no match for role " + role + " (" + pattern + "), using 0");
  return sum;
}

std::uint64_t as_counter(double value) {
  if (!std::isfinite(value) || value < 0) return 0;
  return static_cast<std::uint64_t>(std::llround(value));
}

}  // namespace

StatVector extract_stat_vector(const RawStatsDump& dump, const StatsMapping& mapping,
                               const CacheTopology& topology, WarningLog* warnings) {
  mapping.require_roles_for(topology);
  auto get = [&](const std::string& role) {
    return resolve_role(dump, role, mapping.role_to_pattern.at(role), warnings);
  };

  StatVector stats;
  stats.total_instructions = as_counter(get("total_instructions"));
  if (stats.total_instructions == 0) throw DataError("empty execution");
  stats.loads = as_counter(get("loads"));
  stats.stores = as_counter(get("stores"));
  stats.branches = as_counter(get("branches"));

  for (const auto& level : topology.levels) {
    CacheCounterSet c;
    c.read_accesses = as_counter(get(level.name + ".read_accesses"));
    c.read_hits = as_counter(get(level.name + ".read_hits"));
    c.read_misses = as_counter(get(level.name + ".read_misses"));
    c.read_replacements = as_counter(get(level.name + ".read_replacements"));
    c.write_accesses = as_counter(get(level.name + ".write_accesses"));
    c.write_hits = as_counter(get(level.name + ".write_hits"));
    c.write_misses = as_counter(get(level.name + ".write_misses"));
    c.write_replacements = as_counter(get(level.name + ".write_replacements"));
    c.check_consistency(level.name, warnings);
    stats.per_cache[level.name] = c;
  }
  return stats;
}

namespace {

std::string cache_path(const std::string& level_name) {
  if (level_name == "L1D") return "system.cpu.dcache";
  if (level_name == "L1I") return "system.cpu.icache";
  std::string lower;
  for (char c : level_name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return "system." + lower + "cache";
}

}  // namespace

StatsMapping default_gem5_mapping(const CacheTopology& topology) {
  StatsMapping mapping;
  mapping.role_to_pattern["total_instructions"] = "simInsts";
  mapping.role_to_pattern["loads"] = "system.cpu.commitStats0.numLoadInsts";
  mapping.role_to_pattern["stores"] = "system.cpu.commitStats0.numStoreInsts";
  mapping.role_to_pattern["branches"] = "system.cpu.commitStats0.numBranches";
  for (const auto& level : topology.levels) {
    const std::string path = cache_path(level.name);
    mapping.role_to_pattern[level.name + ".read_accesses"] = path + ".ReadReq.accesses::total";
    mapping.role_to_pattern[level.name + ".read_hits"] = path + ".ReadReq.hits::total";
    mapping.role_to_pattern[level.name + ".read_misses"] = path + ".ReadReq.misses::total";
    mapping.role_to_pattern[level.name + ".read_replacements"] =
        path + ".ReadReq.replacements::total";
    mapping.role_to_pattern[level.name + ".write_accesses"] = path + ".WriteReq.accesses::total";
    mapping.role_to_pattern[level.name + ".write_hits"] = path + ".WriteReq.hits::total";
    mapping.role_to_pattern[level.name + ".write_misses"] = path + ".WriteReq.misses::total";
    mapping.role_to_pattern[level.name + ".write_replacements"] =
        path + ".WriteReq.replacements::total";
  }
  return mapping;
}

}  // namespace simscore
