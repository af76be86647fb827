// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "simscore/features.hpp"
#include "simscore/stats_parser.hpp"

namespace simscore {

using nlohmann::json;

std::string ImplParams::to_json() const {
  json j = json::object();
  for (const auto& [name, value] : values) j[name] = value;
  return j.dump();
}

ImplParams ImplParams::from_json(const std::string& text) {
  ImplParams params;
  const json j = json::parse(text);
  for (const auto& [name, value] : j.items())
    params.values[name] = value.get<std::int64_t>();
  return params;
}

void SyntheticSpec::validate() const {
  topology.validate();
  if (groups.empty()) throw DataError("synthetic spec has no groups");
  if (param_space.empty()) throw DataError("synthetic spec has no parameters");
  for (const auto& range : param_space)
    if (range.lower > range.upper)
      throw DataError("bad parameter range for " + range.name);
  const std::size_t raw_len = 3 + 6 * topology.levels.size();
  if (coefficients.size() != raw_len)
    throw DataError("coefficient vector must match the raw feature block");
  if (!(base_cost > 0.0)) throw DataError("base cost must be positive");
  if (sigma < 0.0) throw DataError("sigma must be non-negative");
  if (n_exe == 0) throw DataError("n_exe must be positive");
}

SyntheticSpec SyntheticSpec::example(std::uint64_t seed, double sigma,
                                     std::size_t group_count) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.sigma = sigma;

  spec.topology.architecture = "x86";
  spec.topology.line_size_bytes = 64;
  spec.topology.levels = {{"L1D", 32768, 64, 8},
                          {"L1I", 32768, 64, 8},
                          {"L2", 2097152, 2048, 16}};

  for (std::size_t g = 0; g < group_count; ++g) {
    SyntheticGroupSpec group_spec;
    group_spec.group.kernel_type = "conv2d_bias_relu";
    group_spec.group.group_id = static_cast<std::uint32_t>(g);
    group_spec.group.params = {{"N", {1}},
                               {"H", {static_cast<std::int64_t>(224 >> g)}},
                               {"W", {static_cast<std::int64_t>(224 >> g)}},
                               {"CO", {static_cast<std::int64_t>(64 << std::min<std::size_t>(g, 3))}},
                               {"CI", {static_cast<std::int64_t>(g == 0 ? 3 : 32 << g)}},
                               {"KH", {g == 0 ? 7 : 3}},
                               {"KW", {g == 0 ? 7 : 3}},
                               {"stride", {g == 1 ? 1 : 2, g == 1 ? 1 : 2}},
                               {"pad", {g == 0 ? 3 : 1, g == 0 ? 3 : 1}}};
    group_spec.optimum_shift = 0.30 + 0.05 * static_cast<double>(g);
    group_spec.instruction_scale = 1.0 + 0.35 * static_cast<double>(g);
    spec.groups.push_back(std::move(group_spec));
  }

  spec.param_space = {{"tile", 1, 64}, {"unroll", 1, 16}, {"vectorize", 1, 8},
                      {"loop_order", 1, 8}};

  // Raw feature order: load/store/branch fractions, then per level six
  // ratios (rd hit/miss/repl, wr hit/miss/repl).
  spec.coefficients.assign(3 + 6 * spec.topology.levels.size(), 0.0);
  spec.coefficients[0] = 0.0040;  // load_frac
  spec.coefficients[1] = 0.0020;  // store_frac
  spec.coefficients[2] = 0.0030;  // branch_frac
  spec.coefficients[3 + 1] = 0.0120;  // L1D.rd_miss_ratio
  spec.coefficients[3 + 2] = 0.0020;  // L1D.rd_repl_ratio
  spec.coefficients[3 + 4] = 0.0080;  // L1D.wr_miss_ratio
  spec.coefficients[3 + 5] = 0.0015;  // L1D.wr_repl_ratio
  spec.coefficients[3 + 6 + 1] = 0.0010;  // L1I.rd_miss_ratio
  spec.coefficients[3 + 12 + 1] = 0.0150;  // L2.rd_miss_ratio
  spec.coefficients[3 + 12 + 4] = 0.0080;  // L2.wr_miss_ratio
  spec.quadratic_l1d_miss = 0.0600;
  spec.base_cost = 0.002;
  return spec;
}

namespace {

double knob01(const ImplParams& params, const SyntheticSpec& spec, const std::string& name) {
  for (const auto& range : spec.param_space) {
    if (range.name != name) continue;
    auto it = params.values.find(name);
    if (it == params.values.end()) throw DataError("missing knob: " + name);
    const std::int64_t value = std::clamp(it->second, range.lower, range.upper);
    // Power-of-two knobs live on a log scale.
    const double lo = std::log2(static_cast<double>(range.lower));
    const double hi = std::log2(static_cast<double>(range.upper));
    if (hi == lo) return 0.0;
    return (std::log2(static_cast<double>(value)) - lo) / (hi - lo);
  }
  throw DataError("unknown knob: " + name);
}

std::uint64_t fraction_of(std::uint64_t base, double fraction) {
  const double clamped = std::clamp(fraction, 0.0, 1.0);
  return static_cast<std::uint64_t>(std::llround(clamped * static_cast<double>(base)));
}

}  // namespace

StatVector synth_stats(const SyntheticSpec& spec, std::size_t group_index,
                       const ImplParams& params) {
  if (group_index >= spec.groups.size()) throw DataError("group index out of range");
  const SyntheticGroupSpec& g = spec.groups[group_index];

  const double u = knob01(params, spec, "tile");
  const double v = knob01(params, spec, "unroll");
  const double w = knob01(params, spec, "vectorize");
  const double o = knob01(params, spec, "loop_order");
  const double miss_drive = (u - g.optimum_shift) * (u - g.optimum_shift);

  StatVector stats;
  stats.total_instructions = static_cast<std::uint64_t>(std::llround(
      g.instruction_scale * 1.0e7 * (1.15 - 0.25 * w - 0.10 * v + 0.05 * o)));
  stats.loads = fraction_of(stats.total_instructions, 0.30 - 0.06 * w + 0.03 * o);
  stats.stores = fraction_of(stats.total_instructions, 0.12 - 0.02 * w + 0.01 * v);
  stats.branches = fraction_of(stats.total_instructions, 0.09 - 0.04 * v + 0.02 * u);

  CacheCounterSet l1d;
  l1d.read_accesses = stats.loads;
  l1d.read_misses = fraction_of(l1d.read_accesses, 0.04 + 0.80 * miss_drive + 0.04 * o * (1.0 - w));
  l1d.read_hits = l1d.read_accesses - l1d.read_misses;
  l1d.read_replacements = fraction_of(l1d.read_misses, 0.90);
  l1d.write_accesses = stats.stores;
  l1d.write_misses = fraction_of(l1d.write_accesses, 0.04 + 0.30 * miss_drive + 0.03 * (1.0 - v) * o);
  l1d.write_hits = l1d.write_accesses - l1d.write_misses;
  l1d.write_replacements = fraction_of(l1d.write_misses, 0.85);

  CacheCounterSet l1i;
  l1i.read_accesses = fraction_of(stats.total_instructions, 0.95);
  l1i.read_misses = fraction_of(l1i.read_accesses, 0.005 + 0.010 * v);
  l1i.read_hits = l1i.read_accesses - l1i.read_misses;
  l1i.read_replacements = fraction_of(l1i.read_misses, 0.95);

  CacheCounterSet l2;
  l2.read_accesses = l1d.read_misses + l1i.read_misses;
  l2.read_misses = fraction_of(l2.read_accesses, 0.08 + 0.50 * miss_drive + 0.05 * o);
  l2.read_hits = l2.read_accesses - l2.read_misses;
  l2.read_replacements = fraction_of(l2.read_misses, 0.90);
  l2.write_accesses = l1d.write_misses;
  l2.write_misses = fraction_of(l2.write_accesses, 0.06 + 0.35 * miss_drive);
  l2.write_hits = l2.write_accesses - l2.write_misses;
  l2.write_replacements = fraction_of(l2.write_misses, 0.90);

  stats.per_cache["L1D"] = l1d;
  stats.per_cache["L1I"] = l1i;
  stats.per_cache["L2"] = l2;
  return stats;
}

double true_cost(const SyntheticSpec& spec, const StatVector& stats) {
  const std::vector<double> features = raw_features(stats, spec.topology);
  if (features.size() != spec.coefficients.size())
    throw DataError("coefficient vector does not match topology");
  double cost = spec.base_cost;
  for (std::size_t i = 0; i < features.size(); ++i)
    cost += spec.coefficients[i] * features[i];
  const double l1d_rd_miss = features[3 + 1];
  cost += spec.quadratic_l1d_miss * l1d_rd_miss * l1d_rd_miss;
  if (!(cost > 0.0)) throw DataError("synthetic cost model produced a non-positive runtime");
  return cost;
}

ImplParams random_params(const SyntheticSpec& spec, std::mt19937_64& rng) {
  ImplParams params;
  for (const auto& range : spec.param_space) {
    std::uniform_int_distribution<std::int64_t> dist(range.lower, range.upper);
    params.values[range.name] = dist(rng);
  }
  return params;
}

ImplParams mutate_params(const SyntheticSpec& spec, const ImplParams& params,
                         std::mt19937_64& rng) {
  ImplParams out = params;
  std::uniform_int_distribution<std::size_t> pick(0, spec.param_space.size() - 1);
  const ParamRange& range = spec.param_space[pick(rng)];
  std::uniform_int_distribution<int> direction(0, 1);
  const std::int64_t step = direction(rng) == 0 ? -1 : 1;
  auto& value = out.values[range.name];
  value = std::clamp(value + step, range.lower, range.upper);
  return out;
}

ImplementationRecord synth_record(const SyntheticSpec& spec, std::size_t group_index,
                                  std::uint32_t impl_id, const ImplParams& params,
                                  std::mt19937_64& noise_rng) {
  ImplementationRecord record;
  record.group = spec.groups[group_index].group.key();
  record.impl_id = impl_id;
  record.stats = synth_stats(spec, group_index, params);

  const double cost = true_cost(spec, record.stats);
  std::normal_distribution<double> normal(0.0, 1.0);
  record.runtime_samples.reserve(spec.n_exe);
  for (std::size_t i = 0; i < spec.n_exe; ++i) {
    const double factor = spec.sigma == 0.0 ? 1.0 : std::exp(spec.sigma * normal(noise_rng));
    record.runtime_samples.push_back(cost * factor);
  }
  record.reference_runtime = median(record.runtime_samples);
  return record;
}

Dataset synthesize_dataset(const SyntheticSpec& spec, std::size_t impls_per_group) {
  spec.validate();
  Dataset dataset;
  dataset.topology = spec.topology;
  for (const auto& group_spec : spec.groups) dataset.groups.push_back(group_spec.group);

  std::mt19937_64 rng(spec.seed);
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    for (std::size_t i = 0; i < impls_per_group; ++i) {
      const ImplParams params = random_params(spec, rng);
      dataset.records.push_back(
          synth_record(spec, g, static_cast<std::uint32_t>(i), params, rng));
    }
  }
  return dataset;
}

std::string mock_stats_text(const SyntheticSpec& spec, std::size_t group_index,
                            const ImplParams& params) {
  const StatVector stats = synth_stats(spec, group_index, params);
  const StatsMapping mapping = default_gem5_mapping(spec.topology);
  auto name_of = [&](const std::string& role) { return mapping.role_to_pattern.at(role); };

  RawStatsDump dump;
  auto put = [&](const std::string& name, std::uint64_t value, const char* desc) {
    dump.entries.push_back({name, static_cast<double>(value), std::string(desc)});
  };
  put(name_of("total_instructions"), stats.total_instructions, "Number of instructions simulated");
  put(name_of("loads"), stats.loads, "Number of load instructions");
  put(name_of("stores"), stats.stores, "Number of store instructions");
  put(name_of("branches"), stats.branches, "Number of branches");
  for (const auto& level : spec.topology.levels) {
    const CacheCounterSet& c = stats.per_cache.at(level.name);
    put(name_of(level.name + ".read_accesses"), c.read_accesses, "number of accesses");
    put(name_of(level.name + ".read_hits"), c.read_hits, "number of hits");
    put(name_of(level.name + ".read_misses"), c.read_misses, "number of misses");
    put(name_of(level.name + ".read_replacements"), c.read_replacements, "number of replacements");
    put(name_of(level.name + ".write_accesses"), c.write_accesses, "number of accesses");
    put(name_of(level.name + ".write_hits"), c.write_hits, "number of hits");
    put(name_of(level.name + ".write_misses"), c.write_misses, "number of misses");
    put(name_of(level.name + ".write_replacements"), c.write_replacements,
        "number of replacements");
  }
  return serialize_stats_dump(dump);
}

std::size_t group_index_of(const SyntheticSpec& spec, const GroupKey& key) {
  for (std::size_t g = 0; g < spec.groups.size(); ++g)
    if (spec.groups[g].group.key() == key) return g;
  throw DataError("unknown group: " + key.kernel_type + "/" + std::to_string(key.group_id));
}

namespace {

json range_to_json(const ParamRange& r) {
  return {{"name", r.name}, {"lower", r.lower}, {"upper", r.upper}};
}

}  // namespace

std::string SyntheticSpec::to_json() const {
  json jgroups = json::array();
  for (const auto& g : groups) {
    json params = json::object();
    for (const auto& [name, values] : g.group.params)
      params[name] = values.size() == 1 ? json(values[0]) : json(values);
    jgroups.push_back({{"kernel_type", g.group.kernel_type},
                       {"group_id", g.group.group_id},
                       {"params", params},
                       {"optimum_shift", g.optimum_shift},
                       {"instruction_scale", g.instruction_scale}});
  }
  json jspace = json::array();
  for (const auto& r : param_space) jspace.push_back(range_to_json(r));
  json j = {{"seed", seed},
            {"topology", topology_to_json(topology)},
            {"groups", jgroups},
            {"param_space", jspace},
            {"coefficients", coefficients},
            {"quadratic_l1d_miss", quadratic_l1d_miss},
            {"base_cost", base_cost},
            {"sigma", sigma},
            {"n_exe", n_exe}};
  return j.dump(2);
}

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
  const json j = json::parse(text);
  SyntheticSpec spec = SyntheticSpec::example(0, 0.02);
  spec.seed = j.value("seed", 0ull);
  if (j.contains("topology")) spec.topology = topology_from_json(j.at("topology"));
  if (j.contains("groups")) {
    spec.groups.clear();
    for (const auto& jg : j.at("groups")) {
      SyntheticGroupSpec g;
      g.group.kernel_type = jg.at("kernel_type").get<std::string>();
      g.group.group_id = jg.at("group_id").get<std::uint32_t>();
      const json params = jg.value("params", json::object());
      for (const auto& [name, value] : params.items()) {
        std::vector<std::int64_t> values;
        if (value.is_array())
          values = value.get<std::vector<std::int64_t>>();
        else
          values.push_back(value.get<std::int64_t>());
        g.group.params.emplace_back(name, std::move(values));
      }
      g.optimum_shift = jg.value("optimum_shift", 0.3);
      g.instruction_scale = jg.value("instruction_scale", 1.0);
      spec.groups.push_back(std::move(g));
    }
  }
  if (j.contains("param_space")) {
    spec.param_space.clear();
    for (const auto& jr : j.at("param_space"))
      spec.param_space.push_back({jr.at("name").get<std::string>(),
                                  jr.at("lower").get<std::int64_t>(),
                                  jr.at("upper").get<std::int64_t>()});
  }
  if (j.contains("coefficients"))
    spec.coefficients = j.at("coefficients").get<std::vector<double>>();
  spec.quadratic_l1d_miss = j.value("quadratic_l1d_miss", spec.quadratic_l1d_miss);
  spec.base_cost = j.value("base_cost", spec.base_cost);
  spec.sigma = j.value("sigma", spec.sigma);
  spec.n_exe = j.value("n_exe", spec.n_exe);
  spec.validate();
  return spec;
}

}  // namespace simscore
