// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/features.hpp"

#include <fstream>
#include <sstream>

namespace simscore {

namespace {

inline double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::vector<double> raw_features(const StatVector& stats, const CacheTopology& topology) {
  if (stats.total_instructions == 0) throw DataError("empty execution");
  const double total = static_cast<double>(stats.total_instructions);

  std::vector<double> out;
  out.reserve(3 + 6 * topology.levels.size());
  out.push_back(static_cast<double>(stats.loads) / total);
  out.push_back(static_cast<double>(stats.stores) / total);
  out.push_back(static_cast<double>(stats.branches) / total);

  for (const auto& level : topology.levels) {
    CacheCounterSet c;
    if (auto it = stats.per_cache.find(level.name); it != stats.per_cache.end()) c = it->second;
    const double ra = static_cast<double>(c.read_accesses);
    const double wa = static_cast<double>(c.write_accesses);
    out.push_back(ratio(static_cast<double>(c.read_hits), ra));
    out.push_back(ratio(static_cast<double>(c.read_misses), ra));
    out.push_back(ratio(static_cast<double>(c.read_replacements), ra));
    out.push_back(ratio(static_cast<double>(c.write_hits), wa));
    out.push_back(ratio(static_cast<double>(c.write_misses), wa));
    out.push_back(ratio(static_cast<double>(c.write_replacements), wa));
  }
  return out;
}

std::vector<double> normalize_to_group(const std::vector<double>& raw,
                                       const std::vector<double>& means) {
  if (raw.size() != means.size()) throw DataError("feature/means length mismatch");
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = means[i] == 0.0 ? 0.0 : (raw[i] - means[i]) / means[i];
  return out;
}

WindowState WindowState::exact(const GroupSummary& summary) {
  WindowState w;
  w.mode_ = WindowMode::kExact;
  w.frozen_ = true;
  w.feature_sums_ = summary.raw_feature_means;
  w.instruction_sum_ = summary.mean_total_instructions;
  w.accumulated_ = 1;
  w.samples_seen_ = summary.sample_count;
  return w;
}

WindowState WindowState::static_window(std::size_t window_size, std::size_t raw_len) {
  if (window_size == 0) throw DataError("window size must be positive");
  WindowState w;
  w.mode_ = WindowMode::kStatic;
  w.window_size_ = window_size;
  w.feature_sums_.assign(raw_len, 0.0);
  return w;
}

WindowState WindowState::dynamic_window(std::size_t raw_len) {
  WindowState w;
  w.mode_ = WindowMode::kDynamic;
  w.feature_sums_.assign(raw_len, 0.0);
  return w;
}

void WindowState::update(const std::vector<std::vector<double>>& raw_batch,
                         const std::vector<double>& instruction_counts) {
  if (mode_ == WindowMode::kExact) throw DataError("exact window cannot be updated");
  if (raw_batch.empty()) throw DataError("empty window batch");
  if (raw_batch.size() != instruction_counts.size())
    throw DataError("window batch length mismatch");

  for (std::size_t i = 0; i < raw_batch.size(); ++i) {
    ++samples_seen_;
    if (frozen_) continue;
    const auto& raw = raw_batch[i];
    if (raw.size() != feature_sums_.size()) throw DataError("window feature length mismatch");
    for (std::size_t k = 0; k < raw.size(); ++k) feature_sums_[k] += raw[k];
    instruction_sum_ += instruction_counts[i];
    ++accumulated_;
    if (mode_ == WindowMode::kStatic && accumulated_ >= window_size_) frozen_ = true;
  }
}

bool WindowState::ready() const { return accumulated_ > 0; }

std::vector<double> WindowState::feature_means() const {
  if (!ready()) throw DataError("window has no samples");
  std::vector<double> means(feature_sums_.size());
  const double n = static_cast<double>(accumulated_);
  for (std::size_t i = 0; i < means.size(); ++i) means[i] = feature_sums_[i] / n;
  return means;
}

double WindowState::mean_instructions() const {
  if (!ready()) throw DataError("window has no samples");
  return instruction_sum_ / static_cast<double>(accumulated_);
}

GroupSummary summarize_group(const std::vector<const ImplementationRecord*>& records,
                             const CacheTopology& topology) {
  if (records.empty()) throw DataError("cannot summarize an empty group");
  GroupSummary summary;
  summary.key = records.front()->group;
  const std::size_t raw_len = 3 + 6 * topology.levels.size();
  std::vector<double> sums(raw_len, 0.0);
  double inst_sum = 0.0;
  double runtime_sum = 0.0;
  for (const auto* record : records) {
    const auto raw = raw_features(record->stats, topology);
    for (std::size_t i = 0; i < raw_len; ++i) sums[i] += raw[i];
    inst_sum += static_cast<double>(record->stats.total_instructions);
    runtime_sum += record->reference_runtime;
  }
  const double n = static_cast<double>(records.size());
  summary.raw_feature_means.resize(raw_len);
  for (std::size_t i = 0; i < raw_len; ++i) summary.raw_feature_means[i] = sums[i] / n;
  summary.mean_total_instructions = inst_sum / n;
  summary.mean_reference_runtime = runtime_sum / n;
  summary.sample_count = records.size();
  return summary;
}

std::map<GroupKey, GroupSummary> summarize_groups(const Dataset& dataset) {
  std::map<GroupKey, std::vector<const ImplementationRecord*>> by_group;
  for (const auto& record : dataset.records) by_group[record.group].push_back(&record);
  std::map<GroupKey, GroupSummary> summaries;
  for (const auto& [key, records] : by_group)
    summaries.emplace(key, summarize_group(records, dataset.topology));
  return summaries;
}

namespace {

FeatureVector assemble(const StatVector& stats, const std::vector<double>& means,
                       double mean_insts, const FeatureSchema& schema) {
  const auto raw = raw_features(stats, schema.topology);
  if (raw.size() != schema.raw_block_size() || means.size() != raw.size())
    throw DataError("schema does not match topology");
  const auto norm = normalize_to_group(raw, means);

  FeatureVector fv;
  fv.values.reserve(schema.size());
  fv.values.insert(fv.values.end(), raw.begin(), raw.end());
  fv.values.insert(fv.values.end(), norm.begin(), norm.end());
  const double insts = static_cast<double>(stats.total_instructions);
  fv.values.push_back(mean_insts == 0.0 ? 0.0 : (insts - mean_insts) / mean_insts);
  if (fv.values.size() != schema.size()) throw DataError("schema length mismatch");
  return fv;
}

}  // namespace

FeatureVector assemble_feature_vector(const StatVector& stats, const GroupSummary& summary,
                                      const FeatureSchema& schema) {
  return assemble(stats, summary.raw_feature_means, summary.mean_total_instructions, schema);
}

FeatureVector assemble_feature_vector(const StatVector& stats, const WindowState& window,
                                      const FeatureSchema& schema) {
  return assemble(stats, window.feature_means(), window.mean_instructions(), schema);
}

double target_score(const ImplementationRecord& record, const GroupSummary& summary) {
  if (summary.mean_reference_runtime <= 0.0)
    throw DataError("group mean runtime must be positive");
  return (record.reference_runtime - summary.mean_reference_runtime) /
         summary.mean_reference_runtime;
}

TrainingSet build_training_set(const Dataset& dataset) {
  std::vector<std::size_t> rows(dataset.records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return build_training_set(dataset, rows, summarize_groups(dataset));
}

TrainingSet build_training_set(const Dataset& dataset, const std::vector<std::size_t>& rows,
                               const std::map<GroupKey, GroupSummary>& summaries) {
  TrainingSet set;
  set.schema = make_feature_schema(dataset.topology);
  set.features.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(set.schema.size()));
  set.targets.resize(static_cast<Eigen::Index>(rows.size()));
  set.row_groups.reserve(rows.size());
  set.record_indices = rows;

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& record = dataset.records.at(rows[r]);
    auto it = summaries.find(record.group);
    if (it == summaries.end()) throw DataError("no summary for record group");
    const auto fv = assemble_feature_vector(record.stats, it->second, set.schema);
    for (std::size_t c = 0; c < fv.values.size(); ++c)
      set.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = fv.values[c];
    set.targets(static_cast<Eigen::Index>(r)) = target_score(record, it->second);
    set.row_groups.push_back(record.group);
  }
  return set;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                       const Eigen::MatrixXd& features) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < schema.names.size(); ++i) {
    if (i) out << ',';
    out << schema.names[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
      if (c) out << ',';
      out << features(r, c);
    }
    out << '\n';
  }
  atomic_write(path, out.str());
}

}  // namespace simscore
