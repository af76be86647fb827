// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "simscore/dataset.hpp"

namespace simscore {

std::vector<std::size_t> prediction_order_indices(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

std::vector<double> prediction_order(const std::vector<double>& scores,
                                     const std::vector<double>& runtimes) {
  if (scores.size() != runtimes.size()) throw DataError("prediction_order: length mismatch");
  if (scores.empty()) throw DataError("prediction_order: empty input");
  std::vector<double> out;
  out.reserve(runtimes.size());
  for (std::size_t idx : prediction_order_indices(scores)) out.push_back(runtimes[idx]);
  return out;
}

namespace {

void check_positive(const std::vector<double>& values, const char* what) {
  for (double v : values)
    if (!(v > 0.0)) throw DataError(std::string(what) + ": non-positive runtime");
}

}  // namespace

double e_top1(const std::vector<double>& t_pred, const std::vector<double>& t_ref_sorted) {
  if (t_pred.empty() || t_ref_sorted.empty()) throw DataError("e_top1: empty input");
  check_positive(t_pred, "e_top1");
  check_positive(t_ref_sorted, "e_top1");
  return (1.0 - t_ref_sorted.front() / t_pred.front()) * 100.0;
}

double r_top1_from_rank(std::size_t fastest_rank, std::size_t n) {
  if (n == 0 || fastest_rank >= n) throw DataError("r_top1: rank out of range");
  return static_cast<double>(fastest_rank + 1) * 100.0 / static_cast<double>(n);
}

double r_top1(const std::vector<double>& scores, const std::vector<double>& runtimes) {
  if (scores.size() != runtimes.size() || scores.empty())
    throw DataError("r_top1: length mismatch or empty input");
  check_positive(runtimes, "r_top1");
  const std::size_t true_best =
      static_cast<std::size_t>(std::min_element(runtimes.begin(), runtimes.end()) -
                               runtimes.begin());
  const auto order = prediction_order_indices(scores);
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    if (order[pos] == true_best) return r_top1_from_rank(pos, order.size());
  throw DataError("r_top1: fastest implementation absent");
}

double quality_score(const std::vector<double>& sequence) {
  if (sequence.size() < 2) throw DataError("quality_score: need at least two samples");
  check_positive(sequence, "quality_score");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i)
    sum += (sequence[i] - std::min(sequence[i], sequence[i + 1])) / sequence[i];
  return 100.0 / static_cast<double>(sequence.size()) * sum;
}

std::pair<double, double> q_split(const std::vector<double>& t_pred) {
  if (t_pred.size() < 4) throw DataError("q_split: need at least four samples");
  const std::size_t mid = t_pred.size() / 2;
  const std::vector<double> low(t_pred.begin(), t_pred.begin() + mid);
  const std::vector<double> high(t_pred.begin() + mid, t_pred.end());
  return {quality_score(low), quality_score(high)};
}

std::uint64_t parallel_break_even(double t_simulator, double t_cooldown, double t_ref,
                                  std::uint64_t n_exe) {
  if (!(t_simulator > 0.0) || !(t_cooldown > 0.0) || !(t_ref > 0.0) || n_exe == 0)
    throw DataError("parallel_break_even: inputs must be positive");
  const double denom = (t_cooldown + t_ref) * static_cast<double>(n_exe);
  const double k = std::ceil(t_simulator / denom);
  return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

RankingReport rank_predictions(const GroupKey& group, const std::string& predictor,
                               const std::vector<double>& scores,
                               const std::vector<double>& runtimes) {
  RankingReport report;
  report.group = group;
  report.predictor = predictor;
  report.sample_count = scores.size();

  const auto t_pred = prediction_order(scores, runtimes);
  std::vector<double> t_ref = runtimes;
  std::sort(t_ref.begin(), t_ref.end());

  report.e_top1 = e_top1(t_pred, t_ref);
  report.r_top1 = r_top1(scores, runtimes);
  const auto [q_lo, q_hi] = q_split(t_pred);
  report.q_low = q_lo;
  report.q_high = q_hi;
  return report;
}

std::string report_csv(const std::vector<RankingReport>& reports) {
  std::ostringstream out;
  out << "kernel_type,group_id,predictor,e_top1,q_low,q_high,r_top1,n\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& r : reports) {
    out << r.group.kernel_type << ',' << r.group.group_id << ',' << r.predictor << ','
        << r.e_top1 << ',' << r.q_low << ',' << r.q_high << ',' << r.r_top1 << ','
        << r.sample_count << '\n';
  }
  return out.str();
}

void write_report_csv(const std::filesystem::path& path,
                      const std::vector<RankingReport>& reports) {
  atomic_write(path, report_csv(reports));
}

std::string report_table(const std::vector<RankingReport>& reports) {
  // Pivot: one row per group, one four-column block per predictor.
  std::vector<std::string> predictors;
  std::vector<GroupKey> groups;
  std::map<std::pair<GroupKey, std::string>, const RankingReport*> cells;
  for (const auto& r : reports) {
    if (std::find(predictors.begin(), predictors.end(), r.predictor) == predictors.end())
      predictors.push_back(r.predictor);
    if (std::find(groups.begin(), groups.end(), r.group) == groups.end())
      groups.push_back(r.group);
    cells[{r.group, r.predictor}] = &r;
  }

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::setw(24) << std::left << "group";
  for (const auto& p : predictors)
    out << "| " << std::setw(34) << std::left << (p + " (Etop1 Qlow Qhigh Rtop1)");
  out << '\n';

  for (const auto& g : groups) {
    std::ostringstream label;
    label << g.kernel_type << "/" << g.group_id;
    out << std::setw(24) << std::left << label.str();
    for (const auto& p : predictors) {
      auto it = cells.find({g, p});
      std::ostringstream cell;
      if (it != cells.end()) {
        cell << std::fixed << std::setprecision(2) << std::setw(7) << it->second->e_top1
             << std::setw(7) << it->second->q_low << std::setw(7) << it->second->q_high
             << std::setw(7) << it->second->r_top1;
      } else {
        cell << "-";
      }
      out << "| " << std::setw(34) << std::left << cell.str();
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace simscore
