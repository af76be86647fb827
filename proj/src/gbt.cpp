// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "simscore/predictors.hpp"

namespace simscore {

double GbtTree::eval(const Eigen::RowVectorXd& row) const {
  int idx = 0;
  while (!nodes[static_cast<std::size_t>(idx)].is_leaf) {
    const GbtNode& node = nodes[static_cast<std::size_t>(idx)];
    idx = row(node.feature) < node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(idx)].value;
}

namespace {

// L1 soft-thresholding on the gradient sum, then the usual ratio.
double leaf_weight(double g, double h, const GbtConfig& cfg) {
  const double shrunk = std::max(0.0, std::abs(g) - cfg.reg_alpha);
  if (shrunk == 0.0) return 0.0;
  return -std::copysign(shrunk, g) / (h + cfg.reg_lambda);
}

double score_term(double g, double h, const GbtConfig& cfg) {
  return g * g / (h + cfg.reg_lambda);
}

struct TreeBuilder {
  const Eigen::MatrixXd& features;
  const Eigen::VectorXd& grad;  // h = 1 per row for squared error
  const GbtConfig& cfg;
  const std::vector<int>& columns;
  GbtTree tree;

  int build(std::vector<int> rows, int depth) {
    double g_sum = 0.0;
    for (int r : rows) g_sum += grad(r);
    const double h_sum = static_cast<double>(rows.size());

    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = 0.0;
    if (depth < cfg.max_depth && rows.size() >= 2) {
      for (int col : columns) {
        std::vector<int> sorted = rows;
        std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
          return features(a, col) < features(b, col);
        });
        double g_left = 0.0;
        double h_left = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          g_left += grad(sorted[i]);
          h_left += 1.0;
          const double lo = features(sorted[i], col);
          const double hi = features(sorted[i + 1], col);
          if (lo == hi) continue;
          const double h_right = h_sum - h_left;
          if (h_left < cfg.min_child_weight || h_right < cfg.min_child_weight) continue;
          const double gain = 0.5 * (score_term(g_left, h_left, cfg) +
                                     score_term(g_sum - g_left, h_right, cfg) -
                                     score_term(g_sum, h_sum, cfg));
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = col;
            best_threshold = 0.5 * (lo + hi);
          }
        }
      }
    }

    if (best_feature < 0) {
      tree.nodes[static_cast<std::size_t>(node_index)].is_leaf = true;
      tree.nodes[static_cast<std::size_t>(node_index)].value = leaf_weight(g_sum, h_sum, cfg);
      return node_index;
    }

    std::vector<int> left_rows, right_rows;
    for (int r : rows) {
      if (features(r, best_feature) < best_threshold)
        left_rows.push_back(r);
      else
        right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int left = build(std::move(left_rows), depth + 1);
    const int right = build(std::move(right_rows), depth + 1);
    GbtNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
    node.is_leaf = false;
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return node_index;
  }
};

std::vector<int> sample_without_replacement(int total, double fraction, std::mt19937_64& rng) {
  std::vector<int> all(static_cast<std::size_t>(total));
  std::iota(all.begin(), all.end(), 0);
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total))));
  if (keep >= all.size()) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

PredictorModel fit_gbt(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                       const FeatureSchema& schema, const GbtConfig& config) {
  if (features.rows() < 2 || features.rows() != targets.size())
    throw DataError("fit_gbt: need at least two rows");
  const int n = static_cast<int>(features.rows());
  const int d = static_cast<int>(features.cols());

  GbtModel gbt;
  gbt.learning_rate = config.learning_rate;
  gbt.base_score = config.base_score.value_or(targets.mean());

  std::mt19937_64 rng(config.seed);
  Eigen::VectorXd prediction = Eigen::VectorXd::Constant(n, gbt.base_score);

  for (std::size_t t = 0; t < config.n_trees; ++t) {
    const Eigen::VectorXd grad = prediction - targets;  // h = 1
    const std::vector<int> rows = sample_without_replacement(n, config.subsample, rng);
    const std::vector<int> cols = sample_without_replacement(d, config.colsample, rng);

    TreeBuilder builder{features, grad, config, cols, {}};
    builder.build(rows, 0);
    GbtTree tree = std::move(builder.tree);

    for (int r = 0; r < n; ++r)
      prediction(r) += config.learning_rate * tree.eval(features.row(r));
    gbt.trees.push_back(std::move(tree));
  }

  PredictorModel model;
  model.kind = PredictorKind::kGbt;
  model.schema = schema;
  model.params = std::move(gbt);
  return model;
}

}  // namespace simscore
