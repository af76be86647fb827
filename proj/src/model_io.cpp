// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "simscore/dataset.hpp"
#include "simscore/predictors.hpp"

namespace simscore {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return {};
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j.at(r).at(c).get<double>();
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

json params_to_json(const PredictorModel& model) {
  switch (model.kind) {
    case PredictorKind::kMlr: {
      const auto& mlr = std::get<MlrModel>(model.params);
      return {{"intercept", mlr.intercept}, {"coefficients", vector_to_json(mlr.coefficients)}};
    }
    case PredictorKind::kMlp: {
      const auto& mlp = std::get<MlpModel>(model.params);
      json weights = json::array();
      json biases = json::array();
      for (const auto& w : mlp.weights) weights.push_back(matrix_to_json(w));
      for (const auto& b : mlp.biases) biases.push_back(vector_to_json(b));
      return {{"weights", weights},
              {"biases", biases},
              {"standardized", mlp.standardized},
              {"feature_mean", vector_to_json(mlp.feature_mean)},
              {"feature_scale", vector_to_json(mlp.feature_scale)}};
    }
    case PredictorKind::kGp: {
      const auto& gp = std::get<GpModel>(model.params);
      return {{"constant", gp.hyper.constant},
              {"length_scale", gp.hyper.length_scale},
              {"noise", gp.hyper.noise},
              {"train_inputs", matrix_to_json(gp.train_inputs)},
              {"alpha", vector_to_json(gp.alpha)}};
    }
    case PredictorKind::kGbt: {
      const auto& gbt = std::get<GbtModel>(model.params);
      json trees = json::array();
      for (const auto& tree : gbt.trees) {
        json nodes = json::array();
        for (const auto& node : tree.nodes) {
          nodes.push_back({{"leaf", node.is_leaf},
                           {"feature", node.feature},
                           {"threshold", node.threshold},
                           {"value", node.value},
                           {"left", node.left},
                           {"right", node.right}});
        }
        trees.push_back(std::move(nodes));
      }
      return {{"trees", trees},
              {"learning_rate", gbt.learning_rate},
              {"base_score", gbt.base_score}};
    }
  }
  throw DataError("unknown predictor kind");
}

void params_from_json(const json& j, PredictorModel& model) {
  switch (model.kind) {
    case PredictorKind::kMlr: {
      MlrModel mlr;
      mlr.intercept = j.at("intercept").get<double>();
      mlr.coefficients = vector_from_json(j.at("coefficients"));
      model.params = std::move(mlr);
      return;
    }
    case PredictorKind::kMlp: {
      MlpModel mlp;
      for (const auto& w : j.at("weights")) mlp.weights.push_back(matrix_from_json(w));
      for (const auto& b : j.at("biases")) mlp.biases.push_back(vector_from_json(b));
      mlp.standardized = j.at("standardized").get<bool>();
      mlp.feature_mean = vector_from_json(j.at("feature_mean"));
      mlp.feature_scale = vector_from_json(j.at("feature_scale"));
      model.params = std::move(mlp);
      return;
    }
    case PredictorKind::kGp: {
      GpModel gp;
      gp.hyper.constant = j.at("constant").get<double>();
      gp.hyper.length_scale = j.at("length_scale").get<double>();
      gp.hyper.noise = j.at("noise").get<double>();
      gp.train_inputs = matrix_from_json(j.at("train_inputs"));
      gp.alpha = vector_from_json(j.at("alpha"));
      model.params = std::move(gp);
      return;
    }
    case PredictorKind::kGbt: {
      GbtModel gbt;
      for (const auto& jt : j.at("trees")) {
        GbtTree tree;
        for (const auto& jn : jt) {
          GbtNode node;
          node.is_leaf = jn.at("leaf").get<bool>();
          node.feature = jn.at("feature").get<int>();
          node.threshold = jn.at("threshold").get<double>();
          node.value = jn.at("value").get<double>();
          node.left = jn.at("left").get<int>();
          node.right = jn.at("right").get<int>();
          tree.nodes.push_back(node);
        }
        gbt.trees.push_back(std::move(tree));
      }
      gbt.learning_rate = j.at("learning_rate").get<double>();
      gbt.base_score = j.at("base_score").get<double>();
      model.params = std::move(gbt);
      return;
    }
  }
  throw DataError("unknown predictor kind");
}

}  // namespace

std::string model_to_json(const PredictorModel& model) {
  json j = {{"format_version", kModelFormatVersion},
            {"kind", to_string(model.kind)},
            {"schema_fingerprint", schema_fingerprint(model.schema)},
            {"schema",
             {{"topology", topology_to_json(model.schema.topology)},
              {"names", model.schema.names}}},
            {"parameters", params_to_json(model)}};
  return j.dump();
}

PredictorModel model_from_json(const std::string& text,
                               const std::optional<FeatureSchema>& expected) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed model document");
  if (j.at("format_version").get<std::string>() != kModelFormatVersion)
    throw DataError("unsupported model format version");

  PredictorModel model;
  model.kind = predictor_kind_from_string(j.at("kind").get<std::string>());
  model.schema.topology = topology_from_json(j.at("schema").at("topology"));
  model.schema.names = j.at("schema").at("names").get<std::vector<std::string>>();

  const auto fingerprint = j.at("schema_fingerprint").get<std::uint64_t>();
  if (fingerprint != schema_fingerprint(model.schema))
    throw DataError("model file fingerprint does not match its schema");
  if (expected && schema_fingerprint(*expected) != fingerprint)
    throw DataError("model schema fingerprint mismatch");

  params_from_json(j.at("parameters"), model);
  return model;
}

void save_model(const PredictorModel& model, const std::filesystem::path& path) {
  atomic_write(path, model_to_json(model) + "\n");
}

PredictorModel load_model(const std::filesystem::path& path,
                          const std::optional<FeatureSchema>& expected) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), expected);
}

}  // namespace simscore
