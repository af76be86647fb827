// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/hyperopt.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <random>
#include <sstream>

#include "simscore/dataset.hpp"

namespace simscore {

void SearchSpace::validate() const {
  if (dims.empty()) throw DataError("empty search space");
  for (const auto& dim : dims) {
    if (!(dim.lower < dim.upper))
      throw DataError("search dimension " + dim.name + ": lower must be below upper");
    if (dim.scale == ParamScale::kLog && !(dim.lower > 0.0))
      throw DataError("search dimension " + dim.name + ": log scale requires lower > 0");
  }
}

namespace {

// Unit-cube coordinates <-> native parameter values.
double from_unit(const SearchDim& dim, double u) {
  if (dim.scale == ParamScale::kLog) {
    const double lo = std::log(dim.lower);
    const double hi = std::log(dim.upper);
    return std::exp(lo + u * (hi - lo));
  }
  return dim.lower + u * (dim.upper - dim.lower);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// Internal RBF surrogate with predictive variance; fixed hyperparameters
// over unit-cube inputs and standardized targets.
struct Surrogate {
  Eigen::MatrixXd inputs;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
  double length_scale = 0.2;
  double noise = 1e-8;

  void fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    inputs = x;
    Eigen::MatrixXd k = kernel(x, x);
    k.diagonal().array() += noise;
    llt.compute(k);
    double jitter = 1e-10;
    while (llt.info() != Eigen::Success && jitter <= 1e-2) {
      Eigen::MatrixXd kj = k;
      kj.diagonal().array() += jitter;
      llt.compute(kj);
      jitter *= 10.0;
    }
    alpha = llt.solve(y);
  }

  Eigen::MatrixXd kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    const Eigen::VectorXd a2 = a.rowwise().squaredNorm();
    const Eigen::VectorXd b2 = b.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * a * b.transpose();
    d2.colwise() += a2;
    d2.rowwise() += b2.transpose();
    const double inv = 1.0 / (2.0 * length_scale * length_scale);
    return (-inv * d2.cwiseMax(0.0).array()).exp();
  }

  void predict(const Eigen::MatrixXd& query, Eigen::VectorXd* mean,
               Eigen::VectorXd* variance) const {
    const Eigen::MatrixXd ks = kernel(query, inputs);
    *mean = ks * alpha;
    const Eigen::MatrixXd v = llt.matrixL().solve(ks.transpose());
    variance->resize(query.rows());
    for (Eigen::Index i = 0; i < query.rows(); ++i)
      (*variance)(i) = std::max(0.0, 1.0 + noise - v.col(i).squaredNorm());
  }
};

}  // namespace

OptResult bayes_optimize(const Objective& objective, const SearchSpace& space,
                         const BoConfig& config) {
  space.validate();
  if (config.budget < 1) throw DataError("bayes_optimize: budget must be at least 1");
  const std::size_t d = space.dims.size();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  OptResult result;
  result.best_objective = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> unit_points;  // successful evaluations
  std::vector<double> objectives;

  auto evaluate_unit = [&](const std::vector<double>& u) {
    Evaluation eval;
    eval.point.resize(d);
    for (std::size_t i = 0; i < d; ++i) eval.point[i] = from_unit(space.dims[i], u[i]);
    try {
      eval.objective = objective(eval.point);
    } catch (const std::exception&) {
      eval.objective = -std::numeric_limits<double>::infinity();
    }
    eval.failed = !std::isfinite(eval.objective);
    result.trace.push_back(eval);
    if (!eval.failed) {
      unit_points.push_back(u);
      objectives.push_back(eval.objective);
      if (eval.objective > result.best_objective) {
        result.best_objective = eval.objective;
        result.best_point = eval.point;
      }
    }
  };

  const std::size_t n_init = std::min(std::max<std::size_t>(1, config.n_init), config.budget);
  for (std::size_t i = 0; i < n_init; ++i) {
    std::vector<double> u(d);
    for (auto& v : u) v = unit(rng);
    evaluate_unit(u);
  }

  for (std::size_t iter = n_init; iter < config.budget; ++iter) {
    if (unit_points.empty()) {
      // No surrogate to fit yet; keep sampling at random.
      std::vector<double> u(d);
      for (auto& v : u) v = unit(rng);
      evaluate_unit(u);
      continue;
    }

    // Standardize objectives for the surrogate.
    Eigen::VectorXd y(static_cast<Eigen::Index>(objectives.size()));
    for (std::size_t i = 0; i < objectives.size(); ++i)
      y(static_cast<Eigen::Index>(i)) = objectives[i];
    const double mean = y.mean();
    double sd = std::sqrt((y.array() - mean).square().mean());
    if (sd <= 0.0) sd = 1.0;
    const Eigen::VectorXd yz = (y.array() - mean) / sd;

    Eigen::MatrixXd x(static_cast<Eigen::Index>(unit_points.size()),
                      static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < unit_points.size(); ++i)
      for (std::size_t j = 0; j < d; ++j)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = unit_points[i][j];

    Surrogate surrogate;
    surrogate.fit(x, yz);

    Eigen::MatrixXd candidates(static_cast<Eigen::Index>(config.n_candidates),
                               static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < candidates.rows(); ++i)
      for (Eigen::Index j = 0; j < candidates.cols(); ++j) candidates(i, j) = unit(rng);

    Eigen::VectorXd mu, var;
    surrogate.predict(candidates, &mu, &var);
    const double best_z = yz.maxCoeff();

    Eigen::Index best_candidate = 0;
    double best_ei = -1.0;
    for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
      const double sigma = std::sqrt(var(i));
      const double improvement = mu(i) - best_z - config.xi;
      double ei = 0.0;
      if (sigma > 1e-12) {
        const double z = improvement / sigma;
        ei = improvement * normal_cdf(z) + sigma * normal_pdf(z);
      } else if (improvement > 0.0) {
        ei = improvement;
      }
      if (ei > best_ei) {
        best_ei = ei;
        best_candidate = i;
      }
    }

    std::vector<double> u(d);
    for (std::size_t j = 0; j < d; ++j)
      u[j] = candidates(best_candidate, static_cast<Eigen::Index>(j));
    evaluate_unit(u);
  }

  if (result.best_point.empty()) throw DataError("bayes_optimize: all evaluations failed");
  return result;
}

OptResult grid_search(const Objective& objective,
                      const std::vector<std::vector<double>>& grid) {
  if (grid.empty()) throw DataError("grid_search: empty grid");
  for (const auto& values : grid)
    if (values.empty()) throw DataError("grid_search: empty parameter value list");

  OptResult result;
  result.best_objective = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> index(grid.size(), 0);
  while (true) {
    Evaluation eval;
    eval.point.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) eval.point[i] = grid[i][index[i]];
    try {
      eval.objective = objective(eval.point);
    } catch (const std::exception&) {
      eval.objective = std::numeric_limits<double>::infinity();
    }
    eval.failed = !std::isfinite(eval.objective);
    if (!eval.failed && eval.objective < result.best_objective) {
      result.best_objective = eval.objective;
      result.best_point = eval.point;
    }
    result.trace.push_back(std::move(eval));

    // Row-major advance: last parameter fastest.
    std::size_t dim = grid.size();
    while (dim-- > 0) {
      if (++index[dim] < grid[dim].size()) break;
      index[dim] = 0;
      if (dim == 0) {
        if (result.best_point.empty())
          throw DataError("grid_search: all evaluations failed");
        return result;
      }
    }
  }
}

double objective_gp(const GpHyper& hyper, const Eigen::MatrixXd& train_x,
                    const Eigen::VectorXd& train_y, const Eigen::MatrixXd& test_x,
                    const Eigen::VectorXd& test_y, LossKind loss_kind) {
  if (train_y.size() == 0 || test_y.size() == 0)
    throw DataError("objective_gp: empty split");
  FeatureSchema schema;
  schema.names.resize(static_cast<std::size_t>(train_x.cols()));
  try {
    const PredictorModel model = fit_gp(train_x, train_y, schema, hyper);
    const Eigen::VectorXd predictions = predict(model, test_x);
    return -loss(loss_kind, predictions, test_y);
  } catch (const DataError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

SearchSpace default_gp_search_space() {
  SearchSpace space;
  space.dims = {{"constant", 1e-3, 1e3, ParamScale::kLog},
                {"length_scale", 1e-2, 1e2, ParamScale::kLog},
                {"noise", 1e-6, 1.0, ParamScale::kLog}};
  return space;
}

void write_trace_csv(const std::filesystem::path& path, const SearchSpace& space,
                     const std::vector<Evaluation>& trace) {
  std::ostringstream out;
  out << "iteration";
  for (const auto& dim : space.dims) out << ',' << dim.name;
  out << ",objective,failed\n";
  out.precision(17);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i;
    for (double v : trace[i].point) out << ',' << v;
    out << ',' << trace[i].objective << ',' << (trace[i].failed ? 1 : 0) << '\n';
  }
  atomic_write(path, out.str());
}

}  // namespace simscore
