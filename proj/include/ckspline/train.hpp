#ifndef CKSPLINE_TRAIN_HPP
#define CKSPLINE_TRAIN_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ckspline/error.hpp"
#include "ckspline/loss.hpp"
#include "ckspline/optim.hpp"
#include "ckspline/spline.hpp"

namespace ckspline {

enum class Regularization { none, degree_based };
enum class Init { zeros, least_squares };
enum class Scaling { none, unit_segments };

struct TrainConfig {
  int segments = 1;
  int degree = 3;
  int epochs = 1000;
  LossConfig loss;
  OptimizerConfig optimizer;
  Regularization regularization = Regularization::none;
  Init init = Init::zeros;
  Scaling scaling = Scaling::none;
  int record_every = 10;

  void validate() const {
    if (segments < 1) throw ConfigError("train: segments must be >= 1");
    if (degree < 0) throw ConfigError("train: degree must be >= 0");
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (record_every < 1) throw ConfigError("train: record_every must be >= 1");
    loss.validate(degree);
    optimizer.validate();
  }
};

struct HistoryEntry {
  int epoch;
  LossBreakdown loss;
};

struct TrainingReport {
  std::vector<HistoryEntry> history;
  SplineModel final_model;
  bool diverged = false;
  std::optional<int> divergence_epoch;
  bool rank_deficient_init = false;
  std::vector<std::string> warnings;
};

/// Normalized 1/(1+j) weights: r_j = (1/(1+j)) / sum_t 1/(1+t).
inline std::vector<double> regularization_vector(int degree) {
  if (degree < 0) throw ConfigError("regularization: degree must be >= 0");
  std::vector<double> r(static_cast<std::size_t>(degree) + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    r[j] = 1.0 / (1.0 + static_cast<double>(j));
    sum += r[j];
  }
  for (double& v : r) v /= sum;
  return r;
}

inline CoefficientMatrix apply_regularization(const CoefficientMatrix& gradients,
                                              std::span<const double> weights) {
  if (static_cast<Eigen::Index>(weights.size()) != gradients.cols())
    throw ConfigError("regularization: vector length " + std::to_string(weights.size()) +
                      " does not match " + std::to_string(gradients.cols()) + " columns");
  CoefficientMatrix out = gradients;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) *= weights[static_cast<std::size_t>(j)];
  return out;
}

struct ScaledProblem {
  SplineModel model;
  /// Samples with xs mapped into internal coordinates.
  SampleSet internal_samples;
};

/// Zero-initialized model with `segments` uniform pieces covering the sample
/// range, either in raw coordinates or rescaled so each piece has unit length.
inline ScaledProblem make_scaled_problem(const SampleSet& samples, int segments, int degree,
                                         Scaling scaling = Scaling::unit_segments) {
  if (segments < 1) throw ConfigError("scaled problem: segments must be >= 1");
  const double lo = samples.xs().front();
  const double hi = samples.xs().back();
  if (!(hi > lo))
    throw ConfigError("scaled problem: degenerate domain, all samples share x = " +
                      std::to_string(lo));
  const auto m = static_cast<std::size_t>(segments);
  std::vector<double> xi(m + 1);
  DomainMap map;
  if (scaling == Scaling::unit_segments) {
    map.scale = static_cast<double>(segments) / (hi - lo);
    map.offset = -lo * map.scale;
    for (std::size_t i = 0; i <= m; ++i) xi[i] = static_cast<double>(i);
  } else {
    for (std::size_t i = 0; i <= m; ++i)
      xi[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m);
    xi[m] = hi;
  }
  SplineModel model(std::move(xi), degree, map);
  std::vector<double> xs, ys(samples.ys().begin(), samples.ys().end());
  xs.reserve(samples.size());
  for (double x : samples.xs()) xs.push_back(model.to_internal(x));
  return {std::move(model), SampleSet(std::move(xs), std::move(ys))};
}

struct LeastSquaresResult {
  SplineModel model;
  bool rank_deficient = false;
};

/// Independent per-segment least-squares fit (no continuity coupling) via the
/// normal equations; segments without a unique solution get the minimum-norm one.
inline LeastSquaresResult least_squares_init(const SplineModel& model,
                                             const SampleSet& samples) {
  const Eigen::Index m = static_cast<Eigen::Index>(model.segments());
  const Eigen::Index p = model.degree() + 1;
  std::vector<Eigen::MatrixXd> normal(static_cast<std::size_t>(m), Eigen::MatrixXd::Zero(p, p));
  std::vector<Eigen::VectorXd> rhs(static_cast<std::size_t>(m), Eigen::VectorXd::Zero(p));
  const auto mu = model.centers();
  Eigen::VectorXd basis(p);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::size_t seg = 0;
    const double t = detail::owned_internal(model, samples, s, seg);
    const double u = t - mu[seg];
    double power = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      basis(j) = power;
      power *= u;
    }
    normal[seg].noalias() += basis * basis.transpose();
    rhs[seg] += samples.ys()[s] * basis;
  }
  CoefficientMatrix coeffs(m, p);
  bool deficient = false;
  for (std::size_t i = 0; i < normal.size(); ++i) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal[i]);
    Eigen::VectorXd a;
    if (cod.rank() == p) {
      a = normal[i].llt().solve(rhs[i]);
    } else {
      deficient = true;
      a = cod.solve(rhs[i]);
    }
    coeffs.row(static_cast<Eigen::Index>(i)) = a.transpose();
  }
  SplineModel out = model;
  out.set_coefficients(std::move(coeffs));
  return {std::move(out), deficient};
}

/// Full-batch gradient descent: loss, gradient, optional regularization, step.
inline TrainingReport fit(const SampleSet& samples, const TrainConfig& config) {
  config.validate();
  ScaledProblem problem =
      make_scaled_problem(samples, config.segments, config.degree, config.scaling);
  TrainingReport report{{}, problem.model, false, std::nullopt, false, {}};
  if (config.degree < 2 * config.loss.k + 1)
    report.warnings.push_back("degree " + std::to_string(config.degree) +
                              " < 2k+1; continuity repair will not be applicable");
  if (config.init == Init::least_squares) {
    LeastSquaresResult ls = least_squares_init(problem.model, samples);
    report.final_model = std::move(ls.model);
    report.rank_deficient_init = ls.rank_deficient;
    if (ls.rank_deficient)
      report.warnings.push_back("least-squares init: rank-deficient segment, minimum-norm used");
  }

  SplineModel& model = report.final_model;
  const std::vector<double> weights = regularization_vector(config.degree);
  OptimizerState state(model.coefficients().rows(), model.coefficients().cols());
  CoefficientMatrix coeffs = model.coefficients();

  auto diverge = [&](int epoch) {
    report.diverged = true;
    report.divergence_epoch = epoch;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const LossBreakdown loss = total_loss(model, samples, config.loss);
    if (!std::isfinite(loss.total)) {
      diverge(epoch);
      return report;
    }
    if (epoch % config.record_every == 0) report.history.push_back({epoch, loss});

    CoefficientMatrix grads = gradient(model, samples, config.loss);
    if (config.regularization == Regularization::degree_based)
      grads = apply_regularization(grads, weights);
    try {
      step(state, config.optimizer, coeffs, grads);
    } catch (const NonFiniteGradient&) {
      diverge(epoch);
      return report;
    }
    if (!coeffs.allFinite()) {
      diverge(epoch + 1);
      return report;
    }
    model.set_coefficients(coeffs);
  }

  const LossBreakdown final_loss = total_loss(model, samples, config.loss);
  if (!std::isfinite(final_loss.total)) {
    diverge(config.epochs);
    return report;
  }
  if (report.history.empty() || report.history.back().epoch != config.epochs)
    report.history.push_back({config.epochs, final_loss});
  return report;
}

}  // namespace ckspline

#endif  // CKSPLINE_TRAIN_HPP
