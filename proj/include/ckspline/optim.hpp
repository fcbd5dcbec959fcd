#ifndef CKSPLINE_OPTIM_HPP
#define CKSPLINE_OPTIM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ckspline/error.hpp"
#include "ckspline/spline.hpp"

namespace ckspline {

enum class OptimizerKind { sgd, adam, adamax, amsgrad };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::sgd;
  double learning_rate = 0.1;
  double momentum = 0.0;
  bool nesterov = false;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;

  void validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw ConfigError("optimizer: learning rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0))
      throw ConfigError("optimizer: momentum must lie in [0, 1)");
    if (nesterov && kind != OptimizerKind::sgd)
      throw ConfigError("optimizer: nesterov applies to sgd only");
    if (nesterov && !(momentum > 0.0))
      throw ConfigError("optimizer: nesterov requires momentum > 0");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
      throw ConfigError("optimizer: beta1 and beta2 must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("optimizer: epsilon must be > 0");
  }
};

/// Slot variables, one matrix per kind of moment, shaped like the coefficients.
/// Slots unused by the configured optimizer stay zero.
struct OptimizerState {
  std::int64_t step_count = 0;
  CoefficientMatrix velocity;
  CoefficientMatrix first_moment;
  CoefficientMatrix second_moment;
  CoefficientMatrix max_second_moment;
  CoefficientMatrix inf_norm;

  OptimizerState() = default;
  OptimizerState(Eigen::Index rows, Eigen::Index cols)
      : velocity(CoefficientMatrix::Zero(rows, cols)),
        first_moment(CoefficientMatrix::Zero(rows, cols)),
        second_moment(CoefficientMatrix::Zero(rows, cols)),
        max_second_moment(CoefficientMatrix::Zero(rows, cols)),
        inf_norm(CoefficientMatrix::Zero(rows, cols)) {}
};

/// Applies one update of the configured optimizer to `coefficients`.
///
///   sgd       v = momentum v - lr g;  theta += v   (nesterov: momentum v - lr g)
///   adam      theta -= lr mhat / (sqrt(vhat) + eps)
///   amsgrad   as adam with vhat replaced by its running maximum
///   adamax    u = max(beta2 u, |g|);  theta -= lr / (1 - beta1^t) m / (u + eps)
inline void step(OptimizerState& state, const OptimizerConfig& config,
                 CoefficientMatrix& coefficients, const CoefficientMatrix& gradients) {
  const Eigen::Index rows = coefficients.rows();
  const Eigen::Index cols = coefficients.cols();
  if (gradients.rows() != rows || gradients.cols() != cols)
    throw ConfigError("optimizer: gradient shape does not match coefficients");
  if (state.velocity.rows() != rows || state.velocity.cols() != cols)
    throw ConfigError("optimizer: state shape does not match coefficients");
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!std::isfinite(gradients(i, j)))
        throw NonFiniteGradient(static_cast<std::size_t>(i), static_cast<std::size_t>(j));

  ++state.step_count;
  const double lr = config.learning_rate;
  const double t = static_cast<double>(state.step_count);

  switch (config.kind) {
    case OptimizerKind::sgd: {
      state.velocity = config.momentum * state.velocity - lr * gradients;
      if (config.nesterov)
        coefficients += config.momentum * state.velocity - lr * gradients;
      else
        coefficients += state.velocity;
      break;
    }
    case OptimizerKind::adam:
    case OptimizerKind::amsgrad: {
      const double b1 = config.beta1, b2 = config.beta2;
      const double c1 = 1.0 - std::pow(b1, t);
      const double c2 = 1.0 - std::pow(b2, t);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
          const double g = gradients(i, j);
          double& m = state.first_moment(i, j);
          double& v = state.second_moment(i, j);
          m = b1 * m + (1.0 - b1) * g;
          v = b2 * v + (1.0 - b2) * g * g;
          double vhat = v / c2;
          if (config.kind == OptimizerKind::amsgrad) {
            double& vmax = state.max_second_moment(i, j);
            vmax = std::max(vmax, vhat);
            vhat = vmax;
          }
          coefficients(i, j) -= lr * (m / c1) / (std::sqrt(vhat) + config.epsilon);
        }
      break;
    }
    case OptimizerKind::adamax: {
      const double b1 = config.beta1, b2 = config.beta2;
      const double step_size = lr / (1.0 - std::pow(b1, t));
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
          const double g = gradients(i, j);
          double& m = state.first_moment(i, j);
          double& u = state.inf_norm(i, j);
          m = b1 * m + (1.0 - b1) * g;
          u = std::max(b2 * u, std::abs(g));
          coefficients(i, j) -= step_size * m / (u + config.epsilon);
        }
      break;
    }
  }
}

}  // namespace ckspline

#endif  // CKSPLINE_OPTIM_HPP
