#ifndef CKSPLINE_LOSS_HPP
#define CKSPLINE_LOSS_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ckspline/error.hpp"
#include "ckspline/spline.hpp"

namespace ckspline {

enum class BoundaryMode { open, cyclic, periodic };

struct LossConfig {
  double lambda = 1.0;
  int k = 0;
  BoundaryMode boundary_mode = BoundaryMode::open;
  double strain_weight = 0.0;

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw ConfigError("loss: lambda must lie in [0, 1]");
    if (k < 0) throw ConfigError("loss: continuity order k must be >= 0");
    if (!(strain_weight >= 0.0) || !std::isfinite(strain_weight))
      throw ConfigError("loss: strain weight must be finite and >= 0");
  }

  void validate(int degree) const {
    validate();
    if (k > degree)
      throw ConfigError("loss: continuity order k = " + std::to_string(k) +
                        " exceeds degree " + std::to_string(degree));
  }
};

struct LossBreakdown {
  double total = 0.0;
  double l2 = 0.0;
  double ck = 0.0;
  double strain = 0.0;
};

/// A place where two segment ends must agree in derivatives
/// first_order..k. For interior boundaries both positions coincide; the
/// wrap-around boundary compares the end of the last segment with the start
/// of the first.
struct Boundary {
  std::size_t left_segment;
  double left_x;
  std::size_t right_segment;
  double right_x;
  int first_order;
};

inline std::vector<Boundary> continuity_boundaries(const SplineModel& model,
                                                   BoundaryMode mode) {
  std::vector<Boundary> out;
  const std::size_t m = model.segments();
  const auto xi = model.breakpoints();
  for (std::size_t i = 0; i + 1 < m; ++i) out.push_back({i, xi[i + 1], i + 1, xi[i + 1], 0});
  if (mode != BoundaryMode::open)
    out.push_back({m - 1, xi[m], 0, xi[0], mode == BoundaryMode::cyclic ? 1 : 0});
  return out;
}

/// 1/(m-1) for open splines, 1/m when the wrap-around boundary is included.
inline double ck_divisor(std::size_t segments, BoundaryMode mode) {
  return mode == BoundaryMode::open ? static_cast<double>(segments) - 1.0
                                    : static_cast<double>(segments);
}

/// delta_j = p_right^(j)(right_x) - p_left^(j)(left_x), internal coordinates.
inline double continuity_defect(const SplineModel& model, const Boundary& b, int j) {
  return model.eval_segment(b.right_segment, b.right_x, j) -
         model.eval_segment(b.left_segment, b.left_x, j);
}

namespace detail {

inline double owned_internal(const SplineModel& model, const SampleSet& samples,
                             std::size_t idx, std::size_t& segment) {
  double t = 0.0;
  try {
    t = model.to_internal(samples.xs()[idx]);
    segment = model.segment_index(t);
  } catch (const DomainError& e) {
    throw DomainError("sample " + std::to_string(idx) + ": " + e.what());
  }
  return t;
}

}  // namespace detail

/// (m/n) * sum_i |f(x_i) - y_i|^2; sample xs are original coordinates.
inline double l2_loss(const SplineModel& model, const SampleSet& samples) {
  const double m = static_cast<double>(model.segments());
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::size_t seg = 0;
    const double t = detail::owned_internal(model, samples, s, seg);
    const double r = model.eval_segment(seg, t, 0) - samples.ys()[s];
    sum += r * r;
  }
  return m / n * sum;
}

inline double ck_loss(const SplineModel& model, const LossConfig& config) {
  config.validate(model.degree());
  const double divisor = ck_divisor(model.segments(), config.boundary_mode);
  if (divisor <= 0.0) return 0.0;
  double sum = 0.0;
  for (const Boundary& b : continuity_boundaries(model, config.boundary_mode))
    for (int j = b.first_order; j <= config.k; ++j) {
      const double delta = continuity_defect(model, b, j);
      sum += delta * delta;
    }
  return sum / divisor;
}

namespace detail {

/// Coefficients (in u = t - mu) of p'' for one segment.
inline std::vector<double> second_derivative_coeffs(std::span<const double> a) {
  std::vector<double> c;
  for (std::size_t t = 2; t < a.size(); ++t)
    c.push_back(a[t] * static_cast<double>(t * (t - 1)));
  return c;
}

/// Integral of u^p over [lo, hi].
inline double monomial_integral(std::size_t p, double lo, double hi) {
  const double e = static_cast<double>(p + 1);
  return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

}  // namespace detail

/// Integral of f''(t)^2 over the internal interval, evaluated exactly.
inline double strain_loss(const SplineModel& model) {
  if (model.degree() < 2) return 0.0;
  double total = 0.0;
  const auto xi = model.breakpoints();
  const auto mu = model.centers();
  for (std::size_t i = 0; i < model.segments(); ++i) {
    const auto c = detail::second_derivative_coeffs(model.segment_coefficients(i));
    const double lo = xi[i] - mu[i];
    const double hi = xi[i + 1] - mu[i];
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = 0; b < c.size(); ++b)
        total += c[a] * c[b] * detail::monomial_integral(a + b, lo, hi);
  }
  return total;
}

inline LossBreakdown total_loss(const SplineModel& model, const SampleSet& samples,
                                const LossConfig& config) {
  config.validate(model.degree());
  LossBreakdown out;
  out.l2 = l2_loss(model, samples);
  out.ck = ck_loss(model, config);
  out.strain = config.strain_weight > 0.0 ? strain_loss(model) : 0.0;
  out.total = config.lambda * out.l2 + (1.0 - config.lambda) * out.ck +
              config.strain_weight * out.strain;
  return out;
}

/// Gradient of the l2 term alone, d l2 / d alpha.
inline CoefficientMatrix l2_gradient(const SplineModel& model, const SampleSet& samples) {
  CoefficientMatrix g = CoefficientMatrix::Zero(model.coefficients().rows(),
                                                model.coefficients().cols());
  const double scale = 2.0 * static_cast<double>(model.segments()) /
                       static_cast<double>(samples.size());
  const int d = model.degree();
  const auto mu = model.centers();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::size_t seg = 0;
    const double t = detail::owned_internal(model, samples, s, seg);
    const double r = model.eval_segment(seg, t, 0) - samples.ys()[s];
    const double u = t - mu[seg];
    double basis = 1.0;
    for (int j = 0; j <= d; ++j) {
      g(static_cast<Eigen::Index>(seg), j) += scale * r * basis;
      basis *= u;
    }
  }
  return g;
}

/// Gradient of the continuity term alone, d l_CK / d alpha.
inline CoefficientMatrix ck_gradient(const SplineModel& model, const LossConfig& config) {
  config.validate(model.degree());
  CoefficientMatrix g = CoefficientMatrix::Zero(model.coefficients().rows(),
                                                model.coefficients().cols());
  const double divisor = ck_divisor(model.segments(), config.boundary_mode);
  if (divisor <= 0.0) return g;
  const int d = model.degree();
  const auto mu = model.centers();
  for (const Boundary& b : continuity_boundaries(model, config.boundary_mode)) {
    const auto right = static_cast<Eigen::Index>(b.right_segment);
    const auto left = static_cast<Eigen::Index>(b.left_segment);
    const double ur = b.right_x - mu[b.right_segment];
    const double ul = b.left_x - mu[b.left_segment];
    for (int j = b.first_order; j <= config.k; ++j) {
      const double w = 2.0 * continuity_defect(model, b, j) / divisor;
      for (int t = j; t <= d; ++t) {
        g(right, t) += w * monomial_derivative(t, j, ur);
        g(left, t) -= w * monomial_derivative(t, j, ul);
      }
    }
  }
  return g;
}

/// Gradient of the strain energy, d l_strain / d alpha.
inline CoefficientMatrix strain_gradient(const SplineModel& model) {
  CoefficientMatrix g = CoefficientMatrix::Zero(model.coefficients().rows(),
                                                model.coefficients().cols());
  const int d = model.degree();
  if (d < 2) return g;
  const auto xi = model.breakpoints();
  const auto mu = model.centers();
  for (std::size_t i = 0; i < model.segments(); ++i) {
    const auto c = detail::second_derivative_coeffs(model.segment_coefficients(i));
    const double lo = xi[i] - mu[i];
    const double hi = xi[i + 1] - mu[i];
    // l = sum_ab c_a c_b I_{a+b}, c_a = a_{a+2} (a+2)(a+1).
    for (std::size_t a = 0; a < c.size(); ++a) {
      double dl_dca = 0.0;
      for (std::size_t b = 0; b < c.size(); ++b)
        dl_dca += 2.0 * c[b] * detail::monomial_integral(a + b, lo, hi);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a + 2)) =
          dl_dca * static_cast<double>((a + 2) * (a + 1));
    }
  }
  return g;
}

/// Exact gradient of total_loss with respect to every coefficient.
inline CoefficientMatrix gradient(const SplineModel& model, const SampleSet& samples,
                                  const LossConfig& config) {
  config.validate(model.degree());
  CoefficientMatrix g = CoefficientMatrix::Zero(model.coefficients().rows(),
                                                model.coefficients().cols());
  if (config.lambda != 0.0) g += config.lambda * l2_gradient(model, samples);
  if (config.lambda != 1.0) g += (1.0 - config.lambda) * ck_gradient(model, config);
  if (config.strain_weight > 0.0) g += config.strain_weight * strain_gradient(model);
  return g;
}

/// Central finite differences of total_loss, one coefficient at a time.
inline CoefficientMatrix fd_gradient(const SplineModel& model, const SampleSet& samples,
                                     const LossConfig& config, double h) {
  if (!(h > 0.0)) throw ConfigError("fd_gradient: step must be > 0");
  CoefficientMatrix g(model.coefficients().rows(), model.coefficients().cols());
  SplineModel probe = model;
  CoefficientMatrix coeffs = model.coefficients();
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i)
    for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
      const double saved = coeffs(i, j);
      coeffs(i, j) = saved + h;
      probe.set_coefficients(coeffs);
      const double up = total_loss(probe, samples, config).total;
      coeffs(i, j) = saved - h;
      probe.set_coefficients(coeffs);
      const double down = total_loss(probe, samples, config).total;
      coeffs(i, j) = saved;
      g(i, j) = (up - down) / (2.0 * h);
    }
  return g;
}

}  // namespace ckspline

#endif  // CKSPLINE_LOSS_HPP
