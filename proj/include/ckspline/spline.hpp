#ifndef CKSPLINE_SPLINE_HPP
#define CKSPLINE_SPLINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ckspline/error.hpp"

namespace ckspline {

/// Dense coefficient storage: one row per segment, lowest power first.
using CoefficientMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// t! / (t - j)!, the factor picked up by the j-th derivative of u^t.
/// Exact in integer arithmetic for t <= 20.
inline double falling_factorial(int t, int j) {
  if (j > t) return 0.0;
  if (t <= 20) {
    std::uint64_t product = 1;
    for (int s = t - j + 1; s <= t; ++s) product *= static_cast<std::uint64_t>(s);
    return static_cast<double>(product);
  }
  double product = 1.0;
  for (int s = t - j + 1; s <= t; ++s) product *= s;
  return product;
}

/// j-th derivative of u^t evaluated at u.
inline double monomial_derivative(int t, int j, double u) {
  if (j > t) return 0.0;
  return falling_factorial(t, j) * std::pow(u, t - j);
}

/// Evaluates the j-th derivative of sum_t coeffs[t] * u^t at u (Horner).
inline double horner_derivative(std::span<const double> coeffs, double u, int j) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (j > d) return 0.0;
  double acc = 0.0;
  for (int t = d; t >= j; --t) acc = acc * u + coeffs[t] * falling_factorial(t, j);
  return acc;
}

/// Taylor shift: re-expresses sum_t a_t (x - from)^t as sum_t b_t (x - to)^t.
inline std::vector<double> rebase(std::span<const double> coeffs, double from, double to) {
  std::vector<double> b(coeffs.begin(), coeffs.end());
  const double shift = to - from;
  if (shift == 0.0 || b.size() < 2) return b;
  const std::size_t d = b.size() - 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = d; j-- > i;) b[j] += shift * b[j + 1];
  return b;
}

/// Affine map t = scale * x + offset from original to internal coordinates.
struct DomainMap {
  double scale = 1.0;
  double offset = 0.0;

  double to_internal(double x) const { return scale * x + offset; }
  double to_original(double t) const { return (t - offset) / scale; }
  bool operator==(const DomainMap&) const = default;
};

/// Sorted samples (x_i, y_i) to be approximated.
class SampleSet {
 public:
  SampleSet() = default;

  /// Requires xs sorted non-decreasing, finite, equal lengths, n >= 2.
  SampleSet(std::vector<double> xs, std::vector<double> ys)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size())
      throw ConfigError("sample set: xs and ys differ in length");
    if (xs_.size() < 2) throw ConfigError("sample set: at least 2 samples required");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]))
        throw ConfigError("sample set: non-finite value at index " + std::to_string(i));
      if (i > 0 && xs_[i] < xs_[i - 1])
        throw ConfigError("sample set: xs not sorted at index " + std::to_string(i));
    }
  }

  /// Stable-sorts by x before validating.
  static SampleSet from_unsorted(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size())
      throw ConfigError("sample set: xs and ys differ in length");
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sx, sy;
    sx.reserve(xs.size());
    sy.reserve(ys.size());
    for (std::size_t i : order) {
      sx.push_back(xs[i]);
      sy.push_back(ys[i]);
    }
    return SampleSet(std::move(sx), std::move(sy));
  }

  std::size_t size() const { return xs_.size(); }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// Piecewise polynomial p_i(t) = sum_j alpha_{i,j} (t - mu_i)^j on
/// [xi_{i-1}, xi_i], with t the internal coordinate of a DomainMap.
///
/// Segment indices are 0-based. Each breakpoint belongs to the segment on its
/// right; the last segment is closed on both ends.
class SplineModel {
 public:
  /// Zero coefficients.
  SplineModel(std::vector<double> breakpoints, int degree, DomainMap map = {})
      : breakpoints_(std::move(breakpoints)), map_(map) {
    if (degree < 0) throw ConfigError("spline: degree must be >= 0");
    validate_layout();
    coefficients_ = CoefficientMatrix::Zero(static_cast<Eigen::Index>(segments()), degree + 1);
  }

  SplineModel(std::vector<double> breakpoints, CoefficientMatrix coefficients,
              DomainMap map = {})
      : breakpoints_(std::move(breakpoints)), map_(map) {
    validate_layout();
    set_coefficients(std::move(coefficients));
  }

  std::size_t segments() const { return centers_.size(); }
  int degree() const { return static_cast<int>(coefficients_.cols()) - 1; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> centers() const { return centers_; }
  const DomainMap& domain_map() const { return map_; }
  const CoefficientMatrix& coefficients() const { return coefficients_; }

  std::span<const double> segment_coefficients(std::size_t i) const {
    return {coefficients_.row(static_cast<Eigen::Index>(i)).data(),
            static_cast<std::size_t>(coefficients_.cols())};
  }

  /// Replaces the coefficient matrix; shape must match and entries be finite.
  void set_coefficients(CoefficientMatrix coefficients) {
    if (coefficients.rows() != static_cast<Eigen::Index>(segments()) ||
        coefficients.cols() < 1)
      throw ConfigError("spline: coefficient matrix must be " +
                        std::to_string(segments()) + " x (degree+1)");
    if (!coefficients.allFinite())
      throw ConfigError("spline: coefficients must be finite");
    coefficients_ = std::move(coefficients);
  }

  double lower() const { return breakpoints_.front(); }
  double upper() const { return breakpoints_.back(); }

  /// Owning segment of internal coordinate t (binary search).
  std::size_t segment_index(double t) const {
    if (!(t >= lower() && t <= upper())) {
      std::ostringstream os;
      os.precision(17);
      os << "spline: x = " << t << " outside [" << lower() << ", " << upper() << "]";
      throw DomainError(os.str());
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    auto i = static_cast<std::size_t>(it - breakpoints_.begin());
    return std::min(i, segments()) - 1;
  }

  /// j-th derivative of segment i at internal coordinate t; no ownership check.
  double eval_segment(std::size_t i, double t, int j = 0) const {
    if (i >= segments()) throw ConfigError("spline: segment index out of range");
    if (j < 0) throw ConfigError("spline: negative derivative order");
    return horner_derivative(segment_coefficients(i), t - centers_[i], j);
  }

  /// Internal coordinate of an original-coordinate x. Values within a few ulps
  /// of the interval (rounding in the affine map) are clamped onto it.
  double to_internal(double x) const {
    double t = map_.to_internal(x);
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max({1.0, std::abs(lower()), std::abs(upper())});
    if (t < lower() && t >= lower() - slack) t = lower();
    if (t > upper() && t <= upper() + slack) t = upper();
    return t;
  }

  /// j-th derivative with respect to the original coordinate x.
  double eval(double x, int j = 0) const {
    const double t = to_internal(x);
    return eval_segment(segment_index(t), t, j) * std::pow(map_.scale, j);
  }

  double operator()(double x) const { return eval(x, 0); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> centers_;
  DomainMap map_;
  CoefficientMatrix coefficients_;

  void validate_layout() {
    if (breakpoints_.size() < 2)
      throw ConfigError("spline: at least two breakpoints required");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (!std::isfinite(breakpoints_[i]))
        throw ConfigError("spline: non-finite breakpoint");
      if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
        throw ConfigError("spline: breakpoints must be strictly increasing");
    }
    if (!(map_.scale != 0.0) || !std::isfinite(map_.scale) || !std::isfinite(map_.offset))
      throw ConfigError("spline: domain map must be finite and invertible");
    centers_.resize(breakpoints_.size() - 1);
    for (std::size_t i = 0; i < centers_.size(); ++i)
      centers_[i] = 0.5 * (breakpoints_[i] + breakpoints_[i + 1]);
  }
};

}  // namespace ckspline

#endif  // CKSPLINE_SPLINE_HPP
