#ifndef CKSPLINE_REPAIR_HPP
#define CKSPLINE_REPAIR_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ckspline/error.hpp"
#include "ckspline/loss.hpp"
#include "ckspline/spline.hpp"

namespace ckspline {

/// Largest acceptable condition estimate of the Hermite system.
inline constexpr double kMaxHermiteCondition = 1e12;

/// Unique polynomial of degree 2k+1 whose derivatives 0..k equal left_derivs
/// at left_x and right_derivs at right_x, returned in powers of (x - center).
///
/// The confluent Vandermonde system is solved on the unit interval
/// u = (x - left_x) / h, then mapped back.
inline std::vector<double> two_point_hermite(double left_x, std::span<const double> left_derivs,
                                             double right_x, std::span<const double> right_derivs,
                                             double center) {
  if (!(left_x < right_x)) throw ConfigError("hermite: left_x must be < right_x");
  if (left_derivs.empty() || left_derivs.size() != right_derivs.size())
    throw ConfigError("hermite: need k+1 prescribed derivatives on each side");
  const int k = static_cast<int>(left_derivs.size()) - 1;
  const int n = 2 * k + 2;
  const double h = right_x - left_x;

  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs(n);
  for (int j = 0; j <= k; ++j) {
    // d^j/du^j = h^j d^j/dx^j
    const double hj = std::pow(h, j);
    for (int t = j; t < n; ++t) {
      system(j, t) = monomial_derivative(t, j, 0.0);
      system(k + 1 + j, t) = monomial_derivative(t, j, 1.0);
    }
    rhs(j) = left_derivs[static_cast<std::size_t>(j)] * hj;
    rhs(k + 1 + j) = right_derivs[static_cast<std::size_t>(j)] * hj;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kMaxHermiteCondition)
    throw ConditioningError("hermite: system with k = " + std::to_string(k) +
                            " is numerically singular; use a smaller k or rescale segments");
  const Eigen::VectorXd unit = lu.solve(rhs);

  std::vector<double> coeffs(static_cast<std::size_t>(n));
  double inv_hp = 1.0;
  for (int t = 0; t < n; ++t) {
    coeffs[static_cast<std::size_t>(t)] = unit(t) * inv_hp;
    inv_hp /= h;
  }
  return rebase(coeffs, left_x, center);
}

struct BoundaryRepair {
  std::size_t left_segment;
  std::size_t right_segment;
  int first_order;
  /// Indexed by derivative order j (entries below first_order are unused).
  std::vector<double> mean_derivatives;
  std::vector<double> pre_defects;
  std::vector<double> post_defects;
};

struct RepairReport {
  int k = 0;
  BoundaryMode boundary_mode = BoundaryMode::open;
  std::vector<BoundaryRepair> boundaries;
  double max_correction = 0.0;

  /// max |post defect| / max(1, |mean derivative|) over all repaired entries.
  double max_relative_post_defect() const {
    double worst = 0.0;
    for (const auto& b : boundaries)
      for (std::size_t j = static_cast<std::size_t>(b.first_order); j < b.post_defects.size(); ++j)
        worst = std::max(worst, std::abs(b.post_defects[j]) /
                                    std::max(1.0, std::abs(b.mean_derivatives[j])));
    return worst;
  }
};

struct RepairResult {
  SplineModel model;
  RepairReport report;
};

namespace detail {

/// Builds the correctors for one boundary from `model` and adds them to `coeffs`.
inline BoundaryRepair correct_boundary(const SplineModel& model, const Boundary& b, int k,
                                       CoefficientMatrix& coeffs, double& max_correction) {
  const auto xi = model.breakpoints();
  const auto mu = model.centers();
  const auto kk = static_cast<std::size_t>(k);
  const std::vector<double> zeros(kk + 1, 0.0);
  BoundaryRepair entry{b.left_segment, b.right_segment, b.first_order,
                       std::vector<double>(kk + 1, 0.0), std::vector<double>(kk + 1, 0.0),
                       std::vector<double>(kk + 1, 0.0)};
  std::vector<double> left_target(kk + 1, 0.0), right_target(kk + 1, 0.0);
  for (int j = b.first_order; j <= k; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double pl = model.eval_segment(b.left_segment, b.left_x, j);
    const double pr = model.eval_segment(b.right_segment, b.right_x, j);
    entry.pre_defects[jj] = pr - pl;
    entry.mean_derivatives[jj] = 0.5 * (pl + pr);
    left_target[jj] = entry.mean_derivatives[jj] - pl;
    right_target[jj] = entry.mean_derivatives[jj] - pr;
  }
  auto add = [&](std::size_t seg, const std::vector<double>& c) {
    for (std::size_t t = 0; t < c.size(); ++t) {
      coeffs(static_cast<Eigen::Index>(seg), static_cast<Eigen::Index>(t)) += c[t];
      max_correction = std::max(max_correction, std::abs(c[t]));
    }
  };
  // The left segment ends at the boundary, the right segment starts there.
  const std::size_t ls = b.left_segment, rs = b.right_segment;
  add(ls, two_point_hermite(xi[ls], zeros, xi[ls + 1], left_target, mu[ls]));
  add(rs, two_point_hermite(xi[rs], right_target, xi[rs + 1], zeros, mu[rs]));
  return entry;
}

inline void check_repairable(const SplineModel& model, int k) {
  if (k < 0) throw ConfigError("repair: k must be >= 0");
  if (model.degree() < 2 * k + 1)
    throw ConfigError("repair: degree " + std::to_string(model.degree()) +
                      " is below 2k+1 = " + std::to_string(2 * k + 1));
}

inline RepairResult apply_repairs(const SplineModel& model, int k, BoundaryMode mode,
                                  const std::vector<Boundary>& boundaries) {
  RepairReport report;
  report.k = k;
  report.boundary_mode = mode;
  CoefficientMatrix coeffs = model.coefficients();
  for (const Boundary& b : boundaries)
    report.boundaries.push_back(correct_boundary(model, b, k, coeffs, report.max_correction));
  SplineModel repaired = model;
  repaired.set_coefficients(std::move(coeffs));
  for (std::size_t i = 0; i < boundaries.size(); ++i)
    for (int j = boundaries[i].first_order; j <= k; ++j)
      report.boundaries[i].post_defects[static_cast<std::size_t>(j)] =
          continuity_defect(repaired, boundaries[i], j);
  return {std::move(repaired), std::move(report)};
}

}  // namespace detail

/// Adds degree-(2k+1) correctors so adjacent segments share the mean of their
/// derivatives 0..k at every boundary (plus the wrap-around boundary in cyclic
/// and periodic mode). Each corrector vanishes to order k at the opposite end
/// of its segment, so other boundaries are left untouched. Correctors are
/// computed from the input model and applied left to right.
inline RepairResult repair_continuity(const SplineModel& model, int k,
                                      BoundaryMode mode = BoundaryMode::open) {
  detail::check_repairable(model, k);
  return detail::apply_repairs(model, k, mode, continuity_boundaries(model, mode));
}

/// Repairs only boundary `index` of continuity_boundaries(model, mode).
inline RepairResult repair_boundary(const SplineModel& model, std::size_t index, int k,
                                    BoundaryMode mode = BoundaryMode::open) {
  detail::check_repairable(model, k);
  const auto all = continuity_boundaries(model, mode);
  if (index >= all.size()) throw ConfigError("repair: boundary index out of range");
  return detail::apply_repairs(model, k, mode, {all[index]});
}

}  // namespace ckspline

#endif  // CKSPLINE_REPAIR_HPP
