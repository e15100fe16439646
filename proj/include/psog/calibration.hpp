#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psog/errors.hpp"

namespace psog {

/// One axis of the quadratic raw -> degrees mapping, plus the RMS fit
/// residual at the calibration points (zero for exactly three points).
struct AxisFit {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double residual_deg = 0.0;

  double operator()(double raw) const { return (a * raw + b) * raw + c; }
};

struct CalibrationModel {
  AxisFit horizontal;
  AxisFit vertical;
};

/// Least-squares quadratic through (raw, degrees) points; exact interpolation
/// for three distinct abscissae. Abscissae are centered and scaled to unit
/// range before solving so tiny raw differentials (O(1e-3)) keep the normal
/// system well conditioned.
inline AxisFit fit_axis(std::span<const std::pair<double, double>> points,
                        const std::string& axis_label = "axis") {
  if (points.size() < 3)
    throw FitError("fit_axis(" + axis_label + "): need at least 3 points, got " +
                   std::to_string(points.size()));

  double lo = points[0].first, hi = points[0].first;
  for (const auto& [x, y] : points) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(hi > lo))
    throw FitError("fit_axis(" + axis_label + "): degenerate abscissae (all raw values equal " +
                   std::to_string(lo) + ")");
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  // Normal equations for the scaled basis {1, t, t^2}, t in [-1, 1].
  std::array<std::array<double, 4>, 3> m{}; // augmented 3x4
  for (const auto& [x, y] : points) {
    const double t = (x - mid) / half;
    const std::array<double, 3> phi{1.0, t, t * t};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += phi[i] * phi[j];
      m[i][3] += phi[i] * y;
    }
  }

  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-12)
      throw FitError("fit_axis(" + axis_label +
                     "): rank-deficient normal system (degenerate abscissae)");
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
    }
  }
  const double c0 = m[0][3] / m[0][0];
  const double c1 = m[1][3] / m[1][1];
  const double c2 = m[2][3] / m[2][2];

  // Expand a*t^2 + b*t + c with t = (x - mid)/half back to raw coefficients.
  AxisFit fit;
  fit.a = c2 / (half * half);
  fit.b = c1 / half - 2.0 * c2 * mid / (half * half);
  fit.c = c0 - c1 * mid / half + c2 * mid * mid / (half * half);

  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double e = fit(x) - y;
    ss += e * e;
  }
  fit.residual_deg = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

/// Evaluates the fitted per-axis quadratics on a raw output pair.
inline std::pair<double, double> apply_calibration(const CalibrationModel& model, double h_raw,
                                                   double v_raw) {
  return {model.horizontal(h_raw), model.vertical(v_raw)};
}

} // namespace psog
