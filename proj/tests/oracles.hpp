#pragma once

// Independent reference implementations used to freeze expected values.
// These deliberately re-derive results from the contracts (plain loops,
// closed-form solves) and never call the code paths they check.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "psog/image.hpp"
#include "psog/sensing.hpp"

namespace oracle {

// Brute-force window binning. Recomputes Gaussian weights from the defining
// expression and walks every pixel of the snapped window (or the tilted
// rectangle's bounding box) in a plain double loop.
inline double sensor_output(const psog::EyeImage& img, const psog::DetectionArea& area,
                            int supersampling) {
  const double ccol = img.optical_center_col + area.center_x_mm / img.mm_per_pixel_x;
  const double crow = img.optical_center_row + area.center_y_mm / img.mm_per_pixel_y;

  auto snapped = [&](double x_mm, double y_mm, int& row0, int& col0, int& rows, int& cols) {
    cols = std::max(1L, std::lround(x_mm / img.mm_per_pixel_x));
    rows = std::max(1L, std::lround(y_mm / img.mm_per_pixel_y));
    row0 = static_cast<int>(std::lround(crow - rows * 0.5));
    col0 = static_cast<int>(std::lround(ccol - cols * 0.5));
  };

  if (area.shape == psog::AreaShape::CircularGaussian) {
    int row0, col0, rows, cols;
    snapped(area.diameter_mm, area.diameter_mm, row0, col0, rows, cols);
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double dy = r - (rows - 1) * 0.5;
        const double dx = c - (cols - 1) * 0.5;
        const double sy = rows * 0.5, sx = cols * 0.5;
        const double w = std::exp(-dy * dy / (2.0 * sy * sy)) * std::exp(-dx * dx / (2.0 * sx * sx));
        sum += w * img.at_or_fill(row0 + r, col0 + c);
      }
    }
    return sum / (static_cast<double>(rows) * cols);
  }

  if (area.angle_deg == 0.0 || area.angle_deg == 90.0 || area.angle_deg == -90.0) {
    const bool upright = area.angle_deg != 0.0;
    int row0, col0, rows, cols;
    snapped(upright ? area.width_mm : area.length_mm, upright ? area.length_mm : area.width_mm,
            row0, col0, rows, cols);
    double sum = 0.0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) sum += img.at_or_fill(row0 + r, col0 + c);
    return sum / (static_cast<double>(rows) * cols);
  }

  const double ca = std::cos(area.angle_deg * psog::kDegToRad);
  const double sa = std::sin(area.angle_deg * psog::kDegToRad);
  const double hl = 0.5 * area.length_mm, hw = 0.5 * area.width_mm;
  const double ext_x = (std::abs(hl * ca) + std::abs(hw * sa)) / img.mm_per_pixel_x;
  const double ext_y = (std::abs(hl * sa) + std::abs(hw * ca)) / img.mm_per_pixel_y;
  double weighted = 0.0, coverage = 0.0;
  for (int r = static_cast<int>(std::floor(crow - ext_y));
       r < static_cast<int>(std::ceil(crow + ext_y)); ++r) {
    for (int c = static_cast<int>(std::floor(ccol - ext_x));
         c < static_cast<int>(std::ceil(ccol + ext_x)); ++c) {
      int inside = 0;
      for (int a = 0; a < supersampling; ++a) {
        for (int b = 0; b < supersampling; ++b) {
          const double dy = (r + (a + 0.5) / supersampling - crow) * img.mm_per_pixel_y;
          const double dx = (c + (b + 0.5) / supersampling - ccol) * img.mm_per_pixel_x;
          const double u = dx * ca - dy * sa;
          const double v = dx * sa + dy * ca;
          if (std::abs(u) <= hl && std::abs(v) <= hw) ++inside;
        }
      }
      if (inside) {
        const double cov = static_cast<double>(inside) / (supersampling * supersampling);
        weighted += cov * img.at_or_fill(r, c);
        coverage += cov;
      }
    }
  }
  return weighted / coverage;
}

// Quadratic through three points via Cramer's rule on the Vandermonde system.
inline std::array<double, 3> quadratic_through(const std::array<double, 3>& x,
                                               const std::array<double, 3>& y) {
  auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                 double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
  };
  const double d = det3(x[0] * x[0], x[0], 1, x[1] * x[1], x[1], 1, x[2] * x[2], x[2], 1);
  const double da = det3(y[0], x[0], 1, y[1], x[1], 1, y[2], x[2], 1);
  const double db = det3(x[0] * x[0], y[0], 1, x[1] * x[1], y[1], 1, x[2] * x[2], y[2], 1);
  const double dc = det3(x[0] * x[0], x[0], y[0], x[1] * x[1], x[1], y[1], x[2] * x[2], x[2], y[2]);
  return {da / d, db / d, dc / d};
}

// Trade-off search by exhaustive threshold walk over the sorted value grid,
// with the same stopping rule as the library (used on 1-D synthetic cases).
inline std::size_t tradeoff_1d(const std::vector<double>& f1, const std::vector<double>& f2) {
  auto sorted_distinct = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const std::vector<double> s1 = sorted_distinct(f1), s2 = sorted_distinct(f2);
  const double min1 = s1.front(), min2 = s2.front();
  const double den1 = min1 > 0 ? min1 : (s1.back() - min1 > 0 ? s1.back() - min1 : 1.0);
  const double den2 = min2 > 0 ? min2 : (s2.back() - min2 > 0 ? s2.back() - min2 : 1.0);
  double t1 = min1, t2 = min2;
  while (true) {
    std::vector<std::size_t> meet;
    for (std::size_t i = 0; i < f1.size(); ++i)
      if (f1[i] <= t1 && f2[i] <= t2) meet.push_back(i);
    if (!meet.empty()) {
      std::size_t best = meet[0];
      double best_score = 1e300;
      for (std::size_t i : meet) {
        const double score = (f1[i] - min1) / den1 + (f2[i] - min2) / den2;
        if (score < best_score) {
          best_score = score;
          best = i;
        }
      }
      return best;
    }
    auto next_above = [](const std::vector<double>& s, double t) {
      for (double v : s)
        if (v > t) return v;
      return t;
    };
    const double n1 = next_above(s1, t1), n2 = next_above(s2, t2);
    const double r1 = n1 > t1 ? (n1 - min1) / den1 : 1e300;
    const double r2 = n2 > t2 ? (n2 - min2) / den2 : 1e300;
    if (r1 <= r2 * (1 + 1e-12)) t1 = n1;
    if (r2 <= r1 * (1 + 1e-12)) t2 = n2;
  }
}

// Deterministic xorshift RNG for reproducible random test data.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 1) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) / 9007199254740992.0);
  }
  int uniform_int(int lo, int hi) { // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline psog::EyeImage random_image(Rng& rng, int rows, int cols, double mmpp) {
  psog::EyeImage img;
  img.rows = rows;
  img.cols = cols;
  img.intensities.resize(static_cast<std::size_t>(rows) * cols);
  for (double& v : img.intensities) v = rng.uniform(0.0, 1.0);
  img.mm_per_pixel_x = mmpp;
  img.mm_per_pixel_y = mmpp;
  img.optical_center_row = rows * 0.5;
  img.optical_center_col = cols * 0.5;
  img.outside_fill = rng.uniform(0.0, 1.0);
  return img;
}

} // namespace oracle
