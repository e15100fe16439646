#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "psog/errors.hpp"
#include "psog/geometry.hpp"
#include "psog/image.hpp"

namespace psog {

enum class AreaShape { Rectangle, CircularGaussian };

/// One photosensor's sensitive region on the projected eye plane. Offsets are
/// in mm from the sensor-frame anchor (the image's optical_center), x toward
/// the temporal side, y downward. Rectangles carry (length, width, angle);
/// circular areas carry (diameter) and are realized as Gaussian-modulated
/// square windows (no hard mask).
struct DetectionArea {
  AreaShape shape = AreaShape::Rectangle;
  double center_x_mm = 0.0;
  double center_y_mm = 0.0;
  double length_mm = 0.0; // rectangle extent along its own axis, at `angle` from horizontal
  double width_mm = 0.0;  // rectangle extent across that axis
  double angle_deg = 0.0; // positive tilts the length axis upward on its +x end
  double diameter_mm = 0.0;

  static DetectionArea rectangle(double cx, double cy, double length, double width,
                                 double angle = 0.0) {
    DetectionArea a;
    a.shape = AreaShape::Rectangle;
    a.center_x_mm = cx;
    a.center_y_mm = cy;
    a.length_mm = length;
    a.width_mm = width;
    a.angle_deg = angle;
    return a;
  }

  static DetectionArea circular(double cx, double cy, double diameter) {
    DetectionArea a;
    a.shape = AreaShape::CircularGaussian;
    a.center_x_mm = cx;
    a.center_y_mm = cy;
    a.diameter_mm = diameter;
    return a;
  }

  void validate() const {
    if (shape == AreaShape::Rectangle) {
      if (!(length_mm > 0.0) || !(width_mm > 0.0))
        throw ConfigError("detection area: rectangle length and width must be > 0");
      if (angle_deg < -90.0 || angle_deg > 90.0)
        throw ConfigError("detection area: angle must lie in [-90, 90] degrees");
      if (diameter_mm != 0.0)
        throw ConfigError("detection area: diameter is not a rectangle field");
    } else {
      if (!(diameter_mm > 0.0))
        throw ConfigError("detection area: circular diameter must be > 0");
      if (length_mm != 0.0 || width_mm != 0.0 || angle_deg != 0.0)
        throw ConfigError("detection area: length/width/angle are not circular fields");
    }
  }
};

/// Separable Gaussian window modulation: peak 1 at the window center,
/// sigma = half the window size per axis (in pixels), truncated at the
/// window bounds and deliberately not renormalized; the binning formula
/// divides by the pixel count instead.
inline std::vector<double> gaussian_window_weights(int rows, int cols) {
  if (rows < 1 || cols < 1)
    throw ContractError("gaussian_window_weights: rows and cols must be >= 1");
  const double sx = cols * 0.5;
  const double sy = rows * 0.5;
  std::vector<double> wc(cols), wr(rows);
  for (int c = 0; c < cols; ++c) {
    const double d = c - (cols - 1) * 0.5;
    wc[c] = std::exp(-d * d / (2.0 * sx * sx));
  }
  for (int r = 0; r < rows; ++r) {
    const double d = r - (rows - 1) * 0.5;
    wr[r] = std::exp(-d * d / (2.0 * sy * sy));
  }
  std::vector<double> w(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) w[static_cast<std::size_t>(r) * cols + c] = wr[r] * wc[c];
  return w;
}

namespace detail {

struct WindowSpan {
  int row0, col0, rows, cols;
};

/// Integer pixel window of the given mm size whose center is nearest the
/// area center. Continuous pixel coordinates (pixel i spans [i, i+1)).
inline WindowSpan snap_window(const EyeImage& img, double cx_mm, double cy_mm, double x_mm,
                              double y_mm) {
  const int wcols = std::max(1L, std::lround(x_mm / img.mm_per_pixel_x));
  const int wrows = std::max(1L, std::lround(y_mm / img.mm_per_pixel_y));
  const double ccol = img.optical_center_col + cx_mm / img.mm_per_pixel_x;
  const double crow = img.optical_center_row + cy_mm / img.mm_per_pixel_y;
  return {static_cast<int>(std::lround(crow - wrows * 0.5)),
          static_cast<int>(std::lround(ccol - wcols * 0.5)), wrows, wcols};
}

/// Areas far beyond the frame read pure fill, which is almost certainly a
/// misconfiguration; "far" = beyond one full image extent of padding.
inline void check_padded_frame(const EyeImage& img, int row0, int col0, int rows, int cols) {
  if (row0 >= 2 * img.rows || row0 + rows <= -img.rows || col0 >= 2 * img.cols ||
      col0 + cols <= -img.cols)
    throw GeometryError("compute_sensor_output: detection area lies entirely outside the padded "
                        "image frame (window rows [" +
                        std::to_string(row0) + ", " + std::to_string(row0 + rows) + "), cols [" +
                        std::to_string(col0) + ", " + std::to_string(col0 + cols) + "))");
}

} // namespace detail

/// Simulated photosensor output: window binning of the image region under the
/// detection area, optionally Gaussian-modulated, divided by the window pixel
/// count. Pixels beyond the frame read the image's outside_fill (periocular
/// skin). Tilted rectangles rasterize by point-in-rectangle tests on the
/// supersample grid; `supersampling` should match the renderer's factor.
inline double compute_sensor_output(const EyeImage& img, const DetectionArea& area,
                                    int supersampling = 4) {
  area.validate();
  if (img.rows <= 0 || img.cols <= 0)
    throw ContractError("compute_sensor_output: empty image");

  if (area.shape == AreaShape::CircularGaussian) {
    const auto w = detail::snap_window(img, area.center_x_mm, area.center_y_mm, area.diameter_mm,
                                       area.diameter_mm);
    detail::check_padded_frame(img, w.row0, w.col0, w.rows, w.cols);
    const std::vector<double> weights = gaussian_window_weights(w.rows, w.cols);
    double sum = 0.0;
    for (int r = 0; r < w.rows; ++r)
      for (int c = 0; c < w.cols; ++c)
        sum += weights[static_cast<std::size_t>(r) * w.cols + c] *
               img.at_or_fill(w.row0 + r, w.col0 + c);
    return sum / (static_cast<double>(w.rows) * w.cols);
  }

  // Axis-aligned rectangles snap to an integer window and take a plain mean.
  if (area.angle_deg == 0.0 || area.angle_deg == 90.0 || area.angle_deg == -90.0) {
    const bool upright = area.angle_deg != 0.0; // length axis vertical
    const double x_mm = upright ? area.width_mm : area.length_mm;
    const double y_mm = upright ? area.length_mm : area.width_mm;
    const auto w = detail::snap_window(img, area.center_x_mm, area.center_y_mm, x_mm, y_mm);
    detail::check_padded_frame(img, w.row0, w.col0, w.rows, w.cols);
    double sum = 0.0;
    for (int r = 0; r < w.rows; ++r)
      for (int c = 0; c < w.cols; ++c) sum += img.at_or_fill(w.row0 + r, w.col0 + c);
    return sum / (static_cast<double>(w.rows) * w.cols);
  }

  // Tilted rectangle: supersampled coverage, effective pixel count = coverage sum.
  if (supersampling < 1)
    throw ContractError("compute_sensor_output: supersampling must be >= 1");
  const double ccol = img.optical_center_col + area.center_x_mm / img.mm_per_pixel_x;
  const double crow = img.optical_center_row + area.center_y_mm / img.mm_per_pixel_y;
  const double ca = std::cos(area.angle_deg * kDegToRad);
  const double sa = std::sin(area.angle_deg * kDegToRad);
  const double hl = 0.5 * area.length_mm;
  const double hw = 0.5 * area.width_mm;
  const double ext_x = (std::abs(hl * ca) + std::abs(hw * sa)) / img.mm_per_pixel_x;
  const double ext_y = (std::abs(hl * sa) + std::abs(hw * ca)) / img.mm_per_pixel_y;
  const int col0 = static_cast<int>(std::floor(ccol - ext_x));
  const int col1 = static_cast<int>(std::ceil(ccol + ext_x));
  const int row0 = static_cast<int>(std::floor(crow - ext_y));
  const int row1 = static_cast<int>(std::ceil(crow + ext_y));
  detail::check_padded_frame(img, row0, col0, row1 - row0, col1 - col0);

  const int ss = supersampling;
  std::vector<double> offsets(ss);
  for (int i = 0; i < ss; ++i) offsets[i] = (i + 0.5) / ss;

  double weighted = 0.0;
  double coverage_total = 0.0;
  for (int r = row0; r < row1; ++r) {
    for (int c = col0; c < col1; ++c) {
      int inside = 0;
      for (int a = 0; a < ss; ++a) {
        const double dy = (r + offsets[a] - crow) * img.mm_per_pixel_y;
        for (int b = 0; b < ss; ++b) {
          const double dx = (c + offsets[b] - ccol) * img.mm_per_pixel_x;
          // Rectangle frame: length axis u = (ca, -sa) with y pointing down.
          const double u = dx * ca - dy * sa;
          const double v = dx * sa + dy * ca;
          if (std::abs(u) <= hl && std::abs(v) <= hw) ++inside;
        }
      }
      if (inside) {
        const double cov = static_cast<double>(inside) / (ss * ss);
        weighted += cov * img.at_or_fill(r, c);
        coverage_total += cov;
      }
    }
  }
  if (coverage_total <= 0.0)
    throw GeometryError("compute_sensor_output: tilted rectangle covers no pixel samples");
  return weighted / coverage_total;
}

inline constexpr double kElectronCharge = 1.602176634e-19; // C
inline constexpr double kBoltzmann = 1.380649e-23;         // J/K

/// Photodiode electrical model: photocurrent responsivity * power minus the
/// exponential diode term. noise_stddev is a hook for callers that add
/// measurement noise; this function itself is deterministic.
struct PhotodiodeConfig {
  double responsivity_a_per_w = 0.5;
  double reverse_saturation_current_a = 1e-9;
  double bias_voltage_v = 0.0; // zero = photovoltaic mode
  double temperature_k = 298.15;
  double noise_stddev_a = 0.0;

  void validate() const {
    if (!(responsivity_a_per_w > 0.0))
      throw ConfigError("photodiode: responsivity must be > 0");
    if (!(temperature_k > 0.0)) throw ConfigError("photodiode: temperature must be > 0");
    if (noise_stddev_a < 0.0) throw ConfigError("photodiode: noise_stddev must be >= 0");
  }
};

inline double photodiode_current(const PhotodiodeConfig& config, double incident_power_w) {
  config.validate();
  if (incident_power_w < 0.0)
    throw ContractError("photodiode_current: incident power must be >= 0");
  const double photo = config.responsivity_a_per_w * incident_power_w;
  // expm1 keeps the zero-bias case exactly zero, so photovoltaic output is
  // responsivity * power to machine precision.
  const double diode =
      config.reverse_saturation_current_a *
      std::expm1(kElectronCharge * config.bias_voltage_v / (kBoltzmann * config.temperature_k));
  return photo - diode;
}

} // namespace psog
