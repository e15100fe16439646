#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "psog/errors.hpp"
#include "psog/eye_model.hpp"
#include "psog/sensing.hpp"

namespace psog {

enum class DesignName { D1, D2, D3, D4 };

inline const char* to_string(DesignName n) {
  switch (n) {
    case DesignName::D1: return "D1";
    case DesignName::D2: return "D2";
    case DesignName::D3: return "D3";
    case DesignName::D4: return "D4";
  }
  return "?";
}

inline DesignName design_from_string(const std::string& s) {
  if (s == "D1") return DesignName::D1;
  if (s == "D2") return DesignName::D2;
  if (s == "D3") return DesignName::D3;
  if (s == "D4") return DesignName::D4;
  throw ConfigError("design: unknown name '" + s + "' (expected D1, D2, D3 or D4)");
}

/// Per-design sweep parameters. Lengths/widths/diameters in [0.5, 12] mm,
/// tilt in [5, 45] degrees, array positions in [-2, 2] mm.
struct D1Params {
  double length_mm = 5.5;
  double width_mm = 3.0;
};
struct D2Params {
  double length_mm = 9.0;
  double width_mm = 1.5;
  double angle_deg = 15.0;
};
struct D3Params {
  double diameter_mm = 5.0;
};
struct D4Params {
  double diameter_mm = 3.0;
  double pos_y_mm = 1.0;  // vertical position of the horizontal array, + = upward
  double pos_x_mm = -2.0; // horizontal position of the vertical array, + = temporal
};
using DesignParams = std::variant<D1Params, D2Params, D3Params, D4Params>;

namespace detail {

inline void check_range(const char* key, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi))
    throw ConfigError(std::string("design: ") + key + " = " + std::to_string(v) +
                      " outside the allowed range [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
}

} // namespace detail

inline void validate_params(const DesignParams& params) {
  if (const auto* p = std::get_if<D1Params>(&params)) {
    detail::check_range("length", p->length_mm, 0.5, 12.0);
    detail::check_range("width", p->width_mm, 0.5, 12.0);
  } else if (const auto* p = std::get_if<D2Params>(&params)) {
    detail::check_range("length", p->length_mm, 0.5, 12.0);
    detail::check_range("width", p->width_mm, 0.5, 12.0);
    detail::check_range("angle", p->angle_deg, 5.0, 45.0);
  } else if (const auto* p = std::get_if<D3Params>(&params)) {
    detail::check_range("diameter", p->diameter_mm, 0.5, 12.0);
  } else if (const auto* p = std::get_if<D4Params>(&params)) {
    detail::check_range("diameter", p->diameter_mm, 0.5, 12.0);
    detail::check_range("pos_y", p->pos_y_mm, -2.0, 2.0);
    detail::check_range("pos_x", p->pos_x_mm, -2.0, 2.0);
  }
}

inline DesignName design_of(const DesignParams& params) {
  switch (params.index()) {
    case 0: return DesignName::D1;
    case 1: return DesignName::D2;
    case 2: return DesignName::D3;
    default: return DesignName::D4;
  }
}

/// Anchor geometry for placing detection areas. Unset optionals fall back to
/// limbus-straddling positions derived from the eye model's iris radius.
struct DesignLayout {
  std::optional<double> horizontal_pair_x_mm; // default: iris radius
  std::optional<double> d1_vertical_pair_y_mm; // default: iris radius
  double d2_center_separation_mm = 8.0;
  std::optional<double> d3_vertical_y_mm; // default: 0.7 * iris radius (below center)
  std::optional<double> d3_vertical_x_mm; // default: 0.5 * iris radius
  double d4_spacing_factor = 0.75;        // adjacent center spacing = factor * diameter
  bool d1_vertical_sum = false;           // historical variant: vertical = PS3 + PS4
};

/// A named detection-area layout plus the two de-matrixing coefficient
/// vectors. Immutable after construction.
struct PsogDesign {
  DesignName name = DesignName::D1;
  std::vector<DetectionArea> areas;
  std::vector<double> h_coeffs;
  std::vector<double> v_coeffs;
};

/// Places the detection areas of the requested design around the limbus at
/// the primary position and attaches its combination rule.
///
/// D1: four rectangles straddling the limbus (temporal/nasal pair for the
///     horizontal channel, top/bottom pair for the vertical channel), length
///     oriented along the sensed movement axis.
/// D2: two tilted rectangles mirrored about the vertical axis (difference =
///     horizontal, sum = vertical).
/// D3: four Gaussian circles: the limbus side pair plus a below-center pair
///     combined by addition.
/// D4: two 9-element overlapping circle arrays (horizontal row, vertical
///     column), outer-vs-outer and inner-vs-inner aggregate differences.
inline PsogDesign build_design(const DesignParams& params, const EyeModelConfig& model,
                               const DesignLayout& layout = {}) {
  model.validate();
  validate_params(params);
  const double r_iris = model.iris_radius_mm();

  PsogDesign d;
  d.name = design_of(params);
  if (const auto* p = std::get_if<D1Params>(&params)) {
    const double hx = layout.horizontal_pair_x_mm.value_or(r_iris);
    const double vy = layout.d1_vertical_pair_y_mm.value_or(r_iris);
    // PS1 temporal, PS2 nasal: raw horizontal output rises with yaw.
    d.areas = {DetectionArea::rectangle(+hx, 0.0, p->length_mm, p->width_mm, 0.0),
               DetectionArea::rectangle(-hx, 0.0, p->length_mm, p->width_mm, 0.0),
               DetectionArea::rectangle(0.0, -vy, p->length_mm, p->width_mm, 90.0),
               DetectionArea::rectangle(0.0, +vy, p->length_mm, p->width_mm, 90.0)};
    d.h_coeffs = {+1, -1, 0, 0};
    d.v_coeffs = layout.d1_vertical_sum ? std::vector<double>{0, 0, +1, +1}
                                        : std::vector<double>{0, 0, +1, -1};
  } else if (const auto* p = std::get_if<D2Params>(&params)) {
    const double hx = 0.5 * layout.d2_center_separation_mm;
    d.areas = {DetectionArea::rectangle(-hx, 0.0, p->length_mm, p->width_mm, +p->angle_deg),
               DetectionArea::rectangle(+hx, 0.0, p->length_mm, p->width_mm, -p->angle_deg)};
    d.h_coeffs = {+1, -1};
    d.v_coeffs = {+1, +1};
  } else if (const auto* p = std::get_if<D3Params>(&params)) {
    const double hx = layout.horizontal_pair_x_mm.value_or(r_iris);
    const double vy = layout.d3_vertical_y_mm.value_or(0.7 * r_iris);
    const double vx = layout.d3_vertical_x_mm.value_or(0.5 * r_iris);
    d.areas = {DetectionArea::circular(+hx, 0.0, p->diameter_mm),
               DetectionArea::circular(-hx, 0.0, p->diameter_mm),
               DetectionArea::circular(-vx, vy, p->diameter_mm),
               DetectionArea::circular(+vx, vy, p->diameter_mm)};
    d.h_coeffs = {+1, -1, 0, 0};
    d.v_coeffs = {0, 0, +1, +1};
  } else if (const auto* p = std::get_if<D4Params>(&params)) {
    const double spacing = layout.d4_spacing_factor * p->diameter_mm;
    d.areas.reserve(18);
    for (int i = 0; i < 9; ++i) // horizontal array, left to right; pos_y + = up
      d.areas.push_back(
          DetectionArea::circular((i - 4) * spacing, -p->pos_y_mm, p->diameter_mm));
    for (int i = 0; i < 9; ++i) // vertical array, top to bottom
      d.areas.push_back(
          DetectionArea::circular(p->pos_x_mm, (i - 4) * spacing, p->diameter_mm));
    d.h_coeffs = {+1, +1, 0, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    d.v_coeffs = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, +1, +1, 0, 0, 0, -1, -1, 0};
  }

  for (const auto& a : d.areas) a.validate();
  if (d.h_coeffs.size() != d.areas.size() || d.v_coeffs.size() != d.areas.size())
    throw ContractError("build_design: coefficient vectors must match the area count");
  return d;
}

/// De-matrixing: dot products of the per-sensor raw intensities with the
/// design's signed coefficient vectors.
inline std::pair<double, double> design_raw_output(const PsogDesign& design,
                                                   std::span<const double> sensor_values) {
  if (sensor_values.size() != design.areas.size())
    throw ContractError("design_raw_output: got " + std::to_string(sensor_values.size()) +
                        " sensor values for " + std::to_string(design.areas.size()) + " areas");
  double h = 0.0, v = 0.0;
  for (std::size_t i = 0; i < sensor_values.size(); ++i) {
    h += design.h_coeffs[i] * sensor_values[i];
    v += design.v_coeffs[i] * sensor_values[i];
  }
  return {h, v};
}

} // namespace psog
