#pragma once

#include <cmath>
#include <string>

#include "psog/errors.hpp"
#include "psog/geometry.hpp"

namespace psog {

/// Parametric left-eye model: eyeball sphere, iris/pupil spherical caps,
/// skin backplane, optional static elliptical eyelid aperture.
///
/// Reflectances are flat per region; their absolute values are absorbed by
/// calibration, only the ordering sclera > iris > pupil matters.
struct EyeModelConfig {
  double eyeball_diameter_mm = 24.0;
  double iris_diameter_mm = 9.5;
  double reflectance_sclera = 0.85;
  double reflectance_iris = 0.25;
  double reflectance_pupil = 0.05;
  double reflectance_skin = 0.65;
  bool eyelids_enabled = true;
  double eyelid_aperture_width_mm = 28.0;
  double eyelid_aperture_height_mm = 16.0;
  int supersampling = 4;

  double eyeball_radius_mm() const { return 0.5 * eyeball_diameter_mm; }
  double iris_radius_mm() const { return 0.5 * iris_diameter_mm; }

  void validate() const {
    if (!(eyeball_diameter_mm > iris_diameter_mm && iris_diameter_mm > 0.0))
      throw ConfigError("eye model: requires eyeball_diameter > iris_diameter > 0 (got " +
                        std::to_string(eyeball_diameter_mm) + ", " +
                        std::to_string(iris_diameter_mm) + ")");
    for (double r : {reflectance_sclera, reflectance_iris, reflectance_pupil, reflectance_skin})
      if (!(r >= 0.0 && r <= 1.0))
        throw ConfigError("eye model: reflectances must lie in [0,1]");
    if (!(reflectance_sclera > reflectance_iris && reflectance_iris > reflectance_pupil))
      throw ConfigError("eye model: requires reflectance_sclera > reflectance_iris > "
                        "reflectance_pupil (no limbus contrast otherwise)");
    if (eyelid_aperture_width_mm <= 0.0 || eyelid_aperture_height_mm <= 0.0)
      throw ConfigError("eye model: eyelid aperture dimensions must be positive");
    if (supersampling < 1)
      throw ConfigError("eye model: supersampling must be >= 1");
  }
};

/// Pinhole camera facing the eye along -z. Sensor shifts are modeled as the
/// sensor frame sliding in its own plane: content translates by
/// -shift_x/mm_per_pixel columns and +shift_y/mm_per_pixel rows.
///
/// shift_x positive = sensor moves away from the nasal side (+x, temporal);
/// shift_y positive = sensor moves upward. (0,0) is the calibration position.
struct CameraConfig {
  double distance_to_eye_mm = 50.0;
  double field_of_view_deg = 45.0;
  int image_rows = 240;
  int image_cols = 320;
  double shift_x_mm = 0.0;
  double shift_y_mm = 0.0;

  /// Scale at the plane tangent to the cornea apex; FOV spans the columns,
  /// pixels are square.
  double mm_per_pixel() const {
    return 2.0 * distance_to_eye_mm * std::tan(0.5 * field_of_view_deg * kDegToRad) /
           static_cast<double>(image_cols);
  }

  void validate() const {
    if (!(distance_to_eye_mm > 0.0))
      throw ConfigError("camera: distance_to_eye must be > 0");
    if (!(field_of_view_deg > 0.0 && field_of_view_deg < 180.0))
      throw ConfigError("camera: field_of_view must lie in (0, 180) degrees");
    if (image_rows <= 0 || image_cols <= 0)
      throw ConfigError("camera: image_rows and image_cols must be > 0");
  }
};

enum class LightingMode { Ambient, TwoPoint };

/// Ambient lighting keeps the mirror symmetries of the scene exact; the
/// two-point mode adds Lambert shading from two sources that ride on the
/// sensor frame.
struct LightingConfig {
  LightingMode mode = LightingMode::Ambient;
  double ambient_level = 1.0;  // ambient mode shading factor
  double ambient_floor = 0.25; // two-point mode base term
  double source_strength = 0.55;
  Vec3 source_a{-14.0, 10.0, 42.0}; // scene mm; y positive = downward
  Vec3 source_b{14.0, 10.0, 42.0};
  bool sources_follow_sensor = true;

  void validate() const {
    if (!(ambient_level >= 0.0 && ambient_level <= 1.0))
      throw ConfigError("lighting: ambient_level must lie in [0,1]");
    if (ambient_floor < 0.0 || source_strength < 0.0)
      throw ConfigError("lighting: ambient_floor and source_strength must be >= 0");
  }
};

/// Ground-truth pose of the simulated eye. Yaw positive = toward the nasal
/// side of the left-eye model (-x); pitch positive = downward (+y).
struct EyeState {
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double pupil_diameter_mm = 4.0;
};

inline void validate_state(const EyeState& state, const EyeModelConfig& model) {
  if (std::abs(state.yaw_deg) > 45.0 || std::abs(state.pitch_deg) > 45.0)
    throw ConfigError("eye state: |yaw| and |pitch| must be <= 45 degrees (renderer envelope)");
  if (!(state.pupil_diameter_mm > 0.0 && state.pupil_diameter_mm < model.iris_diameter_mm))
    throw ConfigError("eye state: pupil_diameter must lie in (0, iris_diameter)");
}

} // namespace psog
