#pragma once

#include <algorithm>
#include <cmath>

#include "psog/errors.hpp"
#include "psog/eye_model.hpp"
#include "psog/geometry.hpp"
#include "psog/image.hpp"

namespace psog {

/// Point on the eyeball surface in the eye-fixed frame: polar angle from the
/// optical axis, azimuth from +x (temporal) toward +y (down). The cornea apex
/// is polar = 0.
struct SphericalSurfacePoint {
  double polar_deg = 0.0;
  double azimuth_deg = 0.0;
};

struct PixelCoord {
  double row = 0.0;
  double col = 0.0;
};

namespace detail {

/// Shared projection constants. The pinhole sits at (0, 0, R + distance) and
/// never moves; sensor shift slides the image window instead, so content
/// translation under shift is depth-independent (exactly -shift/mm_per_pixel).
struct Projection {
  double eye_radius;
  double pinhole_z;
  double distance;
  double mmpp;
  int rows, cols;
  double shift_x_px; // window slide, pixels
  double shift_y_px;

  Projection(const EyeModelConfig& model, const CameraConfig& camera)
      : eye_radius(model.eyeball_radius_mm()),
        pinhole_z(model.eyeball_radius_mm() + camera.distance_to_eye_mm),
        distance(camera.distance_to_eye_mm), mmpp(camera.mm_per_pixel()),
        rows(camera.image_rows), cols(camera.image_cols),
        shift_x_px(camera.shift_x_mm / mmpp), shift_y_px(camera.shift_y_mm / mmpp) {}

  /// World point -> continuous pixel coordinates.
  PixelCoord project(const Vec3& p) const {
    const double depth = pinhole_z - p.z;
    const double u = p.x * distance / depth; // mm on the apex tangent plane
    const double v = p.y * distance / depth;
    return {rows * 0.5 + v / mmpp + shift_y_px, cols * 0.5 + u / mmpp - shift_x_px};
  }

  /// Continuous pixel coordinates -> tangent-plane mm (render inverse).
  void unproject(double row, double col, double& u, double& v) const {
    u = (col + shift_x_px - cols * 0.5) * mmpp;
    v = (row - shift_y_px - rows * 0.5) * mmpp;
  }
};

} // namespace detail

/// Projects an eye-surface point through the pinhole for the given pose and
/// sensor shift. Throws GeometryError for points on the hemisphere occluded
/// by the eyeball itself.
inline PixelCoord project_eye_point(const EyeModelConfig& model, const CameraConfig& camera,
                                    const EyeState& state, const SphericalSurfacePoint& sp) {
  model.validate();
  camera.validate();
  validate_state(state, model);

  const double R = model.eyeball_radius_mm();
  const double polar = sp.polar_deg * kDegToRad;
  const double az = sp.azimuth_deg * kDegToRad;
  const Vec3 eye_point{R * std::sin(polar) * std::cos(az), R * std::sin(polar) * std::sin(az),
                       R * std::cos(polar)};
  const EyeRotation rot(state.yaw_deg, state.pitch_deg);
  const Vec3 p = rot.world_from_eye(eye_point);

  const detail::Projection proj(model, camera);
  // Visible iff the outward normal faces the pinhole: p . C > R^2.
  if (!(p.z * proj.pinhole_z > R * R))
    throw GeometryError("project_eye_point: surface point is on the occluded hemisphere");
  return proj.project(p);
}

/// Procedural render: eyeball sphere with iris/pupil caps, skin backplane at
/// z = 0, optional static elliptical eyelid aperture, supersampled
/// anti-aliasing. Deterministic; identical inputs give bit-identical images.
inline EyeImage render_eye_image(const EyeModelConfig& model, const CameraConfig& camera,
                                 const EyeState& state, const LightingConfig& lighting) {
  model.validate();
  camera.validate();
  lighting.validate();
  validate_state(state, model);

  const detail::Projection proj(model, camera);
  const double R = proj.eye_radius;
  const EyeRotation rot(state.yaw_deg, state.pitch_deg);

  // Region boundaries as cos(polar angle); caps are chord-diameter discs.
  const double sin_iris = model.iris_radius_mm() / R;
  const double cos_iris = std::sqrt(1.0 - sin_iris * sin_iris);
  const double sin_pupil = 0.5 * state.pupil_diameter_mm / R;
  const double cos_pupil = std::sqrt(1.0 - sin_pupil * sin_pupil);

  const double lid_a = 0.5 * model.eyelid_aperture_width_mm;
  const double lid_b = 0.5 * model.eyelid_aperture_height_mm;

  const bool two_point = lighting.mode == LightingMode::TwoPoint;
  Vec3 light_a = lighting.source_a;
  Vec3 light_b = lighting.source_b;
  if (two_point && lighting.sources_follow_sensor) {
    const Vec3 rig_shift{camera.shift_x_mm, -camera.shift_y_mm, 0.0};
    light_a = light_a + rig_shift;
    light_b = light_b + rig_shift;
  }

  auto shade = [&](const Vec3& p, const Vec3& normal) {
    if (!two_point) return lighting.ambient_level;
    double s = lighting.ambient_floor;
    for (const Vec3* L : {&light_a, &light_b}) {
      const Vec3 dir = (*L - p).normalized();
      s += lighting.source_strength * std::max(0.0, normal.dot(dir));
    }
    return std::min(s, 1.0);
  };

  auto sample = [&](double row, double col) {
    double u, v;
    proj.unproject(row, col, u, v);
    const Vec3 origin{0.0, 0.0, proj.pinhole_z};
    const Vec3 dir = Vec3{u, v, -proj.distance}.normalized();

    // Nearest sphere intersection, else the skin backplane z = 0.
    const double b = origin.z * dir.z;
    const double disc = b * b - (origin.z * origin.z - R * R);
    double reflectance;
    Vec3 p, normal;
    if (disc >= 0.0) {
      const double t = -b - std::sqrt(disc);
      p = origin + dir * t;
      normal = p * (1.0 / R);
      if (model.eyelids_enabled &&
          (p.x / lid_a) * (p.x / lid_a) + (p.y / lid_b) * (p.y / lid_b) > 1.0) {
        reflectance = model.reflectance_skin; // eyelid drapes the globe
      } else {
        const Vec3 q = rot.eye_from_world(p);
        if (q.z >= R * cos_pupil)
          reflectance = model.reflectance_pupil;
        else if (q.z >= R * cos_iris)
          reflectance = model.reflectance_iris;
        else
          reflectance = model.reflectance_sclera;
      }
    } else {
      const double t = -origin.z / dir.z;
      p = origin + dir * t;
      normal = Vec3{0.0, 0.0, 1.0};
      reflectance = model.reflectance_skin;
    }
    return std::clamp(reflectance * shade(p, normal), 0.0, 1.0);
  };

  const int ss = model.supersampling;
  const double inv_count = 1.0 / (static_cast<double>(ss) * ss);
  std::vector<double> offsets(ss);
  for (int i = 0; i < ss; ++i) offsets[i] = (i + 0.5) / ss;

  EyeImage img;
  img.rows = proj.rows;
  img.cols = proj.cols;
  img.intensities.resize(static_cast<std::size_t>(proj.rows) * proj.cols);
  img.mm_per_pixel_x = proj.mmpp;
  img.mm_per_pixel_y = proj.mmpp;
  img.optical_center_row = proj.rows * 0.5;
  img.optical_center_col = proj.cols * 0.5;
  img.outside_fill = std::clamp(
      model.reflectance_skin * (two_point ? lighting.ambient_floor : lighting.ambient_level), 0.0,
      1.0);

  for (int r = 0; r < proj.rows; ++r) {
    for (int c = 0; c < proj.cols; ++c) {
      double acc = 0.0;
      for (int a = 0; a < ss; ++a) {
        const double row = r + offsets[a];
        // Column subsamples accumulate in mirror pairs so a yaw sign flip
        // mirrors the image bit-exactly (pair sums are commutative).
        for (int bcol = 0; bcol < ss / 2; ++bcol)
          acc += sample(row, c + offsets[bcol]) + sample(row, c + offsets[ss - 1 - bcol]);
        if (ss & 1) acc += sample(row, c + offsets[ss / 2]);
      }
      img.at(r, c) = acc * inv_count;
    }
  }
  return img;
}

} // namespace psog
