#pragma once

#include <cmath>

namespace psog {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
};

/// Eye orientation as yaw (about the vertical axis, positive toward -x)
/// followed by pitch (about the horizontal axis, positive toward +y).
/// Scene frame: x = image columns (right), y = image rows (down),
/// z toward the camera. world = R_yaw * R_pitch * eye.
class EyeRotation {
public:
  EyeRotation(double yaw_deg, double pitch_deg)
      : cy_(std::cos(yaw_deg * kDegToRad)), sy_(std::sin(yaw_deg * kDegToRad)),
        cp_(std::cos(pitch_deg * kDegToRad)), sp_(std::sin(pitch_deg * kDegToRad)) {}

  /// Primary-position optical axis (0,0,1) mapped to the world frame.
  Vec3 optical_axis() const { return world_from_eye({0.0, 0.0, 1.0}); }

  Vec3 world_from_eye(const Vec3& e) const {
    // pitch about x: (x, y, z) -> (x, y*cp + z*sp, -y*sp + z*cp)
    const Vec3 p{e.x, e.y * cp_ + e.z * sp_, -e.y * sp_ + e.z * cp_};
    // yaw about y: (x, y, z) -> (x*cy - z*sy, y, x*sy + z*cy)
    return {p.x * cy_ - p.z * sy_, p.y, p.x * sy_ + p.z * cy_};
  }

  Vec3 eye_from_world(const Vec3& w) const {
    const Vec3 p{w.x * cy_ + w.z * sy_, w.y, -w.x * sy_ + w.z * cy_};
    return {p.x, p.y * cp_ - p.z * sp_, p.y * sp_ + p.z * cp_};
  }

private:
  double cy_, sy_, cp_, sp_;
};

} // namespace psog
