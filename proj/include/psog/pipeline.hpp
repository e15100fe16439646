#pragma once

#include <cmath>
#include <list>
#include <memory>
#include <mutex>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psog/calibration.hpp"
#include "psog/designs.hpp"
#include "psog/hash.hpp"
#include "psog/metrics.hpp"
#include "psog/render.hpp"
#include "psog/sensing.hpp"

namespace psog {

/// Deterministic slow pupil dilation during test signals; calibration and
/// shift scans freeze the pupil at calibration_mm instead.
struct PupilDynamics {
  double min_mm = 3.6;
  double max_mm = 4.6;
  double period_s = 10.0;
  double calibration_mm = 4.0;
  bool dilate = true;

  double diameter_at(double t_s) const {
    if (!dilate) return calibration_mm;
    const double mid = 0.5 * (min_mm + max_mm);
    const double amp = 0.5 * (max_mm - min_mm);
    return mid + amp * std::sin(2.0 * kPi * t_s / period_s);
  }

  void validate() const {
    if (!(min_mm > 0.0 && max_mm >= min_mm))
      throw ConfigError("pupil: requires 0 < min <= max");
    if (!(period_s > 0.0)) throw ConfigError("pupil: period must be > 0");
    if (!(calibration_mm > 0.0)) throw ConfigError("pupil: calibration diameter must be > 0");
  }
};

/// Everything the render+sensing stages need for one simulated setup.
struct Scene {
  EyeModelConfig eye;
  CameraConfig camera;
  LightingConfig lighting;
  PupilDynamics pupil;

  void validate() const {
    eye.validate();
    camera.validate();
    lighting.validate();
    pupil.validate();
  }

  Scene with_shift(double shift_x_mm, double shift_y_mm) const {
    Scene s = *this;
    s.camera.shift_x_mm = shift_x_mm;
    s.camera.shift_y_mm = shift_y_mm;
    return s;
  }

  /// Stable hash over every rendering-relevant parameter; render-cache keys
  /// combine it with the quantized eye state.
  std::uint64_t fingerprint() const {
    Fnv1a h;
    h.f64(eye.eyeball_diameter_mm).f64(eye.iris_diameter_mm);
    h.f64(eye.reflectance_sclera).f64(eye.reflectance_iris);
    h.f64(eye.reflectance_pupil).f64(eye.reflectance_skin);
    h.u64(eye.eyelids_enabled ? 1 : 0);
    h.f64(eye.eyelid_aperture_width_mm).f64(eye.eyelid_aperture_height_mm);
    h.i64(eye.supersampling);
    h.f64(camera.distance_to_eye_mm).f64(camera.field_of_view_deg);
    h.i64(camera.image_rows).i64(camera.image_cols);
    h.f64(camera.shift_x_mm).f64(camera.shift_y_mm);
    h.u64(static_cast<std::uint64_t>(lighting.mode));
    h.f64(lighting.ambient_level).f64(lighting.ambient_floor).f64(lighting.source_strength);
    for (const Vec3* v : {&lighting.source_a, &lighting.source_b}) h.f64(v->x).f64(v->y).f64(v->z);
    h.u64(lighting.sources_follow_sensor ? 1 : 0);
    return h.value();
  }
};

/// Eye states are quantized before rendering (0.01 degrees, 0.05 mm pupil) so
/// memoization and direct evaluation follow the exact same path; the
/// quantization error is far below every metric tolerance.
inline EyeState quantize_state(const EyeState& s) {
  return {std::round(s.yaw_deg * 100.0) / 100.0, std::round(s.pitch_deg * 100.0) / 100.0,
          std::round(s.pupil_diameter_mm * 20.0) / 20.0};
}

/// Bounded, thread-safe memoization of rendered frames. Values are pure
/// functions of (scene, quantized state), so sharing a cache across threads,
/// sweep cells, or whole experiments never changes any result.
class RenderCache {
public:
  explicit RenderCache(std::size_t max_entries = 320) : max_entries_(max_entries) {}

  std::shared_ptr<const EyeImage> get_or_render(const Scene& scene, const EyeState& quantized) {
    const Key key{scene.fingerprint(), std::llround(quantized.yaw_deg * 100.0),
                  std::llround(quantized.pitch_deg * 100.0),
                  std::llround(quantized.pupil_diameter_mm * 20.0)};
    {
      std::lock_guard lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.second);
        ++hits_;
        return it->second.first;
      }
    }
    auto img = std::make_shared<const EyeImage>(render_eye_image(
        scene.eye, scene.camera,
        EyeState{quantized.yaw_deg, quantized.pitch_deg, quantized.pupil_diameter_mm},
        scene.lighting));
    std::lock_guard lock(mutex_);
    auto it = map_.find(key); // another thread may have raced us; keep either
    if (it != map_.end()) return it->second.first;
    lru_.push_front(key);
    map_.emplace(key, std::make_pair(img, lru_.begin()));
    ++misses_;
    if (map_.size() > max_entries_) {
      map_.erase(lru_.back());
      lru_.pop_back();
    }
    return img;
  }

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

private:
  struct Key {
    std::uint64_t scene_fp;
    long long yaw_c, pitch_c, pupil_c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      Fnv1a h;
      h.u64(k.scene_fp).i64(k.yaw_c).i64(k.pitch_c).i64(k.pupil_c);
      return static_cast<std::size_t>(h.value());
    }
  };

  std::size_t max_entries_;
  std::mutex mutex_;
  std::list<Key> lru_;
  std::unordered_map<Key, std::pair<std::shared_ptr<const EyeImage>, std::list<Key>::iterator>,
                     KeyHash>
      map_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Per-simulation knobs. gain/offset model sensor electronics scaling ahead
/// of calibration (which is invariant to them); noise is additive Gaussian on
/// each raw sensor output, default off.
struct SimOptions {
  double sensor_gain = 1.0;
  double sensor_offset = 0.0;
  double noise_stddev = 0.0;
  std::uint64_t noise_seed = 0;
  std::shared_ptr<RenderCache> cache; // null = render directly (same numbers)
};

/// Renders and senses one design against one scene, memoizing per quantized
/// eye state. Not thread-safe; create one per worker.
class SensorSampler {
public:
  SensorSampler(Scene scene, PsogDesign design, SimOptions options = {})
      : scene_(std::move(scene)), design_(std::move(design)), options_(std::move(options)) {
    scene_.validate();
  }

  const Scene& scene() const { return scene_; }
  const PsogDesign& design() const { return design_; }
  const SimOptions& options() const { return options_; }

  /// Noise-free per-sensor outputs for the (quantized) state.
  const std::vector<double>& sensor_values(const EyeState& state) {
    const EyeState q = quantize_state(state);
    const MemoKey key{std::llround(q.yaw_deg * 100.0), std::llround(q.pitch_deg * 100.0),
                      std::llround(q.pupil_diameter_mm * 20.0)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::shared_ptr<const EyeImage> cached;
    const EyeImage* img;
    if (options_.cache) {
      cached = options_.cache->get_or_render(scene_, q);
      img = cached.get();
    } else {
      owned_ = render_eye_image(scene_.eye, scene_.camera, q, scene_.lighting);
      img = &owned_;
    }
    std::vector<double> values(design_.areas.size());
    for (std::size_t i = 0; i < design_.areas.size(); ++i)
      values[i] = options_.sensor_gain *
                      compute_sensor_output(*img, design_.areas[i], scene_.eye.supersampling) +
                  options_.sensor_offset;
    return memo_.emplace(key, std::move(values)).first->second;
  }

  std::pair<double, double> raw_outputs(const EyeState& state) {
    return design_raw_output(design_, sensor_values(state));
  }

private:
  struct MemoKey {
    long long yaw_c, pitch_c, pupil_c;
    bool operator==(const MemoKey&) const = default;
  };
  struct MemoHash {
    std::size_t operator()(const MemoKey& k) const {
      return static_cast<std::size_t>(Fnv1a{}.i64(k.yaw_c).i64(k.pitch_c).i64(k.pupil_c).value());
    }
  };

  Scene scene_;
  PsogDesign design_;
  SimOptions options_;
  std::unordered_map<MemoKey, std::vector<double>, MemoHash> memo_;
  EyeImage owned_;
};

/// Three-pose quadratic calibration: renders the eye at the given angles on
/// each axis in turn (other axis at 0, pupil frozen) and fits raw -> degrees
/// per axis. The camera must sit at the zero-shift calibration position.
inline CalibrationModel calibrate_design(SensorSampler& sampler,
                                         const std::vector<double>& angles_deg = {-10.0, 0.0,
                                                                                  10.0}) {
  const Scene& scene = sampler.scene();
  if (scene.camera.shift_x_mm != 0.0 || scene.camera.shift_y_mm != 0.0)
    throw ConfigError("calibrate_design: camera must be at the zero-shift calibration position");
  if (angles_deg.size() < 3)
    throw ConfigError("calibrate_design: need at least 3 calibration angles");

  const double pupil = scene.pupil.calibration_mm;
  std::vector<std::pair<double, double>> h_points, v_points;
  h_points.reserve(angles_deg.size());
  v_points.reserve(angles_deg.size());
  for (double ang : angles_deg)
    h_points.emplace_back(sampler.raw_outputs({ang, 0.0, pupil}).first, ang);
  for (double ang : angles_deg)
    v_points.emplace_back(sampler.raw_outputs({0.0, ang, pupil}).second, ang);

  CalibrationModel model;
  model.horizontal = fit_axis(h_points, "horizontal");
  model.vertical = fit_axis(v_points, "vertical");
  return model;
}

/// End-to-end estimated signal: render (with pupil dilation), sense,
/// de-matrix, calibrate, sample-aligned with the ground truth. Fixation
/// annotations are copied from the ground truth.
inline GazeSignal simulate_signal(SensorSampler& sampler, const GazeSignal& gt,
                                  const CalibrationModel& calibration) {
  GazeSignal est;
  est.sample_rate_hz = gt.sample_rate_hz;
  est.fixations = gt.fixations;
  est.samples.reserve(gt.samples.size());

  const bool noisy = sampler.options().noise_stddev > 0.0;
  std::mt19937_64 rng(sampler.options().noise_seed);
  std::normal_distribution<double> noise(0.0, noisy ? sampler.options().noise_stddev : 1.0);
  std::vector<double> scratch;

  for (const GazeSample& s : gt.samples) {
    const EyeState state{s.h_deg, s.v_deg,
                         sampler.scene().pupil.diameter_at(s.t_s)};
    const std::vector<double>& values = sampler.sensor_values(state);
    double h_raw, v_raw;
    if (noisy) {
      scratch.assign(values.begin(), values.end());
      for (double& v : scratch) v += noise(rng);
      std::tie(h_raw, v_raw) = design_raw_output(sampler.design(), scratch);
    } else {
      std::tie(h_raw, v_raw) = design_raw_output(sampler.design(), values);
    }
    const auto [yaw_est, pitch_est] = apply_calibration(calibration, h_raw, v_raw);
    est.samples.push_back({s.t_s, yaw_est, pitch_est});
  }
  return est;
}

} // namespace psog
