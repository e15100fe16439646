#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "psog/experiments.hpp"
#include "psog/hash.hpp"
#include "psog/kvconfig.hpp"
#include "psog/pipeline.hpp"

namespace psog {

enum class ExperimentMode { Single, Sweep, Tradeoff, Shift };

inline const char* to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Single: return "single";
    case ExperimentMode::Sweep: return "sweep";
    case ExperimentMode::Tradeoff: return "tradeoff";
    case ExperimentMode::Shift: return "shift";
  }
  return "?";
}

inline ExperimentMode mode_from_string(const std::string& s) {
  if (s == "single") return ExperimentMode::Single;
  if (s == "sweep") return ExperimentMode::Sweep;
  if (s == "tradeoff") return ExperimentMode::Tradeoff;
  if (s == "shift") return ExperimentMode::Shift;
  throw ConfigError("config: unknown experiment mode '" + s +
                    "' (expected single, sweep, tradeoff or shift)");
}

struct OutputConfig {
  std::string directory = "results";
  bool svg = true;
  std::uint64_t seed = 0;
  bool timestamps = false; // off by default so reruns are byte-identical
};

/// Design selection: axis values are single-element for single/shift runs and
/// full grids for sweeps.
struct DesignSection {
  DesignName name = DesignName::D1;
  std::vector<SweepAxis> axes; // canonical order for the design
  DesignLayout layout;

  SweepGrid grid() const { return SweepGrid{name, axes, layout}; }

  DesignParams scalar_params() const {
    std::vector<double> v;
    for (const auto& axis : axes) {
      if (axis.values.size() != 1)
        throw ConfigError("config: design parameter '" + axis.name +
                          "' must be a single value in this experiment mode");
      v.push_back(axis.values[0]);
    }
    return grid().make_params(v);
  }
};

struct RunConfig {
  Scene scene;
  DesignSection design;
  ScanpathConfig scanpath;
  ExperimentMode mode = ExperimentMode::Single;
  ShiftExperimentConfig shift;
  double noise_stddev = 0.0;
  OutputConfig output;
};

namespace detail {

inline double default_axis_value(DesignName name, const std::string& axis) {
  switch (name) {
    case DesignName::D1: {
      const D1Params d{};
      return axis == "length" ? d.length_mm : d.width_mm;
    }
    case DesignName::D2: {
      const D2Params d{};
      if (axis == "length") return d.length_mm;
      return axis == "width" ? d.width_mm : d.angle_deg;
    }
    case DesignName::D3: {
      return D3Params{}.diameter_mm;
    }
    case DesignName::D4: {
      const D4Params d{};
      if (axis == "diameter") return d.diameter_mm;
      return axis == "pos_y" ? d.pos_y_mm : d.pos_x_mm;
    }
  }
  return 0.0;
}

inline std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string values_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += num17(v[i]);
  }
  return out;
}

} // namespace detail

/// Parses and fully validates a run config; every default is applied and
/// unknown keys are fatal.
inline RunConfig parse_run_config(const std::string& text) {
  const KvDocument doc = KvDocument::parse(text);
  for (const auto& section : doc.sections) {
    static const char* known[] = {"scene.eye", "scene.camera", "scene.lighting", "scene.pupil",
                                  "design",    "scanpath",     "experiment",     "output"};
    bool ok = false;
    for (const char* k : known) ok = ok || section.name == k;
    if (!ok)
      throw ConfigError("config line " + std::to_string(section.line) + ": unknown section [" +
                        section.name + "]");
  }

  RunConfig cfg;

  {
    SectionReader eye(doc, "scene.eye");
    EyeModelConfig& e = cfg.scene.eye;
    e.eyeball_diameter_mm = eye.get_double("eyeball_diameter", e.eyeball_diameter_mm);
    e.iris_diameter_mm = eye.get_double("iris_diameter", e.iris_diameter_mm);
    e.reflectance_sclera = eye.get_double("reflectance_sclera", e.reflectance_sclera);
    e.reflectance_iris = eye.get_double("reflectance_iris", e.reflectance_iris);
    e.reflectance_pupil = eye.get_double("reflectance_pupil", e.reflectance_pupil);
    e.reflectance_skin = eye.get_double("reflectance_skin", e.reflectance_skin);
    e.eyelids_enabled = eye.get_bool("eyelids_enabled", e.eyelids_enabled);
    e.eyelid_aperture_width_mm =
        eye.get_double("eyelid_aperture_width", e.eyelid_aperture_width_mm);
    e.eyelid_aperture_height_mm =
        eye.get_double("eyelid_aperture_height", e.eyelid_aperture_height_mm);
    e.supersampling = static_cast<int>(eye.get_int("supersampling", e.supersampling));
    eye.finish();
  }
  {
    SectionReader cam(doc, "scene.camera");
    CameraConfig& c = cfg.scene.camera;
    c.distance_to_eye_mm = cam.get_double("distance_to_eye", c.distance_to_eye_mm);
    c.field_of_view_deg = cam.get_double("field_of_view", c.field_of_view_deg);
    c.image_rows = static_cast<int>(cam.get_int("image_rows", c.image_rows));
    c.image_cols = static_cast<int>(cam.get_int("image_cols", c.image_cols));
    c.shift_x_mm = cam.get_double("shift_x", c.shift_x_mm);
    c.shift_y_mm = cam.get_double("shift_y", c.shift_y_mm);
    cam.finish();
  }
  {
    SectionReader light(doc, "scene.lighting");
    LightingConfig& l = cfg.scene.lighting;
    const std::string mode = light.get_string("mode", "ambient");
    if (mode == "ambient")
      l.mode = LightingMode::Ambient;
    else if (mode == "two_point")
      l.mode = LightingMode::TwoPoint;
    else
      throw ConfigError("config: lighting mode '" + mode + "' (expected ambient or two_point)");
    l.ambient_level = light.get_double("ambient_level", l.ambient_level);
    l.ambient_floor = light.get_double("ambient_floor", l.ambient_floor);
    l.source_strength = light.get_double("source_strength", l.source_strength);
    l.source_a = {light.get_double("source1_x", l.source_a.x),
                  light.get_double("source1_y", l.source_a.y),
                  light.get_double("source1_z", l.source_a.z)};
    l.source_b = {light.get_double("source2_x", l.source_b.x),
                  light.get_double("source2_y", l.source_b.y),
                  light.get_double("source2_z", l.source_b.z)};
    l.sources_follow_sensor = light.get_bool("sources_follow_sensor", l.sources_follow_sensor);
    light.finish();
  }
  {
    SectionReader pupil(doc, "scene.pupil");
    PupilDynamics& p = cfg.scene.pupil;
    p.min_mm = pupil.get_double("min_diameter", p.min_mm);
    p.max_mm = pupil.get_double("max_diameter", p.max_mm);
    p.period_s = pupil.get_double("period_s", p.period_s);
    p.calibration_mm = pupil.get_double("calibration_diameter", p.calibration_mm);
    p.dilate = pupil.get_bool("dilate", p.dilate);
    pupil.finish();
  }
  cfg.scene.validate();

  {
    SectionReader design(doc, "design");
    if (!design.present()) throw ConfigError("config: missing [design] section");
    cfg.design.name = design_from_string(design.require_string("name"));
    for (const std::string& axis : SweepGrid::axis_names(cfg.design.name))
      cfg.design.axes.push_back(
          {axis, design.get_values(
                     axis, {detail::default_axis_value(cfg.design.name, axis)})});
    DesignLayout& lay = cfg.design.layout;
    if (design.has("horizontal_pair_x"))
      lay.horizontal_pair_x_mm = design.get_double("horizontal_pair_x", 0.0);
    if (design.has("d1_vertical_pair_y"))
      lay.d1_vertical_pair_y_mm = design.get_double("d1_vertical_pair_y", 0.0);
    if (design.has("d3_vertical_x")) lay.d3_vertical_x_mm = design.get_double("d3_vertical_x", 0.0);
    if (design.has("d3_vertical_y")) lay.d3_vertical_y_mm = design.get_double("d3_vertical_y", 0.0);
    lay.d2_center_separation_mm =
        design.get_double("d2_center_separation", lay.d2_center_separation_mm);
    lay.d4_spacing_factor = design.get_double("d4_spacing_factor", lay.d4_spacing_factor);
    lay.d1_vertical_sum = design.get_bool("d1_vertical_sum", lay.d1_vertical_sum);
    design.finish();
    cfg.design.grid().validate(); // range checks for every axis value
  }

  {
    SectionReader scan(doc, "scanpath");
    ScanpathConfig& s = cfg.scanpath;
    s.sample_rate_hz = scan.get_double("sample_rate", s.sample_rate_hz);
    s.dwell_seconds = scan.get_double("dwell_seconds", s.dwell_seconds);
    s.amplitudes_deg = scan.get_values("amplitudes", s.amplitudes_deg);
    s.initial_center_dwells =
        static_cast<int>(scan.get_int("initial_center_dwells", s.initial_center_dwells));
    s.settle_ms = scan.get_double("settle_ms", s.settle_ms);
    s.transition_ms = scan.get_double("transition_ms", s.transition_ms);
    scan.finish();
    s.validate();
  }

  {
    SectionReader exp(doc, "experiment");
    if (!exp.present()) throw ConfigError("config: missing [experiment] section");
    cfg.mode = mode_from_string(exp.require_string("mode"));
    cfg.shift.shift_values_mm = exp.get_values("shift_values", cfg.shift.shift_values_mm);
    cfg.shift.eye_positions_deg = exp.get_values("eye_positions", cfg.shift.eye_positions_deg);
    cfg.noise_stddev = exp.get_double("noise_stddev", cfg.noise_stddev);
    exp.finish();
    if (cfg.noise_stddev < 0.0) throw ConfigError("config: noise_stddev must be >= 0");
    cfg.shift.validate();
  }

  {
    SectionReader out(doc, "output");
    cfg.output.directory = out.get_string("directory", cfg.output.directory);
    cfg.output.svg = out.get_bool("svg", cfg.output.svg);
    cfg.output.seed = out.get_uint64("seed", cfg.output.seed);
    cfg.output.timestamps = out.get_bool("timestamps", cfg.output.timestamps);
    out.finish();
  }

  if (cfg.mode == ExperimentMode::Single || cfg.mode == ExperimentMode::Shift)
    cfg.design.scalar_params(); // enforce single-valued parameters
  return cfg;
}

/// Canonical serialization: fixed section/key order, every default
/// materialized, 17 significant digits. parse(serialize(c)) == c, and its
/// hash anchors the result manifest.
inline std::string serialize_run_config(const RunConfig& cfg) {
  KvDocument doc;
  const EyeModelConfig& e = cfg.scene.eye;
  doc.set("scene.eye", "eyeball_diameter", detail::num17(e.eyeball_diameter_mm));
  doc.set("scene.eye", "iris_diameter", detail::num17(e.iris_diameter_mm));
  doc.set("scene.eye", "reflectance_sclera", detail::num17(e.reflectance_sclera));
  doc.set("scene.eye", "reflectance_iris", detail::num17(e.reflectance_iris));
  doc.set("scene.eye", "reflectance_pupil", detail::num17(e.reflectance_pupil));
  doc.set("scene.eye", "reflectance_skin", detail::num17(e.reflectance_skin));
  doc.set("scene.eye", "eyelids_enabled", e.eyelids_enabled ? "true" : "false");
  doc.set("scene.eye", "eyelid_aperture_width", detail::num17(e.eyelid_aperture_width_mm));
  doc.set("scene.eye", "eyelid_aperture_height", detail::num17(e.eyelid_aperture_height_mm));
  doc.set("scene.eye", "supersampling", std::to_string(e.supersampling));

  const CameraConfig& c = cfg.scene.camera;
  doc.set("scene.camera", "distance_to_eye", detail::num17(c.distance_to_eye_mm));
  doc.set("scene.camera", "field_of_view", detail::num17(c.field_of_view_deg));
  doc.set("scene.camera", "image_rows", std::to_string(c.image_rows));
  doc.set("scene.camera", "image_cols", std::to_string(c.image_cols));
  doc.set("scene.camera", "shift_x", detail::num17(c.shift_x_mm));
  doc.set("scene.camera", "shift_y", detail::num17(c.shift_y_mm));

  const LightingConfig& l = cfg.scene.lighting;
  doc.set("scene.lighting", "mode", l.mode == LightingMode::Ambient ? "ambient" : "two_point");
  doc.set("scene.lighting", "ambient_level", detail::num17(l.ambient_level));
  doc.set("scene.lighting", "ambient_floor", detail::num17(l.ambient_floor));
  doc.set("scene.lighting", "source_strength", detail::num17(l.source_strength));
  doc.set("scene.lighting", "source1_x", detail::num17(l.source_a.x));
  doc.set("scene.lighting", "source1_y", detail::num17(l.source_a.y));
  doc.set("scene.lighting", "source1_z", detail::num17(l.source_a.z));
  doc.set("scene.lighting", "source2_x", detail::num17(l.source_b.x));
  doc.set("scene.lighting", "source2_y", detail::num17(l.source_b.y));
  doc.set("scene.lighting", "source2_z", detail::num17(l.source_b.z));
  doc.set("scene.lighting", "sources_follow_sensor", l.sources_follow_sensor ? "true" : "false");

  const PupilDynamics& p = cfg.scene.pupil;
  doc.set("scene.pupil", "min_diameter", detail::num17(p.min_mm));
  doc.set("scene.pupil", "max_diameter", detail::num17(p.max_mm));
  doc.set("scene.pupil", "period_s", detail::num17(p.period_s));
  doc.set("scene.pupil", "calibration_diameter", detail::num17(p.calibration_mm));
  doc.set("scene.pupil", "dilate", p.dilate ? "true" : "false");

  doc.set("design", "name", to_string(cfg.design.name));
  for (const auto& axis : cfg.design.axes)
    doc.set("design", axis.name, detail::values_text(axis.values));
  const DesignLayout& lay = cfg.design.layout;
  if (lay.horizontal_pair_x_mm)
    doc.set("design", "horizontal_pair_x", detail::num17(*lay.horizontal_pair_x_mm));
  if (lay.d1_vertical_pair_y_mm)
    doc.set("design", "d1_vertical_pair_y", detail::num17(*lay.d1_vertical_pair_y_mm));
  if (lay.d3_vertical_x_mm)
    doc.set("design", "d3_vertical_x", detail::num17(*lay.d3_vertical_x_mm));
  if (lay.d3_vertical_y_mm)
    doc.set("design", "d3_vertical_y", detail::num17(*lay.d3_vertical_y_mm));
  doc.set("design", "d2_center_separation", detail::num17(lay.d2_center_separation_mm));
  doc.set("design", "d4_spacing_factor", detail::num17(lay.d4_spacing_factor));
  doc.set("design", "d1_vertical_sum", lay.d1_vertical_sum ? "true" : "false");

  const ScanpathConfig& s = cfg.scanpath;
  doc.set("scanpath", "sample_rate", detail::num17(s.sample_rate_hz));
  doc.set("scanpath", "dwell_seconds", detail::num17(s.dwell_seconds));
  doc.set("scanpath", "amplitudes", detail::values_text(s.amplitudes_deg));
  doc.set("scanpath", "initial_center_dwells", std::to_string(s.initial_center_dwells));
  doc.set("scanpath", "settle_ms", detail::num17(s.settle_ms));
  doc.set("scanpath", "transition_ms", detail::num17(s.transition_ms));

  doc.set("experiment", "mode", to_string(cfg.mode));
  doc.set("experiment", "shift_values", detail::values_text(cfg.shift.shift_values_mm));
  doc.set("experiment", "eye_positions", detail::values_text(cfg.shift.eye_positions_deg));
  doc.set("experiment", "noise_stddev", detail::num17(cfg.noise_stddev));

  doc.set("output", "directory", cfg.output.directory);
  doc.set("output", "svg", cfg.output.svg ? "true" : "false");
  doc.set("output", "seed", std::to_string(cfg.output.seed));
  doc.set("output", "timestamps", cfg.output.timestamps ? "true" : "false");
  return doc.serialize();
}

inline std::string config_hash_hex(const RunConfig& cfg) {
  return hex64(fnv1a64(serialize_run_config(cfg)));
}

} // namespace psog
