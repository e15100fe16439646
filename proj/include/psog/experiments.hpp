#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "psog/pipeline.hpp"
#include "psog/scanpath.hpp"

namespace psog {

struct SweepAxis {
  std::string name; // length, width, angle, diameter, pos_y, pos_x
  std::vector<double> values;
};

/// Cartesian parameter grid for one design. Axis order is fixed per design
/// and cells iterate lexicographically (first axis slowest).
struct SweepGrid {
  DesignName design = DesignName::D1;
  std::vector<SweepAxis> axes;
  DesignLayout layout;

  static std::vector<std::string> axis_names(DesignName name) {
    switch (name) {
      case DesignName::D1: return {"length", "width"};
      case DesignName::D2: return {"length", "width", "angle"};
      case DesignName::D3: return {"diameter"};
      case DesignName::D4: return {"diameter", "pos_y", "pos_x"};
    }
    return {};
  }

  /// Full grids: 0.5-12 mm step 0.5 for lengths/widths/diameters, 5-45
  /// degrees step 5 for the tilt, -2-2 mm step 0.5 for array positions.
  static SweepGrid defaults(DesignName name) {
    auto span = [](double lo, double hi, double step) {
      std::vector<double> v;
      for (long i = 0; lo + i * step <= hi + 0.25 * step; ++i) v.push_back(lo + i * step);
      return v;
    };
    SweepGrid g;
    g.design = name;
    for (const std::string& axis : axis_names(name)) {
      if (axis == "angle")
        g.axes.push_back({axis, span(5.0, 45.0, 5.0)});
      else if (axis == "pos_y" || axis == "pos_x")
        g.axes.push_back({axis, span(-2.0, 2.0, 0.5)});
      else
        g.axes.push_back({axis, span(0.5, 12.0, 0.5)});
    }
    return g;
  }

  void validate() const {
    const std::vector<std::string> names = axis_names(design);
    if (axes.size() != names.size())
      throw ConfigError("sweep grid: design " + std::string(to_string(design)) + " needs axes " +
                        [&] {
                          std::string s;
                          for (const auto& n : names) s += n + " ";
                          return s;
                        }());
    for (std::size_t i = 0; i < axes.size(); ++i) {
      if (axes[i].name != names[i])
        throw ConfigError("sweep grid: axis " + std::to_string(i) + " must be '" + names[i] +
                          "', got '" + axes[i].name + "'");
      if (axes[i].values.empty())
        throw ConfigError("sweep grid: axis '" + axes[i].name + "' has no values");
    }
    for (std::size_t c = 0; c < cell_count(); ++c) validate_params(make_params(cell_values(c)));
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
  }

  std::vector<double> cell_values(std::size_t index) const {
    std::vector<double> out(axes.size());
    for (std::size_t i = axes.size(); i-- > 0;) {
      out[i] = axes[i].values[index % axes[i].values.size()];
      index /= axes[i].values.size();
    }
    return out;
  }

  DesignParams make_params(const std::vector<double>& v) const {
    switch (design) {
      case DesignName::D1: return D1Params{v[0], v[1]};
      case DesignName::D2: return D2Params{v[0], v[1], v[2]};
      case DesignName::D3: return D3Params{v[0]};
      case DesignName::D4: return D4Params{v[0], v[1], v[2]};
    }
    throw ContractError("sweep grid: unreachable design");
  }
};

struct SweepCell {
  std::vector<double> params;
  MetricReport report;
  bool ok = false;
  std::string error;
};

struct SweepResult {
  DesignName design = DesignName::D1;
  std::vector<SweepAxis> axes;
  std::vector<SweepCell> cells; // lexicographic cell order
};

struct ExperimentOptions {
  int workers = 0; // 0 = hardware concurrency; never affects results
  std::uint64_t seed = 0;
  double noise_stddev = 0.0;
  double sensor_gain = 1.0;
  double sensor_offset = 0.0;
  std::shared_ptr<RenderCache> cache; // created internally when null

  int resolved_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }
};

namespace detail {

/// Runs fn(index) for every index in [0, count) across the worker pool.
/// Work items own disjoint output slots, so scheduling never affects results.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int n = std::min<std::size_t>(workers, count);
  pool.reserve(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

} // namespace detail

/// One full pipeline evaluation: build design, calibrate at zero shift,
/// simulate the scanpath, report fixation-gated metrics.
inline MetricReport evaluate_design(const DesignParams& params, const DesignLayout& layout,
                                    const Scene& scene, const GazeSignal& gt,
                                    const SimOptions& options) {
  PsogDesign design = build_design(params, scene.eye, layout);
  SensorSampler sampler(scene, std::move(design), options);
  const CalibrationModel calibration = calibrate_design(sampler);
  const GazeSignal est = simulate_signal(sampler, gt, calibration);
  return evaluate_metrics(est, gt);
}

/// Sweeps the grid cell by cell; failures are recorded in the cell rather
/// than aborting the sweep. Bit-reproducible for a fixed seed regardless of
/// worker count.
inline SweepResult run_sweep(const SweepGrid& grid, const Scene& scene, const GazeSignal& gt,
                             const ExperimentOptions& options = {}) {
  grid.validate();
  scene.validate();
  auto cache = options.cache ? options.cache : std::make_shared<RenderCache>();

  SweepResult result;
  result.design = grid.design;
  result.axes = grid.axes;
  result.cells.resize(grid.cell_count());

  detail::parallel_for(result.cells.size(), options.resolved_workers(), [&](std::size_t i) {
    SweepCell& cell = result.cells[i];
    cell.params = grid.cell_values(i);
    try {
      SimOptions sim;
      sim.sensor_gain = options.sensor_gain;
      sim.sensor_offset = options.sensor_offset;
      sim.noise_stddev = options.noise_stddev;
      sim.noise_seed = mix_seed(options.seed, i);
      sim.cache = cache;
      cell.report = evaluate_design(grid.make_params(cell.params), grid.layout, scene, gt, sim);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  });
  return result;
}

enum class MetricId { AccH, AccV, CrossHV, CrossVH };

inline const char* to_string(MetricId m) {
  switch (m) {
    case MetricId::AccH: return "acc_h";
    case MetricId::AccV: return "acc_v";
    case MetricId::CrossHV: return "cross_hv";
    case MetricId::CrossVH: return "cross_vh";
  }
  return "?";
}

inline double metric_value(const MetricReport& r, MetricId m) {
  switch (m) {
    case MetricId::AccH: return r.acc_h_mean;
    case MetricId::AccV: return r.acc_v_mean;
    case MetricId::CrossHV: return r.cross_hv_mean;
    case MetricId::CrossVH: return r.cross_vh_mean;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct TradeoffGroup {
  std::vector<MetricId> metrics;
};

/// Designs with separate horizontal/vertical sensor sets optimize the pairs
/// (acc_h, cross_hv) and (acc_v, cross_vh) independently; D2 shares its two
/// sensors between channels, so all four measures are optimized jointly.
inline std::vector<TradeoffGroup> default_tradeoff_groups(DesignName name) {
  if (name == DesignName::D2)
    return {TradeoffGroup{{MetricId::AccH, MetricId::CrossHV, MetricId::AccV, MetricId::CrossVH}}};
  return {TradeoffGroup{{MetricId::AccH, MetricId::CrossHV}},
          TradeoffGroup{{MetricId::AccV, MetricId::CrossVH}}};
}

struct TradeoffResult {
  TradeoffGroup group;
  std::size_t cell_index = 0;
  std::vector<double> params;
  std::vector<double> achieved; // per group metric, at the winning cell
  std::vector<double> optima;   // per group metric, grid minimum
  int iterations = 0;
};

/// Description of the expansion schedule, recorded alongside results.
inline const char* tradeoff_method_note() {
  return "thresholds start at each metric's grid minimum and grow by admitting one new cell at a "
         "time on the metric with the smallest relative allowance (t-min)/min (range-normalized "
         "when min = 0) until the feasible sets intersect; winner minimizes the summed relative "
         "increase, ties broken lexicographically on parameters";
}

/// Multi-objective trade-off search on the finished sweep surfaces.
inline std::vector<TradeoffResult> tradeoff_optimize(const SweepResult& sweep,
                                                     const std::vector<TradeoffGroup>& groups) {
  if (sweep.cells.empty()) throw ContractError("tradeoff_optimize: empty sweep grid");

  std::vector<TradeoffResult> results;
  for (const TradeoffGroup& group : groups) {
    const std::size_t m_count = group.metrics.size();
    if (m_count == 0) throw ContractError("tradeoff_optimize: empty metric group");

    // Per-metric value arrays; non-finite entries and failed cells never
    // enter a feasible set.
    std::vector<std::vector<double>> values(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      values[m].resize(sweep.cells.size());
      for (std::size_t i = 0; i < sweep.cells.size(); ++i)
        values[m][i] = sweep.cells[i].ok
                           ? metric_value(sweep.cells[i].report, group.metrics[m])
                           : std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<double> minima(m_count), denoms(m_count);
    std::vector<std::vector<double>> sorted(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      for (double v : values[m])
        if (std::isfinite(v)) sorted[m].push_back(v);
      if (sorted[m].empty())
        throw ContractError(std::string("tradeoff_optimize: metric ") +
                            to_string(group.metrics[m]) + " has no finite cells");
      std::sort(sorted[m].begin(), sorted[m].end());
      sorted[m].erase(std::unique(sorted[m].begin(), sorted[m].end()), sorted[m].end());
      minima[m] = sorted[m].front();
      const double range = sorted[m].back() - sorted[m].front();
      denoms[m] = minima[m] > 0.0 ? minima[m] : (range > 0.0 ? range : 1.0);
    }

    std::vector<double> thresholds = minima;
    int iterations = 0;
    auto intersection = [&] {
      std::vector<std::size_t> cells;
      for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
        bool feasible = true;
        for (std::size_t m = 0; m < m_count && feasible; ++m)
          feasible = std::isfinite(values[m][i]) && values[m][i] <= thresholds[m];
        if (feasible) cells.push_back(i);
      }
      return cells;
    };

    std::vector<std::size_t> meet = intersection();
    while (meet.empty()) {
      double best_rho = std::numeric_limits<double>::infinity();
      std::vector<double> rho(m_count, std::numeric_limits<double>::infinity());
      for (std::size_t m = 0; m < m_count; ++m) {
        auto it = std::upper_bound(sorted[m].begin(), sorted[m].end(), thresholds[m]);
        if (it == sorted[m].end()) continue; // metric exhausted, others keep growing
        rho[m] = (*it - minima[m]) / denoms[m];
        best_rho = std::min(best_rho, rho[m]);
      }
      if (!std::isfinite(best_rho))
        throw ContractError("tradeoff_optimize: feasible sets never intersect");
      for (std::size_t m = 0; m < m_count; ++m)
        if (rho[m] <= best_rho * (1.0 + 1e-12))
          thresholds[m] = *std::upper_bound(sorted[m].begin(), sorted[m].end(), thresholds[m]);
      ++iterations;
      meet = intersection();
    }

    // Winner: smallest summed relative increase, lexicographic params on ties.
    TradeoffResult best;
    best.group = group;
    best.iterations = iterations;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i : meet) {
      double score = 0.0;
      for (std::size_t m = 0; m < m_count; ++m) score += (values[m][i] - minima[m]) / denoms[m];
      const bool better =
          score < best_score - 1e-15 ||
          (std::abs(score - best_score) <= 1e-15 && !best.params.empty() &&
           std::lexicographical_compare(sweep.cells[i].params.begin(),
                                        sweep.cells[i].params.end(), best.params.begin(),
                                        best.params.end()));
      if (best.params.empty() || better) {
        best_score = score;
        best.cell_index = i;
        best.params = sweep.cells[i].params;
      }
    }
    best.achieved.resize(m_count);
    best.optima = minima;
    for (std::size_t m = 0; m < m_count; ++m) best.achieved[m] = values[m][best.cell_index];
    results.push_back(std::move(best));
  }
  return results;
}

enum class ShiftCombination { HH, VH, HV, VV };

inline const char* to_string(ShiftCombination c) {
  switch (c) {
    case ShiftCombination::HH: return "H-H";
    case ShiftCombination::VH: return "V-H";
    case ShiftCombination::HV: return "H-V";
    case ShiftCombination::VV: return "V-V";
  }
  return "?";
}

/// Shared grids for the four movement/shift combinations. Shift signs follow
/// the sensor conventions (horizontal + = away from the nasal side, vertical
/// + = upward); the zero shift must be present as the baseline.
struct ShiftExperimentConfig {
  std::vector<double> shift_values_mm{-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> eye_positions_deg = [] {
    std::vector<double> v;
    for (int i = -20; i <= 20; ++i) v.push_back(0.5 * i);
    return v;
  }();

  void validate() const {
    if (shift_values_mm.empty() || eye_positions_deg.empty())
      throw ConfigError("shift experiment: shift and eye-position grids must be nonempty");
    if (std::find(shift_values_mm.begin(), shift_values_mm.end(), 0.0) == shift_values_mm.end())
      throw ConfigError("shift experiment: the zero-shift baseline must be in the shift list");
  }
};

struct ShiftCurve {
  double shift_mm = 0.0;
  std::vector<double> estimate_deg; // one per eye position
};

struct ShiftCurveCluster {
  ShiftCombination combination = ShiftCombination::HH;
  std::vector<double> eye_positions_deg;
  std::vector<ShiftCurve> curves;
  std::vector<double> mae_deg; // MAE against the zero-shift baseline curve
};

/// Scans eye positions under sensor shifts for all four combinations, using
/// one zero-shift calibration and a frozen pupil. The estimate records the
/// driven axis; the orthogonal axis is held at 0. These are static curve
/// scans, so the noise hook does not apply here.
inline std::vector<ShiftCurveCluster> run_shift_experiment(
    const DesignParams& params, const Scene& scene, const ShiftExperimentConfig& config,
    const ExperimentOptions& options = {}, const DesignLayout& layout = {}) {
  config.validate();
  scene.validate();
  if (scene.camera.shift_x_mm != 0.0 || scene.camera.shift_y_mm != 0.0)
    throw ConfigError("run_shift_experiment: the scene must start at the zero-shift calibration "
                      "position");

  Scene frozen = scene;
  frozen.pupil.dilate = false;
  const PsogDesign design = build_design(params, frozen.eye, layout);
  auto cache = options.cache ? options.cache : std::make_shared<RenderCache>();

  CalibrationModel calibration;
  {
    SimOptions sim;
    sim.sensor_gain = options.sensor_gain;
    sim.sensor_offset = options.sensor_offset;
    sim.cache = cache;
    SensorSampler sampler(frozen, design, sim);
    calibration = calibrate_design(sampler);
  }

  const std::array<ShiftCombination, 4> combos{ShiftCombination::HH, ShiftCombination::VH,
                                               ShiftCombination::HV, ShiftCombination::VV};
  std::vector<ShiftCurveCluster> clusters(combos.size());
  for (std::size_t k = 0; k < combos.size(); ++k) {
    clusters[k].combination = combos[k];
    clusters[k].eye_positions_deg = config.eye_positions_deg;
    clusters[k].curves.resize(config.shift_values_mm.size());
  }

  const std::size_t shifts = config.shift_values_mm.size();
  detail::parallel_for(combos.size() * shifts, options.resolved_workers(), [&](std::size_t unit) {
    const std::size_t k = unit / shifts;
    const std::size_t si = unit % shifts;
    const ShiftCombination combo = combos[k];
    const double shift = config.shift_values_mm[si];

    const bool horizontal_shift = combo == ShiftCombination::HH || combo == ShiftCombination::VH;
    const bool horizontal_eye = combo == ShiftCombination::HH || combo == ShiftCombination::HV;

    SimOptions sim;
    sim.sensor_gain = options.sensor_gain;
    sim.sensor_offset = options.sensor_offset;
    sim.cache = cache;
    SensorSampler sampler(
        frozen.with_shift(horizontal_shift ? shift : 0.0, horizontal_shift ? 0.0 : shift), design,
        sim);

    ShiftCurve& curve = clusters[k].curves[si];
    curve.shift_mm = shift;
    curve.estimate_deg.resize(config.eye_positions_deg.size());
    const double pupil = frozen.pupil.calibration_mm;
    for (std::size_t j = 0; j < config.eye_positions_deg.size(); ++j) {
      const double pos = config.eye_positions_deg[j];
      const EyeState state{horizontal_eye ? pos : 0.0, horizontal_eye ? 0.0 : pos, pupil};
      const auto [h_raw, v_raw] = sampler.raw_outputs(state);
      const auto [yaw_est, pitch_est] = apply_calibration(calibration, h_raw, v_raw);
      curve.estimate_deg[j] = horizontal_eye ? yaw_est : pitch_est;
    }
  });

  for (ShiftCurveCluster& cluster : clusters) {
    const std::size_t base = std::distance(
        config.shift_values_mm.begin(),
        std::find(config.shift_values_mm.begin(), config.shift_values_mm.end(), 0.0));
    auto as_pairs = [&](const ShiftCurve& c) {
      std::vector<std::pair<double, double>> pts(c.estimate_deg.size());
      for (std::size_t j = 0; j < pts.size(); ++j)
        pts[j] = {cluster.eye_positions_deg[j], c.estimate_deg[j]};
      return pts;
    };
    const auto baseline = as_pairs(cluster.curves[base]);
    cluster.mae_deg.resize(cluster.curves.size());
    for (std::size_t si = 0; si < cluster.curves.size(); ++si)
      cluster.mae_deg[si] = mae_between_curves(as_pairs(cluster.curves[si]), baseline);
  }
  return clusters;
}

} // namespace psog
