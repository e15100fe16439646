// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Runs against the bundled procedural eye (library defaults).

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "psog/psog.hpp"

#include "oracles.hpp"

using namespace psog;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------

Outcome binning_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(0xACCE57);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int rows = rng.uniform_int(8, 48);
    const int cols = rng.uniform_int(8, 48);
    EyeImage img = oracle::random_image(rng, rows, cols, rng.uniform(0.05, 0.4));

    DetectionArea area;
    const double cx = rng.uniform(-0.3, 0.3) * cols * img.mm_per_pixel_x;
    const double cy = rng.uniform(-0.3, 0.3) * rows * img.mm_per_pixel_y;
    switch (k % 3) {
      case 0:
        area = DetectionArea::rectangle(cx, cy, rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0),
                                        (k % 2) ? 0.0 : 90.0);
        break;
      case 1: {
        double angle = rng.uniform(-89.0, 89.0);
        if (angle == 0.0) angle = 30.0;
        area = DetectionArea::rectangle(cx, cy, rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0),
                                        angle);
        break;
      }
      default: area = DetectionArea::circular(cx, cy, rng.uniform(0.5, 6.0));
    }
    worst = std::max(worst,
                     std::abs(compute_sensor_output(img, area, 4) - oracle::sensor_output(img, area, 4)));
    if (worst > 1e-12) break;
  }
  const double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = worst <= 1e-12 && elapsed < 10.0;
  out.detail = "worst |impl - brute force| = " + format_g9(worst) + " over 1000 cases, " +
               format_g9(elapsed) + " s";
  return out;
}

Outcome calibration_exactness() {
  const Scene scene{}; // bundled eye, zero shift
  auto cache = std::make_shared<RenderCache>();
  double worst = 0.0;
  for (DesignParams params : {DesignParams{D1Params{}}, DesignParams{D2Params{}},
                              DesignParams{D3Params{}}, DesignParams{D4Params{}}}) {
    SimOptions opts;
    opts.cache = cache;
    SensorSampler sampler(scene, build_design(params, scene.eye), opts);
    const CalibrationModel model = calibrate_design(sampler);
    for (double ang : {-10.0, 0.0, 10.0}) {
      const double h = sampler.raw_outputs({ang, 0.0, scene.pupil.calibration_mm}).first;
      const double v = sampler.raw_outputs({0.0, ang, scene.pupil.calibration_mm}).second;
      worst = std::max(worst, std::abs(model.horizontal(h) - ang));
      worst = std::max(worst, std::abs(model.vertical(v) - ang));
    }
  }
  Outcome out;
  out.pass = worst <= 1e-9;
  out.detail = "worst pose reproduction error over D1-D4 = " + format_g9(worst) + " deg";
  return out;
}

Outcome affine_invariance() {
  const Scene scene{};
  const PsogDesign design = build_design(D1Params{}, scene.eye);
  auto cache = std::make_shared<RenderCache>();

  SimOptions plain_opts;
  plain_opts.cache = cache;
  SensorSampler plain(scene, design, plain_opts);
  SimOptions affine_opts;
  affine_opts.cache = cache; // identical frames, transformed sensor outputs
  affine_opts.sensor_gain = 2.0;
  affine_opts.sensor_offset = 0.1;
  SensorSampler transformed(scene, design, affine_opts);

  const CalibrationModel m0 = calibrate_design(plain);
  const CalibrationModel m1 = calibrate_design(transformed);

  double worst = 0.0;
  const double pupil = scene.pupil.calibration_mm;
  for (int i = -20; i <= 20; ++i) {
    const double ang = 0.5 * i;
    const auto r0 = plain.raw_outputs({ang, 0.0, pupil});
    const auto r1 = transformed.raw_outputs({ang, 0.0, pupil});
    worst = std::max(std::abs(apply_calibration(m1, r1.first, r1.second).first -
                              apply_calibration(m0, r0.first, r0.second).first),
                     worst);
    const auto s0 = plain.raw_outputs({0.0, ang, pupil});
    const auto s1 = transformed.raw_outputs({0.0, ang, pupil});
    worst = std::max(std::abs(apply_calibration(m1, s1.first, s1.second).second -
                              apply_calibration(m0, s0.first, s0.second).second),
                     worst);
  }
  Outcome out;
  out.pass = worst <= 1e-6;
  out.detail = "worst estimate change under gain 2 / offset 0.1 = " + format_g9(worst) + " deg";
  return out;
}

Outcome identity_metrics() {
  const GazeSignal gt = generate_scanpath(ScanpathConfig{});
  const MetricReport r = evaluate_metrics(gt, gt);
  bool all_zero = r.acc_h_mean == 0.0 && r.acc_v_mean == 0.0 && r.cross_hv_mean == 0.0 &&
                  r.cross_vh_mean == 0.0;
  for (double v : r.accuracy.acc_h_deg) all_zero = all_zero && v == 0.0;
  for (double v : r.accuracy.acc_v_deg) all_zero = all_zero && v == 0.0;
  for (double v : r.crosstalk.cross_hv) all_zero = all_zero && v == 0.0;
  for (double v : r.crosstalk.cross_vh) all_zero = all_zero && v == 0.0;
  Outcome out;
  out.pass = all_zero;
  out.detail = all_zero ? "sim == gt gives exact zeros for accuracy and crosstalk"
                        : "nonzero metric on an identity signal";
  return out;
}

Outcome crosstalk_null() {
  Scene scene{};
  scene.eye.eyelids_enabled = false; // mirror-symmetric model
  SimOptions opts;
  opts.cache = std::make_shared<RenderCache>();
  SensorSampler sampler(scene, build_design(D1Params{}, scene.eye), opts);
  const CalibrationModel calibration = calibrate_design(sampler);
  const GazeSignal gt = generate_scanpath(ScanpathConfig{});
  const GazeSignal est = simulate_signal(sampler, gt, calibration);
  const MetricReport r = evaluate_metrics(est, gt);
  Outcome out;
  out.pass = !r.crosstalk.cross_hv.empty() && r.cross_hv_mean < 0.001;
  out.detail = "D1 cross HV on pure vertical dwells = " + format_g9(100.0 * r.cross_hv_mean) +
               "% (limit 0.1%)";
  return out;
}

Outcome photovoltaic_linearity() {
  oracle::Rng rng(606);
  bool exact = true;
  for (int k = 0; k < 100; ++k) {
    PhotodiodeConfig pd;
    pd.responsivity_a_per_w = rng.uniform(0.05, 1.5);
    pd.bias_voltage_v = 0.0;
    pd.reverse_saturation_current_a = rng.uniform(1e-12, 1e-8);
    pd.temperature_k = rng.uniform(250.0, 350.0);
    const double power = rng.uniform(0.0, 2e-3);
    exact = exact && photodiode_current(pd, power) == pd.responsivity_a_per_w * power;
  }
  Outcome out;
  out.pass = exact;
  out.detail = exact ? "zero-bias output equals responsivity * power for 100 random pairs"
                     : "zero-bias output deviated from responsivity * power";
  return out;
}

struct SweepContext {
  SweepResult sweep;
  bool ready = false;
};

Outcome sweep_trend(SweepContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scene scene{};
  const GazeSignal gt = generate_scanpath(ScanpathConfig{});

  SweepGrid grid;
  grid.design = DesignName::D1;
  grid.axes = {{"length", {}}, {"width", {}}};
  for (int v = 1; v <= 12; ++v) {
    grid.axes[0].values.push_back(v);
    grid.axes[1].values.push_back(v);
  }

  ExperimentOptions opts;
  opts.cache = std::make_shared<RenderCache>();
  ctx.sweep = run_sweep(grid, scene, gt, opts);
  ctx.ready = true;
  const double elapsed = seconds_since(t0);

  double grid_min = std::numeric_limits<double>::infinity();
  double small_l_sum = 0.0;
  int small_l_count = 0;
  std::size_t failed = 0;
  for (const auto& cell : ctx.sweep.cells) {
    if (!cell.ok) {
      ++failed;
      continue;
    }
    grid_min = std::min(grid_min, cell.report.acc_h_mean);
    if (cell.params[0] <= 1.0) {
      small_l_sum += cell.report.acc_h_mean;
      ++small_l_count;
    }
  }
  const double small_l_mean = small_l_sum / std::max(1, small_l_count);

  Outcome out;
  out.pass = failed == 0 && grid_min < 1.0 && small_l_mean >= 2.0 * grid_min && elapsed < 600.0;
  out.detail = "best acc H = " + format_g9(grid_min) + " deg; mean acc H at L<=1mm = " +
               format_g9(small_l_mean) + " deg (ratio " + format_g9(small_l_mean / grid_min) +
               "x); " + std::to_string(failed) + " failed cells; " + format_g9(elapsed) + " s";
  return out;
}

Outcome shift_degradation() {
  const auto t0 = std::chrono::steady_clock::now();
  const Scene scene{};
  const ShiftExperimentConfig config{}; // 9 shifts x 41 positions, all 4 combos

  const auto clusters = run_shift_experiment(D1Params{}, scene, config);
  const double elapsed = seconds_since(t0);

  bool baselines_zero = true;
  for (const auto& cluster : clusters) {
    for (std::size_t si = 0; si < cluster.curves.size(); ++si)
      if (cluster.curves[si].shift_mm == 0.0) baselines_zero &= cluster.mae_deg[si] == 0.0;
  }

  auto mae_at = [&](ShiftCombination combo, double shift) {
    for (const auto& cluster : clusters)
      if (cluster.combination == combo)
        for (std::size_t si = 0; si < cluster.curves.size(); ++si)
          if (cluster.curves[si].shift_mm == shift) return cluster.mae_deg[si];
    return -1.0;
  };
  const double hh_neg = mae_at(ShiftCombination::HH, -2.0);
  const double hh_pos = mae_at(ShiftCombination::HH, 2.0);
  const double vv_neg = mae_at(ShiftCombination::VV, -2.0);
  const double vv_pos = mae_at(ShiftCombination::VV, 2.0);
  const bool degrades = hh_neg > 0.0 && hh_pos > 0.0 && vv_neg > 0.0 && vv_pos > 0.0;

  Outcome out;
  out.pass = baselines_zero && degrades && elapsed < 300.0;
  out.detail = "zero-shift MAE exactly 0 in all clusters: " +
               std::string(baselines_zero ? "yes" : "NO") + "; MAE at +/-2mm H-H = (" +
               format_g9(hh_neg) + ", " + format_g9(hh_pos) + ") deg, V-V = (" +
               format_g9(vv_neg) + ", " + format_g9(vv_pos) + ") deg; " + format_g9(elapsed) +
               " s";
  return out;
}

Outcome tradeoff_dominance(const SweepContext& ctx) {
  Outcome out;

  // Synthetic 1-D oracle case: f1 = (x-1)^2, f2 = (x+1)^2 on x = -2..2 by 0.5.
  SweepResult synthetic;
  synthetic.design = DesignName::D3;
  synthetic.axes = {{"diameter", {}}};
  for (int i = -4; i <= 4; ++i) {
    const double x = 0.5 * i;
    synthetic.axes[0].values.push_back(x);
    SweepCell cell;
    cell.params = {x};
    cell.ok = true;
    cell.report.acc_h_mean = (x - 1.0) * (x - 1.0);
    cell.report.cross_hv_mean = (x + 1.0) * (x + 1.0);
    synthetic.cells.push_back(cell);
  }
  const auto synth =
      tradeoff_optimize(synthetic, {TradeoffGroup{{MetricId::AccH, MetricId::CrossHV}}});
  const bool oracle_exact = synth.size() == 1 && synth[0].params == std::vector<double>{0.0} &&
                            synth[0].achieved == std::vector<double>{1.0, 1.0};

  if (!ctx.ready) {
    out.pass = false;
    out.detail = "sweep unavailable (criterion 7 crashed)";
    return out;
  }
  bool dominated = true;
  std::string worst;
  for (const auto& result :
       tradeoff_optimize(ctx.sweep, default_tradeoff_groups(ctx.sweep.design))) {
    for (std::size_t m = 0; m < result.achieved.size(); ++m)
      if (!(result.achieved[m] >= result.optima[m])) {
        dominated = false;
        worst = to_string(result.group.metrics[m]);
      }
  }

  out.pass = oracle_exact && dominated;
  out.detail = std::string("synthetic oracle returned x = ") +
               (synth.empty() ? "?" : format_g9(synth[0].params[0])) +
               " with values (1, 1): " + (oracle_exact ? "yes" : "NO") +
               "; trade-off >= per-metric optima on the D1 sweep: " +
               (dominated ? "yes" : ("NO (" + worst + ")"));
  return out;
}

Outcome determinism() {
  const std::string config_text =
      "[design]\n"
      "name = D1\n"
      "length = 1:12:2\n"
      "width = 2, 4, 6\n"
      "[scanpath]\n"
      "dwell_seconds = 0.25\n"
      "[experiment]\n"
      "mode = sweep\n"
      "[output]\n"
      "seed = 12345\n";
  const RunConfig cfg = parse_run_config(config_text);
  const GazeSignal gt = generate_scanpath(cfg.scanpath);

  auto run_bundle = [&](int workers, const fs::path& dir) {
    ExperimentOptions opts;
    opts.workers = workers;
    opts.seed = cfg.output.seed;
    opts.cache = std::make_shared<RenderCache>();
    const SweepResult sweep = run_sweep(cfg.design.grid(), cfg.scene, gt, opts);

    HeatmapSurface surface;
    surface.title = "acc H";
    surface.x_label = "width_mm";
    surface.y_label = "length_mm";
    surface.x_values = sweep.axes[1].values;
    surface.y_values = sweep.axes[0].values;
    for (const auto& cell : sweep.cells)
      surface.cells.push_back(cell.ok ? cell.report.acc_h_mean
                                      : std::numeric_limits<double>::quiet_NaN());

    ResultsBundle bundle;
    bundle.config_hash_hex = config_hash_hex(cfg);
    bundle.seed = cfg.output.seed;
    bundle.add("config.txt", serialize_run_config(cfg));
    bundle.add("sweep.csv", sweep_csv(sweep));
    bundle.add("acc_h.svg", emit_heatmap_svg(surface));
    write_results(bundle, dir);
  };

  const fs::path base = fs::temp_directory_path() / "psog_acceptance_det";
  fs::remove_all(base);
  run_bundle(1, base / "a");
  run_bundle(4, base / "b");

  // Compare the complete directories byte for byte.
  bool identical = true;
  std::string mismatch;
  std::size_t count_a = 0, count_b = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    ++count_a;
    const fs::path other = base / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      identical = false;
      mismatch = entry.path().filename().string();
    }
  }
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(base / "b")) ++count_b;
  identical = identical && count_a == count_b && count_a == 4;
  fs::remove_all(base);

  Outcome out;
  out.pass = identical;
  out.detail = identical
                   ? "1-worker and 4-worker bundles are byte-identical (all 4 files)"
                   : (mismatch.empty() ? "bundle file sets differ" : "differs: " + mismatch);
  return out;
}

} // namespace

int main() {
  SweepContext sweep_ctx;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"binning oracle (<= 1e-12 over 1000 cases, < 10 s)", binning_oracle},
      {"calibration exactness (<= 1e-9 deg, all designs)", calibration_exactness},
      {"affine invariance (<= 1e-6 deg across +/-10 deg scan)", affine_invariance},
      {"identity metrics (exact zeros)", identity_metrics},
      {"symmetric-model crosstalk null (< 0.1%)", crosstalk_null},
      {"photovoltaic linearity (machine precision, 100 pairs)", photovoltaic_linearity},
      {"qualitative sweep trend (acc < 1 deg region; L <= 1 mm >= 2x worse)",
       [&] { return sweep_trend(sweep_ctx); }},
      {"shift baseline and degradation (MAE 0 at 0; > 0 at |2 mm|)", shift_degradation},
      {"trade-off dominance (>= optima; 1-D oracle exact)",
       [&] { return tradeoff_dominance(sweep_ctx); }},
      {"determinism (byte-identical bundles across worker counts)", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.pass) ++failures;
    std::printf("%s  criterion %2zu: %s | %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
