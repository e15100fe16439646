// psog: photosensor oculography simulation toolkit.
//
// Subcommands: render, calibrate, run, sweep, tradeoff, shift, report.
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "psog/psog.hpp"

namespace fs = std::filesystem;
using namespace psog;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir;      // overrides output.directory when set
  std::uint64_t seed = 0;   // overrides output.seed when set on the command line
  bool seed_set = false;
  int workers = 0;
};

RunConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) throw ConfigError("--config PATH is required");
  std::string text;
  try {
    text = slurp(args.config_path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  RunConfig cfg = parse_run_config(text);
  if (!args.out_dir.empty()) cfg.output.directory = args.out_dir;
  if (args.seed_set) cfg.output.seed = args.seed;
  return cfg;
}

void require_mode(const RunConfig& cfg, ExperimentMode mode) {
  if (cfg.mode != mode)
    throw ConfigError(std::string("config experiment mode is '") + to_string(cfg.mode) +
                      "' but this subcommand needs '" + to_string(mode) + "'");
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

ResultsBundle make_bundle(const RunConfig& cfg) {
  ResultsBundle bundle;
  bundle.config_hash_hex = config_hash_hex(cfg);
  bundle.seed = cfg.output.seed;
  if (cfg.output.timestamps) bundle.timestamp = now_iso8601();
  bundle.add("config.txt", serialize_run_config(cfg));
  return bundle;
}

ExperimentOptions experiment_options(const RunConfig& cfg, const CommonArgs& args) {
  ExperimentOptions opts;
  opts.workers = args.workers;
  opts.seed = cfg.output.seed;
  opts.noise_stddev = cfg.noise_stddev;
  opts.cache = std::make_shared<RenderCache>();
  return opts;
}

void add_sweep_heatmaps(ResultsBundle& bundle, const SweepResult& sweep) {
  static const std::array<std::pair<MetricId, const char*>, 4> metrics{
      {{MetricId::AccH, "accuracy H (deg)"},
       {MetricId::AccV, "accuracy V (deg)"},
       {MetricId::CrossHV, "crosstalk H<-V (%)"},
       {MetricId::CrossVH, "crosstalk V<-H (%)"}}};

  for (const auto& [metric, label] : metrics) {
    const bool percent = metric == MetricId::CrossHV || metric == MetricId::CrossVH;
    auto value_of = [&](const SweepCell& cell) {
      const double v = cell.ok ? metric_value(cell.report, metric)
                               : std::numeric_limits<double>::quiet_NaN();
      return percent ? v * 100.0 : v;
    };

    if (sweep.axes.size() == 1) {
      CurveFamily family;
      family.title = std::string(to_string(sweep.design)) + " " + label;
      family.x_label = axis_column(sweep.axes[0].name);
      family.y_label = label;
      family.x = sweep.axes[0].values;
      CurveFamily::Curve curve;
      curve.label = to_string(metric);
      for (const auto& cell : sweep.cells) curve.y.push_back(value_of(cell));
      family.curves.push_back(std::move(curve));
      bundle.add(std::string(to_string(metric)) + ".svg", emit_curves_svg(family));
      continue;
    }

    // 2-D slice over the first two axes; extra axes are fixed at the grid
    // optimum for this metric.
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sweep.cells.size(); ++i) {
      const double v = value_of(sweep.cells[i]);
      if (std::isfinite(v) && v < best_value) {
        best_value = v;
        best = i;
      }
    }
    const std::vector<double> anchor = sweep.cells[best].params;

    HeatmapSurface surface;
    surface.title = std::string(to_string(sweep.design)) + " " + label;
    surface.x_label = axis_column(sweep.axes[1].name);
    surface.y_label = axis_column(sweep.axes[0].name);
    surface.x_values = sweep.axes[1].values;
    surface.y_values = sweep.axes[0].values;
    for (std::size_t extra = 2; extra < sweep.axes.size(); ++extra)
      surface.title += " @ " + axis_column(sweep.axes[extra].name) + "=" +
                       format_g9(anchor[extra]);
    surface.cells.reserve(surface.x_values.size() * surface.y_values.size());

    for (double y : surface.y_values) {
      for (double x : surface.x_values) {
        double found = std::numeric_limits<double>::quiet_NaN();
        for (const auto& cell : sweep.cells) {
          if (cell.params[0] != y || cell.params[1] != x) continue;
          bool slice = true;
          for (std::size_t extra = 2; extra < sweep.axes.size(); ++extra)
            slice = slice && cell.params[extra] == anchor[extra];
          if (slice) {
            found = value_of(cell);
            break;
          }
        }
        surface.cells.push_back(found);
      }
    }
    bundle.add(std::string(to_string(metric)) + ".svg", emit_heatmap_svg(surface));
  }
}

int cmd_render(const CommonArgs& args, const EyeState& state, double shift_x, double shift_y,
               const std::string& import_path, const std::string& basename) {
  RunConfig cfg = load_config(args);
  cfg.scene.camera.shift_x_mm += shift_x;
  cfg.scene.camera.shift_y_mm += shift_y;
  const fs::path dir = cfg.output.directory;
  fs::create_directories(dir);

  if (!import_path.empty()) {
    ImageMeta meta;
    try {
      meta = parse_image_meta(slurp(import_path + ".meta"));
    } catch (const IoError& e) {
      throw ConfigError(std::string("missing sidecar metadata: ") + e.what());
    }
    const EyeImage img = import_eye_image(slurp(import_path), meta);
    std::printf("imported %dx%d graymap, %.6g mm/px, intensities [%.6g, %.6g]\n", img.cols,
                img.rows, img.mm_per_pixel_x,
                *std::min_element(img.intensities.begin(), img.intensities.end()),
                *std::max_element(img.intensities.begin(), img.intensities.end()));
    const fs::path out = dir / (basename + ".pgm");
    std::ofstream f(out, std::ios::binary);
    f << export_eye_image(img);
    std::ofstream m(out.string() + ".meta", std::ios::binary);
    m << serialize_image_meta(meta_of(img));
    std::printf("re-exported to %s\n", out.string().c_str());
    return 0;
  }

  const EyeImage img =
      render_eye_image(cfg.scene.eye, cfg.scene.camera, state, cfg.scene.lighting);
  const fs::path out = dir / (basename + ".pgm");
  std::ofstream f(out, std::ios::binary);
  f << export_eye_image(img);
  std::ofstream m(out.string() + ".meta", std::ios::binary);
  m << serialize_image_meta(meta_of(img));
  std::printf("rendered %dx%d image at yaw %.3g, pitch %.3g, pupil %.3g mm -> %s\n",
              img.cols, img.rows, state.yaw_deg, state.pitch_deg, state.pupil_diameter_mm,
              out.string().c_str());
  return 0;
}

int cmd_calibrate(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  SensorSampler sampler(cfg.scene, build_design(cfg.design.scalar_params(), cfg.scene.eye,
                                                cfg.design.layout));
  const CalibrationModel model = calibrate_design(sampler);

  ResultsBundle bundle = make_bundle(cfg);
  bundle.add("calibration.csv", calibration_csv(model));
  write_results(bundle, cfg.output.directory);
  std::printf("horizontal: a=%s b=%s c=%s residual=%s deg\n", format_g9(model.horizontal.a).c_str(),
              format_g9(model.horizontal.b).c_str(), format_g9(model.horizontal.c).c_str(),
              format_g9(model.horizontal.residual_deg).c_str());
  std::printf("vertical:   a=%s b=%s c=%s residual=%s deg\n", format_g9(model.vertical.a).c_str(),
              format_g9(model.vertical.b).c_str(), format_g9(model.vertical.c).c_str(),
              format_g9(model.vertical.residual_deg).c_str());
  return 0;
}

int cmd_run(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  require_mode(cfg, ExperimentMode::Single);

  const GazeSignal gt = generate_scanpath(cfg.scanpath);
  SimOptions sim;
  sim.noise_stddev = cfg.noise_stddev;
  sim.noise_seed = mix_seed(cfg.output.seed, 0);
  sim.cache = std::make_shared<RenderCache>();
  SensorSampler sampler(cfg.scene, build_design(cfg.design.scalar_params(), cfg.scene.eye,
                                                cfg.design.layout), sim);
  const CalibrationModel calibration = calibrate_design(sampler);
  const GazeSignal est = simulate_signal(sampler, gt, calibration);
  const MetricReport report = evaluate_metrics(est, gt);

  ResultsBundle bundle = make_bundle(cfg);
  bundle.add("calibration.csv", calibration_csv(calibration));
  bundle.add("metrics.csv", metrics_csv(report));
  bundle.add("fixation_metrics.csv", fixation_metrics_csv(report));
  bundle.add("signal.csv", signal_csv(est, gt));
  write_results(bundle, cfg.output.directory);

  std::printf("accuracy H %.4g deg (std %.4g), V %.4g deg (std %.4g)\n", report.acc_h_mean,
              report.acc_h_std, report.acc_v_mean, report.acc_v_std);
  std::printf("crosstalk H<-V %.4g%% (std %.4g), V<-H %.4g%% (std %.4g)\n",
              100.0 * report.cross_hv_mean, 100.0 * report.cross_hv_std,
              100.0 * report.cross_vh_mean, 100.0 * report.cross_vh_std);
  return 0;
}

int cmd_sweep(const CommonArgs& args, bool with_tradeoff) {
  const RunConfig cfg = load_config(args);
  require_mode(cfg, with_tradeoff ? ExperimentMode::Tradeoff : ExperimentMode::Sweep);

  const GazeSignal gt = generate_scanpath(cfg.scanpath);
  const SweepGrid grid = cfg.design.grid();
  const SweepResult sweep = run_sweep(grid, cfg.scene, gt, experiment_options(cfg, args));

  std::size_t failed = 0;
  for (const auto& cell : sweep.cells)
    if (!cell.ok) {
      ++failed;
      std::fprintf(stderr, "cell failed: %s\n", cell.error.c_str());
    }

  ResultsBundle bundle = make_bundle(cfg);
  bundle.add("sweep.csv", sweep_csv(sweep));
  if (cfg.output.svg) add_sweep_heatmaps(bundle, sweep);

  if (with_tradeoff) {
    const auto results = tradeoff_optimize(sweep, default_tradeoff_groups(sweep.design));
    std::string csv = tradeoff_csv(sweep, results);
    csv += std::string("# method = ") + tradeoff_method_note() + "\n";
    bundle.add("tradeoff.csv", csv);
    for (const auto& r : results) {
      std::printf("trade-off group:");
      for (MetricId m : r.group.metrics) std::printf(" %s", to_string(m));
      std::printf("\n  parameters:");
      for (std::size_t i = 0; i < r.params.size(); ++i)
        std::printf(" %s=%s", axis_column(sweep.axes[i].name).c_str(),
                    format_g9(r.params[i]).c_str());
      std::printf(" (after %d expansion steps)\n", r.iterations);
      for (std::size_t m = 0; m < r.group.metrics.size(); ++m) {
        const bool pct = r.group.metrics[m] == MetricId::CrossHV ||
                         r.group.metrics[m] == MetricId::CrossVH;
        const double scale = pct ? 100.0 : 1.0;
        std::printf("  %s: %.4g%s (grid optimum %.4g%s)\n", to_string(r.group.metrics[m]),
                    scale * r.achieved[m], pct ? "%" : " deg", scale * r.optima[m],
                    pct ? "%" : " deg");
      }
    }
  }

  write_results(bundle, cfg.output.directory);
  std::printf("%zu cells (%zu failed) -> %s\n", sweep.cells.size(), failed,
              cfg.output.directory.c_str());
  return 0;
}

int cmd_shift(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  require_mode(cfg, ExperimentMode::Shift);

  const auto clusters =
      run_shift_experiment(cfg.design.scalar_params(), cfg.scene, cfg.shift,
                           experiment_options(cfg, args), cfg.design.layout);

  ResultsBundle bundle = make_bundle(cfg);
  bundle.add("shift_curves.csv", shift_curves_csv(clusters));
  bundle.add("shift_summary.csv", shift_summary_csv(clusters));
  if (cfg.output.svg) {
    for (const auto& cluster : clusters) {
      CurveFamily family;
      family.title = std::string("combination ") + to_string(cluster.combination);
      family.x_label = "ground-truth position (deg)";
      family.y_label = "estimated position (deg)";
      family.x = cluster.eye_positions_deg;
      for (const auto& curve : cluster.curves)
        family.curves.push_back(
            {"shift " + format_g9(curve.shift_mm) + " mm", curve.estimate_deg});
      std::string name = std::string("curves_") + to_string(cluster.combination) + ".svg";
      for (char& ch : name)
        if (ch == '-') ch = '_';
      bundle.add(name, emit_curves_svg(family));
    }
  }
  write_results(bundle, cfg.output.directory);

  for (const auto& cluster : clusters) {
    double worst = 0.0;
    for (double m : cluster.mae_deg) worst = std::max(worst, m);
    std::printf("%s: worst MAE across shifts %.4g deg\n", to_string(cluster.combination), worst);
  }
  return 0;
}

int cmd_report(const std::string& dir) {
  const fs::path path(dir);
  const fs::path manifest_path = path / "manifest.txt";
  const KvDocument manifest = KvDocument::parse(slurp(manifest_path));
  const auto* info = manifest.find("manifest");
  if (info) {
    for (const auto& e : info->entries)
      std::printf("%s: %s\n", e.key.c_str(), e.value.c_str());
  }
  const auto* files = manifest.find("files");
  if (!files) {
    std::printf("no files listed\n");
    return 0;
  }
  bool all_ok = true;
  for (const auto& e : files->entries) {
    const fs::path f = path / e.key;
    std::string status = "MISSING";
    if (fs::exists(f)) {
      status = hex64(fnv1a64(slurp(f))) == e.value ? "ok" : "HASH MISMATCH";
      if (status != "ok") all_ok = false;
    } else {
      all_ok = false;
    }
    std::printf("  %-24s %s\n", e.key.c_str(), status.c_str());
  }

  // Quick metric digest for known CSVs (crosstalk shown in percent).
  const fs::path metrics = path / "metrics.csv";
  if (fs::exists(metrics)) {
    const std::string text = slurp(metrics);
    std::printf("\nmetrics summary:\n");
    std::size_t pos = text.find('\n') + 1;
    while (pos < text.size()) {
      const std::size_t eol = text.find('\n', pos);
      const std::string line = text.substr(pos, eol - pos);
      pos = eol + 1;
      const std::size_t c1 = line.find(',');
      const std::size_t c2 = line.find(',', c1 + 1);
      const std::string name = line.substr(0, c1);
      const double mean = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      if (name.rfind("cross", 0) == 0)
        std::printf("  %-12s %.4g%%\n", name.c_str(), 100.0 * mean);
      else
        std::printf("  %-12s %.4g deg\n", name.c_str(), mean);
    }
  }
  return all_ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"photosensor oculography design simulator"};
  app.require_subcommand(1);

  CommonArgs common;
  EyeState render_state;
  std::string import_path, render_name = "eye", report_dir;
  double shift_x = 0.0, shift_y = 0.0;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", common.config_path, "run configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", common.out_dir, "output directory (overrides the config)");
    cmd->add_option("--seed", common.seed, "seed override")->each([&](const std::string&) {
      common.seed_set = true;
    });
    cmd->add_option("--workers", common.workers,
                    "worker thread count (0 = hardware; never affects results)");
  };

  auto* render = app.add_subcommand("render", "render one eye image to PGM + sidecar");
  add_common(render);
  render->add_option("--yaw", render_state.yaw_deg, "eye yaw in degrees");
  render->add_option("--pitch", render_state.pitch_deg, "eye pitch in degrees");
  render->add_option("--pupil", render_state.pupil_diameter_mm, "pupil diameter in mm");
  render->add_option("--shift-x", shift_x, "sensor shift x in mm");
  render->add_option("--shift-y", shift_y, "sensor shift y in mm");
  render->add_option("--name", render_name, "output basename");
  render->add_option("--import", import_path, "import an existing PGM (with .meta sidecar)");

  auto* calibrate = app.add_subcommand("calibrate", "fit the quadratic calibration");
  add_common(calibrate);
  auto* run = app.add_subcommand("run", "single end-to-end simulation");
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over the design grid");
  add_common(sweep);
  auto* tradeoff = app.add_subcommand("tradeoff", "sweep plus multi-objective trade-off");
  add_common(tradeoff);
  auto* shift = app.add_subcommand("shift", "sensor-shift degradation experiment");
  add_common(shift);
  auto* report = app.add_subcommand("report", "summarize and verify a results directory");
  report->add_option("dir", report_dir, "results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (render->parsed())
      return cmd_render(common, render_state, shift_x, shift_y, import_path, render_name);
    if (calibrate->parsed()) return cmd_calibrate(common);
    if (run->parsed()) return cmd_run(common);
    if (sweep->parsed()) return cmd_sweep(common, false);
    if (tradeoff->parsed()) return cmd_sweep(common, true);
    if (shift->parsed()) return cmd_shift(common);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
