#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "psog/calibration.hpp"
#include "psog/experiments.hpp"
#include "psog/hash.hpp"
#include "psog/kvconfig.hpp"

namespace psog {

inline constexpr const char* kToolVersion = "0.1.0";

/// Canonical number format for result files: 9 significant digits.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string axis_column(const std::string& axis_name) {
  return axis_name == "angle" ? "angle_deg" : axis_name + "_mm";
}

/// One row per cell: parameter columns then the eight metric statistics.
/// Crosstalk is stored as a fraction; reports display percent.
inline std::string sweep_csv(const SweepResult& sweep) {
  std::string out;
  for (const auto& axis : sweep.axes) out += axis_column(axis.name) + ",";
  out += "acc_h_mean,acc_h_std,acc_v_mean,acc_v_std,"
         "cross_hv_mean,cross_hv_std,cross_vh_mean,cross_vh_std\n";
  for (const SweepCell& cell : sweep.cells) {
    for (double p : cell.params) out += format_g9(p) + ",";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const MetricReport& r = cell.report;
    const double vals[8] = {cell.ok ? r.acc_h_mean : nan,    cell.ok ? r.acc_h_std : nan,
                            cell.ok ? r.acc_v_mean : nan,    cell.ok ? r.acc_v_std : nan,
                            cell.ok ? r.cross_hv_mean : nan, cell.ok ? r.cross_hv_std : nan,
                            cell.ok ? r.cross_vh_mean : nan, cell.ok ? r.cross_vh_std : nan};
    for (int i = 0; i < 8; ++i) {
      out += format_g9(vals[i]);
      out += i == 7 ? '\n' : ',';
    }
  }
  return out;
}

/// One row per (combination, shift, ground-truth position, estimate).
inline std::string shift_curves_csv(const std::vector<ShiftCurveCluster>& clusters) {
  std::string out = "combination,shift_mm,gt_deg,estimate_deg\n";
  for (const auto& cluster : clusters)
    for (const auto& curve : cluster.curves)
      for (std::size_t j = 0; j < curve.estimate_deg.size(); ++j)
        out += std::string(to_string(cluster.combination)) + "," + format_g9(curve.shift_mm) +
               "," + format_g9(cluster.eye_positions_deg[j]) + "," +
               format_g9(curve.estimate_deg[j]) + "\n";
  return out;
}

/// One row per (combination, shift) with the MAE against the zero-shift curve.
inline std::string shift_summary_csv(const std::vector<ShiftCurveCluster>& clusters) {
  std::string out = "combination,shift_mm,mae_deg\n";
  for (const auto& cluster : clusters)
    for (std::size_t si = 0; si < cluster.curves.size(); ++si)
      out += std::string(to_string(cluster.combination)) + "," +
             format_g9(cluster.curves[si].shift_mm) + "," + format_g9(cluster.mae_deg[si]) + "\n";
  return out;
}

inline std::string calibration_csv(const CalibrationModel& model) {
  std::string out = "axis,a,b,c,residual_deg\n";
  const auto row = [&](const char* axis, const AxisFit& f) {
    out += std::string(axis) + "," + format_g9(f.a) + "," + format_g9(f.b) + "," + format_g9(f.c) +
           "," + format_g9(f.residual_deg) + "\n";
  };
  row("horizontal", model.horizontal);
  row("vertical", model.vertical);
  return out;
}

inline std::string metrics_csv(const MetricReport& r) {
  std::string out = "metric,mean,std,fixations\n";
  const auto row = [&](const char* name, double mean, double std_, std::size_t n) {
    out += std::string(name) + "," + format_g9(mean) + "," + format_g9(std_) + "," +
           std::to_string(n) + "\n";
  };
  row("acc_h_deg", r.acc_h_mean, r.acc_h_std, r.accuracy.acc_h_deg.size());
  row("acc_v_deg", r.acc_v_mean, r.acc_v_std, r.accuracy.acc_v_deg.size());
  row("cross_hv", r.cross_hv_mean, r.cross_hv_std, r.crosstalk.cross_hv.size());
  row("cross_vh", r.cross_vh_mean, r.cross_vh_std, r.crosstalk.cross_vh.size());
  return out;
}

inline std::string fixation_metrics_csv(const MetricReport& r) {
  std::string out = "metric,fixation_index,value\n";
  const auto rows = [&](const char* name, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out += std::string(name) + "," + std::to_string(i) + "," + format_g9(v[i]) + "\n";
  };
  rows("acc_h_deg", r.accuracy.acc_h_deg);
  rows("acc_v_deg", r.accuracy.acc_v_deg);
  rows("cross_hv", r.crosstalk.cross_hv);
  rows("cross_vh", r.crosstalk.cross_vh);
  return out;
}

inline std::string signal_csv(const GazeSignal& est, const GazeSignal& gt) {
  std::string out = "t_s,gt_h_deg,gt_v_deg,est_h_deg,est_v_deg\n";
  for (std::size_t i = 0; i < gt.samples.size(); ++i)
    out += format_g9(gt.samples[i].t_s) + "," + format_g9(gt.samples[i].h_deg) + "," +
           format_g9(gt.samples[i].v_deg) + "," + format_g9(est.samples[i].h_deg) + "," +
           format_g9(est.samples[i].v_deg) + "\n";
  return out;
}

inline std::string tradeoff_csv(const SweepResult& sweep,
                                const std::vector<TradeoffResult>& results) {
  std::string out = "group,";
  for (const auto& axis : sweep.axes) out += axis_column(axis.name) + ",";
  out += "metric,achieved,grid_optimum,iterations\n";
  for (std::size_t g = 0; g < results.size(); ++g) {
    const TradeoffResult& t = results[g];
    for (std::size_t m = 0; m < t.group.metrics.size(); ++m) {
      out += std::to_string(g) + ",";
      for (double p : t.params) out += format_g9(p) + ",";
      out += std::string(to_string(t.group.metrics[m])) + "," + format_g9(t.achieved[m]) + "," +
             format_g9(t.optima[m]) + "," + std::to_string(t.iterations) + "\n";
    }
  }
  return out;
}

/// Files of one run plus the reproducibility anchors for its manifest.
struct ResultsBundle {
  std::string config_hash_hex;
  std::uint64_t seed = 0;
  std::string timestamp; // empty = not recorded (keeps reruns byte-identical)
  std::vector<std::pair<std::string, std::string>> files;

  void add(std::string name, std::string content) {
    files.emplace_back(std::move(name), std::move(content));
  }
};

/// Writes every bundle file plus manifest.txt listing a content hash per
/// file. Returns the written paths.
inline std::vector<std::filesystem::path> write_results(const ResultsBundle& bundle,
                                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("write_results: cannot create directory " + dir.string());

  std::vector<std::filesystem::path> written;
  KvDocument manifest;
  manifest.set("manifest", "tool_version", kToolVersion);
  manifest.set("manifest", "config_hash", bundle.config_hash_hex);
  manifest.set("manifest", "seed", std::to_string(bundle.seed));
  if (!bundle.timestamp.empty()) manifest.set("manifest", "timestamp", bundle.timestamp);

  for (const auto& [name, content] : bundle.files) {
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_results: cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write_results: failed writing " + path.string());
    manifest.set("files", name, hex64(fnv1a64(content)));
    written.push_back(path);
  }

  const std::filesystem::path mpath = dir / "manifest.txt";
  std::ofstream mout(mpath, std::ios::binary);
  if (!mout) throw IoError("write_results: cannot open " + mpath.string() + " for writing");
  const std::string mtext = manifest.serialize();
  mout.write(mtext.data(), static_cast<std::streamsize>(mtext.size()));
  written.push_back(mpath);
  return written;
}

} // namespace psog
