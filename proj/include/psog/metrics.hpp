#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "psog/errors.hpp"

namespace psog {

enum class FixationLabel { Horizontal, Vertical, Center };

inline const char* to_string(FixationLabel l) {
  switch (l) {
    case FixationLabel::Horizontal: return "H";
    case FixationLabel::Vertical: return "V";
    case FixationLabel::Center: return "center";
  }
  return "?";
}

/// Half-open sample range [begin, end) of one fixation.
struct Fixation {
  std::size_t begin = 0;
  std::size_t end = 0;
  FixationLabel label = FixationLabel::Center;

  std::size_t size() const { return end - begin; }
};

struct GazeSample {
  double t_s = 0.0;
  double h_deg = 0.0;
  double v_deg = 0.0;
};

/// Uniformly sampled gaze trace with fixation annotations. Fixations are
/// carried by the ground-truth signal; estimated signals reuse them.
struct GazeSignal {
  double sample_rate_hz = 1000.0;
  std::vector<GazeSample> samples;
  std::vector<Fixation> fixations;
};

namespace detail {

inline FixationLabel dwell_label(double h, double v) {
  if (h == 0.0 && v == 0.0) return FixationLabel::Center;
  return std::abs(h) >= std::abs(v) ? FixationLabel::Horizontal : FixationLabel::Vertical;
}

/// Turns dwell boundaries into fixations, trimming the settle head and the
/// tail of each dwell. Dwells too short for the exclusions (or shorter than
/// 10 samples after trimming) yield a warning instead of a fixation.
inline std::vector<Fixation> fixations_from_dwells(const GazeSignal& signal,
                                                   std::span<const std::size_t> dwell_starts,
                                                   double settle_ms, double tail_ms,
                                                   std::vector<std::string>* warnings) {
  const auto head = static_cast<std::size_t>(
      std::lround(settle_ms * signal.sample_rate_hz / 1000.0));
  const auto tail =
      static_cast<std::size_t>(std::lround(tail_ms * signal.sample_rate_hz / 1000.0));
  std::vector<Fixation> out;
  for (std::size_t k = 0; k < dwell_starts.size(); ++k) {
    const std::size_t start = dwell_starts[k];
    const std::size_t stop =
        (k + 1 < dwell_starts.size()) ? dwell_starts[k + 1] : signal.samples.size();
    if (stop - start <= head + tail || stop - start - head - tail < 10) {
      if (warnings)
        warnings->push_back("dwell at sample " + std::to_string(start) + " (" +
                            std::to_string(stop - start) +
                            " samples) too short for fixation exclusions; skipped");
      continue;
    }
    out.push_back(Fixation{start + head, stop - tail,
                           dwell_label(signal.samples[start + head].h_deg,
                                       signal.samples[start + head].v_deg)});
  }
  return out;
}

} // namespace detail

/// Segments a piecewise-constant ground-truth signal into fixations: one per
/// dwell, excluding the first settle_ms and last tail_ms. Labels follow the
/// dwell's nonzero axis (H, V, or center).
inline std::vector<Fixation> segment_fixations(const GazeSignal& gt, double settle_ms = 80.0,
                                               double tail_ms = 20.0,
                                               std::vector<std::string>* warnings = nullptr) {
  if (gt.samples.empty()) return {};
  std::vector<std::size_t> dwell_starts{0};
  for (std::size_t i = 1; i < gt.samples.size(); ++i)
    if (gt.samples[i].h_deg != gt.samples[i - 1].h_deg ||
        gt.samples[i].v_deg != gt.samples[i - 1].v_deg)
      dwell_starts.push_back(i);
  return detail::fixations_from_dwells(gt, dwell_starts, settle_ms, tail_ms, warnings);
}

struct AccuracyVectors {
  std::vector<double> acc_h_deg; // one entry per H-labeled fixation
  std::vector<double> acc_v_deg; // one entry per V-labeled fixation
};

/// Fixation-gated mean absolute error per axis. Fixations come from the
/// ground-truth signal; center dwells contribute to neither vector.
inline AccuracyVectors compute_accuracy(const GazeSignal& sim, const GazeSignal& gt) {
  if (sim.samples.size() != gt.samples.size())
    throw ContractError("compute_accuracy: signals differ in length (" +
                        std::to_string(sim.samples.size()) + " vs " +
                        std::to_string(gt.samples.size()) + ")");
  AccuracyVectors out;
  for (const Fixation& f : gt.fixations) {
    if (f.label == FixationLabel::Center) continue;
    double sum = 0.0;
    for (std::size_t i = f.begin; i < f.end; ++i)
      sum += f.label == FixationLabel::Horizontal
                 ? std::abs(sim.samples[i].h_deg - gt.samples[i].h_deg)
                 : std::abs(sim.samples[i].v_deg - gt.samples[i].v_deg);
    const double acc = sum / static_cast<double>(f.size());
    (f.label == FixationLabel::Horizontal ? out.acc_h_deg : out.acc_v_deg).push_back(acc);
  }
  return out;
}

struct CrosstalkVectors {
  std::vector<double> cross_hv; // fraction, one entry per usable V fixation
  std::vector<double> cross_vh; // fraction, one entry per usable H fixation
  std::vector<std::string> skipped;
};

/// Stray-channel ratio per fixation: |sum(sim_h) - sum(gt_h)| / |sum(gt_v)|
/// over V-labeled fixations and the symmetric form over H-labeled ones.
/// Fixations whose driving-axis sum is zero are skipped with a diagnostic.
inline CrosstalkVectors compute_crosstalk(const GazeSignal& sim, const GazeSignal& gt) {
  if (sim.samples.size() != gt.samples.size())
    throw ContractError("compute_crosstalk: signals differ in length (" +
                        std::to_string(sim.samples.size()) + " vs " +
                        std::to_string(gt.samples.size()) + ")");
  CrosstalkVectors out;
  for (const Fixation& f : gt.fixations) {
    if (f.label == FixationLabel::Center) continue;
    double sim_h = 0.0, sim_v = 0.0, gt_h = 0.0, gt_v = 0.0;
    for (std::size_t i = f.begin; i < f.end; ++i) {
      sim_h += sim.samples[i].h_deg;
      sim_v += sim.samples[i].v_deg;
      gt_h += gt.samples[i].h_deg;
      gt_v += gt.samples[i].v_deg;
    }
    const double driver = f.label == FixationLabel::Vertical ? gt_v : gt_h;
    if (driver == 0.0) {
      out.skipped.push_back("fixation at sample " + std::to_string(f.begin) +
                            ": driving-axis sum is zero, crosstalk undefined");
      continue;
    }
    if (f.label == FixationLabel::Vertical)
      out.cross_hv.push_back(std::abs((sim_h - gt_h) / gt_v));
    else
      out.cross_vh.push_back(std::abs((sim_v - gt_v) / gt_h));
  }
  return out;
}

/// Mean absolute difference between two estimate curves sampled on the same
/// ground-truth position grid (sensor-shift degradation measure).
inline double mae_between_curves(std::span<const std::pair<double, double>> curve_i,
                                 std::span<const std::pair<double, double>> curve_0) {
  if (curve_i.size() != curve_0.size() || curve_i.empty())
    throw ContractError("mae_between_curves: curves must share a nonempty grid");
  double sum = 0.0;
  for (std::size_t j = 0; j < curve_i.size(); ++j) {
    if (curve_i[j].first != curve_0[j].first)
      throw ContractError("mae_between_curves: grid mismatch at index " + std::to_string(j));
    sum += std::abs(curve_i[j].second - curve_0[j].second);
  }
  return sum / static_cast<double>(curve_i.size());
}

namespace detail {

inline std::pair<double, double> mean_std(std::span<const double> v) {
  // No fixations of a kind = no data, not a zero score.
  if (v.empty())
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

} // namespace detail

/// Per-run metric summary: means and sample standard deviations of the
/// per-fixation accuracy (degrees) and crosstalk (fraction) vectors.
struct MetricReport {
  double acc_h_mean = 0.0, acc_h_std = 0.0;
  double acc_v_mean = 0.0, acc_v_std = 0.0;
  double cross_hv_mean = 0.0, cross_hv_std = 0.0;
  double cross_vh_mean = 0.0, cross_vh_std = 0.0;
  AccuracyVectors accuracy;
  CrosstalkVectors crosstalk;

  static MetricReport from(AccuracyVectors acc, CrosstalkVectors cross) {
    MetricReport r;
    std::tie(r.acc_h_mean, r.acc_h_std) = detail::mean_std(acc.acc_h_deg);
    std::tie(r.acc_v_mean, r.acc_v_std) = detail::mean_std(acc.acc_v_deg);
    std::tie(r.cross_hv_mean, r.cross_hv_std) = detail::mean_std(cross.cross_hv);
    std::tie(r.cross_vh_mean, r.cross_vh_std) = detail::mean_std(cross.cross_vh);
    r.accuracy = std::move(acc);
    r.crosstalk = std::move(cross);
    return r;
  }
};

inline MetricReport evaluate_metrics(const GazeSignal& sim, const GazeSignal& gt) {
  return MetricReport::from(compute_accuracy(sim, gt), compute_crosstalk(sim, gt));
}

} // namespace psog
