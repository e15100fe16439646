#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "psog/errors.hpp"
#include "psog/metrics.hpp"

namespace psog {

/// Deterministic jumping-point stimulus: a block of center dwells, then for
/// each axis (horizontal first) and each amplitude a the dwell sequence
/// (+a, 0, -a, 0). Defaults give 4 + 2*4*4 = 36 one-second dwells at 1 kHz.
struct ScanpathConfig {
  double sample_rate_hz = 1000.0;
  double dwell_seconds = 1.0;
  std::vector<double> amplitudes_deg{2.5, 5.0, 7.5, 10.0};
  int initial_center_dwells = 4;
  double settle_ms = 80.0;      // fixation head exclusion
  double transition_ms = 0.0;   // optional linear ramp into each dwell; 0 = step

  void validate() const {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("scanpath: sample_rate must be > 0");
    if (!(dwell_seconds > 0.0)) throw ConfigError("scanpath: dwell_seconds must be > 0");
    if (amplitudes_deg.empty()) throw ConfigError("scanpath: amplitudes must be nonempty");
    double prev = 0.0;
    for (double a : amplitudes_deg) {
      if (!(a > prev))
        throw ConfigError("scanpath: amplitudes must be strictly increasing and positive");
      prev = a;
    }
    if (initial_center_dwells < 0)
      throw ConfigError("scanpath: initial_center_dwells must be >= 0");
    if (transition_ms < 0.0) throw ConfigError("scanpath: transition_ms must be >= 0");
  }
};

/// Generates the ground-truth signal with fixation labels attached.
inline GazeSignal generate_scanpath(const ScanpathConfig& config,
                                    std::vector<std::string>* warnings = nullptr) {
  config.validate();

  std::vector<std::pair<double, double>> dwells; // (h, v) per dwell
  for (int i = 0; i < config.initial_center_dwells; ++i) dwells.emplace_back(0.0, 0.0);
  for (int axis = 0; axis < 2; ++axis) {
    for (double a : config.amplitudes_deg) {
      for (double target : {+a, 0.0, -a, 0.0}) {
        if (axis == 0)
          dwells.emplace_back(target, 0.0);
        else
          dwells.emplace_back(0.0, target);
      }
    }
  }

  const auto per_dwell =
      static_cast<std::size_t>(std::lround(config.dwell_seconds * config.sample_rate_hz));
  const auto ramp =
      static_cast<std::size_t>(std::lround(config.transition_ms * config.sample_rate_hz / 1000.0));

  GazeSignal signal;
  signal.sample_rate_hz = config.sample_rate_hz;
  signal.samples.reserve(dwells.size() * per_dwell);
  std::vector<std::size_t> dwell_starts;
  dwell_starts.reserve(dwells.size());

  double prev_h = 0.0, prev_v = 0.0;
  for (const auto& [h, v] : dwells) {
    dwell_starts.push_back(signal.samples.size());
    for (std::size_t k = 0; k < per_dwell; ++k) {
      const double t = static_cast<double>(signal.samples.size()) / config.sample_rate_hz;
      if (ramp > 0 && k < ramp) {
        const double f = static_cast<double>(k + 1) / static_cast<double>(ramp);
        signal.samples.push_back({t, prev_h + f * (h - prev_h), prev_v + f * (v - prev_v)});
      } else {
        signal.samples.push_back({t, h, v});
      }
    }
    prev_h = h;
    prev_v = v;
  }

  signal.fixations =
      detail::fixations_from_dwells(signal, dwell_starts, config.settle_ms, 20.0, warnings);
  return signal;
}

} // namespace psog
