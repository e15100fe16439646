#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "psog/scanpath.hpp"

using namespace psog;

TEST_CASE("default scanpath envelope", "[scanpath]") {
  const GazeSignal s = generate_scanpath(ScanpathConfig{});
  CHECK(s.samples.size() == 36000); // 36 dwells x 1 s x 1 kHz
  CHECK(s.sample_rate_hz == 1000.0);
  CHECK_THAT(s.samples.back().t_s, Catch::Matchers::WithinAbs(35.999, 1e-9));

  double max_h = 0.0, max_v = 0.0;
  for (const auto& smp : s.samples) {
    max_h = std::max(max_h, std::abs(smp.h_deg));
    max_v = std::max(max_v, std::abs(smp.v_deg));
  }
  CHECK(max_h == 10.0);
  CHECK(max_v == 10.0);

  // 36 dwells, every one long enough to carry a fixation.
  CHECK(s.fixations.size() == 36);
  const auto h_count = std::count_if(s.fixations.begin(), s.fixations.end(), [](const Fixation& f) {
    return f.label == FixationLabel::Horizontal;
  });
  const auto v_count = std::count_if(s.fixations.begin(), s.fixations.end(), [](const Fixation& f) {
    return f.label == FixationLabel::Vertical;
  });
  CHECK(h_count == 8);  // (+a, -a) per amplitude, horizontal block
  CHECK(v_count == 8);
  CHECK(s.fixations.front().size() == 900);
}

TEST_CASE("single amplitude without center block gives 8 dwells", "[scanpath]") {
  ScanpathConfig cfg;
  cfg.amplitudes_deg = {5.0};
  cfg.initial_center_dwells = 0;
  const GazeSignal s = generate_scanpath(cfg);
  CHECK(s.samples.size() == 8000);

  // Dwell sequence per axis: (+5, 0, -5, 0).
  CHECK(s.samples[0].h_deg == 5.0);
  CHECK(s.samples[1000].h_deg == 0.0);
  CHECK(s.samples[2000].h_deg == -5.0);
  CHECK(s.samples[4000].v_deg == 5.0);
  CHECK(s.samples[6000].v_deg == -5.0);
}

TEST_CASE("scanpath validation and determinism", "[scanpath]") {
  ScanpathConfig bad;
  bad.amplitudes_deg = {5.0, 2.5};
  CHECK_THROWS_AS(generate_scanpath(bad), ConfigError);

  ScanpathConfig cfg;
  cfg.dwell_seconds = 0.25;
  const GazeSignal a = generate_scanpath(cfg);
  const GazeSignal b = generate_scanpath(cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].h_deg == b.samples[i].h_deg);
    CHECK(a.samples[i].v_deg == b.samples[i].v_deg);
  }
}

TEST_CASE("optional ramp transitions reach the dwell target", "[scanpath]") {
  ScanpathConfig cfg;
  cfg.amplitudes_deg = {10.0};
  cfg.initial_center_dwells = 1;
  cfg.transition_ms = 40.0;
  const GazeSignal s = generate_scanpath(cfg);
  // Ramp samples interpolate between 0 and +10 at the second dwell onset.
  CHECK(std::abs(s.samples[1000].h_deg) < 10.0);
  CHECK(s.samples[1000].h_deg > 0.0);
  CHECK(s.samples[1045].h_deg == 10.0);
  // Fixations exclude the 80 ms head, so ramps stay outside them.
  for (const auto& f : s.fixations)
    for (std::size_t i = f.begin; i < f.end; ++i)
      CHECK(s.samples[i].h_deg == s.samples[f.begin].h_deg);
}
