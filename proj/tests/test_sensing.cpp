#include <catch2/catch_amalgamated.hpp>

#include "psog/sensing.hpp"

#include "oracles.hpp"

using namespace psog;

namespace {

EyeImage flat_image(int rows, int cols, double value, double mmpp = 1.0) {
  EyeImage img;
  img.rows = rows;
  img.cols = cols;
  img.intensities.assign(static_cast<std::size_t>(rows) * cols, value);
  img.mm_per_pixel_x = mmpp;
  img.mm_per_pixel_y = mmpp;
  img.optical_center_row = rows * 0.5;
  img.optical_center_col = cols * 0.5;
  img.outside_fill = 0.65;
  return img;
}

} // namespace

TEST_CASE("gaussian window weights", "[sensing]") {
  SECTION("1x1 window is the zero-offset peak") {
    const auto w = gaussian_window_weights(1, 1);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == 1.0);
  }

  SECTION("3x3 window: center 1, corner exp(-4/9)") {
    const auto w = gaussian_window_weights(3, 3);
    CHECK(w[4] == 1.0);
    const double corner = std::exp(-4.0 / 9.0); // two offsets of 1px at sigma 1.5
    CHECK_THAT(w[0], Catch::Matchers::WithinAbs(corner, 1e-15));
    CHECK_THAT(corner, Catch::Matchers::WithinAbs(0.6412, 5e-5));
  }

  SECTION("weights are symmetric under row and column flips") {
    for (auto [rows, cols] : {std::pair{4, 7}, {5, 2}, {6, 6}}) {
      const auto w = gaussian_window_weights(rows, cols);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          CHECK(w[r * cols + c] == w[(rows - 1 - r) * cols + c]);
          CHECK(w[r * cols + c] == w[r * cols + (cols - 1 - c)]);
        }
    }
  }

  SECTION("invalid sizes are rejected") {
    CHECK_THROWS_AS(gaussian_window_weights(0, 3), ContractError);
  }
}

TEST_CASE("sensor output on hand-checked windows", "[sensing]") {
  SECTION("unmodulated 3x3 window over a constant field") {
    const EyeImage img = flat_image(7, 7, 0.5);
    const auto area = DetectionArea::rectangle(0.0, 0.0, 3.0, 3.0);
    CHECK(compute_sensor_output(img, area) == 0.5);
  }

  SECTION("unmodulated 2x2 window averages its pixels") {
    EyeImage img = flat_image(2, 2, 0.0);
    img.at(0, 0) = 0.1;
    img.at(0, 1) = 0.2;
    img.at(1, 0) = 0.3;
    img.at(1, 1) = 0.4;
    const auto area = DetectionArea::rectangle(0.0, 0.0, 2.0, 2.0);
    CHECK_THAT(compute_sensor_output(img, area), Catch::Matchers::WithinAbs(0.25, 1e-15));
  }

  SECTION("circular window on a constant 1.0 field gives the weight mean") {
    const EyeImage img = flat_image(11, 11, 1.0);
    const auto area = DetectionArea::circular(0.0, 0.0, 7.0);
    // Independent expectation: accumulate the Gaussian weights and divide by
    // the pixel count.
    double expected = 0.0;
    const auto w = gaussian_window_weights(7, 7);
    for (double x : w) expected += x;
    expected /= 49.0;
    const double out = compute_sensor_output(img, area);
    CHECK_THAT(out, Catch::Matchers::WithinAbs(expected, 1e-15));
    CHECK(out < 1.0);
  }
}

TEST_CASE("sensor output matches the brute-force oracle", "[sensing][oracle]") {
  oracle::Rng rng(20240811);
  int tilted = 0;
  for (int k = 0; k < 300; ++k) {
    const int rows = rng.uniform_int(8, 40);
    const int cols = rng.uniform_int(8, 40);
    const double mmpp = rng.uniform(0.05, 0.4);
    EyeImage img = oracle::random_image(rng, rows, cols, mmpp);

    DetectionArea area;
    const int kind = rng.uniform_int(0, 2);
    const double cx = rng.uniform(-0.3, 0.3) * cols * mmpp;
    const double cy = rng.uniform(-0.3, 0.3) * rows * mmpp;
    if (kind == 0) {
      area = DetectionArea::rectangle(cx, cy, rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0),
                                      rng.uniform_int(0, 1) ? 0.0 : 90.0);
    } else if (kind == 1) {
      area = DetectionArea::rectangle(cx, cy, rng.uniform(0.5, 6.0), rng.uniform(0.5, 6.0),
                                      rng.uniform(-89.0, 89.0));
      if (area.angle_deg == 0.0) area.angle_deg = 15.0;
      ++tilted;
    } else {
      area = DetectionArea::circular(cx, cy, rng.uniform(0.5, 6.0));
    }
    const double got = compute_sensor_output(img, area, 4);
    const double want = oracle::sensor_output(img, area, 4);
    REQUIRE_THAT(got, Catch::Matchers::WithinAbs(want, 1e-12));
  }
  CHECK(tilted > 0);
}

TEST_CASE("sensor output properties", "[sensing]") {
  oracle::Rng rng(7);
  EyeImage img = oracle::random_image(rng, 24, 24, 0.25);
  const auto area = DetectionArea::circular(0.0, 0.0, 3.0);
  const double base = compute_sensor_output(img, area);

  SECTION("monotonicity: brightening a footprint pixel never lowers the output") {
    EyeImage brighter = img;
    brighter.at(12, 12) = std::min(1.0, brighter.at(12, 12) + 0.3);
    CHECK(compute_sensor_output(brighter, area) >= base);
  }

  SECTION("affine response") {
    EyeImage scaled = img;
    for (double& v : scaled.intensities) v *= 0.5;
    scaled.outside_fill *= 0.5;
    CHECK_THAT(compute_sensor_output(scaled, area),
               Catch::Matchers::WithinAbs(0.5 * base, 1e-12));

    EyeImage offset = img;
    for (double& v : offset.intensities) v += 0.25;
    offset.outside_fill += 0.25;
    const auto w = gaussian_window_weights(12, 12);
    double wsum = 0.0;
    for (double x : w) wsum += x;
    CHECK_THAT(compute_sensor_output(offset, area),
               Catch::Matchers::WithinAbs(base + 0.25 * wsum / (12.0 * 12.0), 1e-12));
  }
}

TEST_CASE("out-of-frame handling", "[sensing]") {
  const EyeImage img = flat_image(10, 10, 0.2);

  SECTION("a window hanging over the edge reads the skin fill") {
    const auto area = DetectionArea::rectangle(4.0, 0.0, 4.0, 2.0);
    // Window cols [7,11): column 10 falls outside and reads the fill.
    const double out = compute_sensor_output(img, area);
    CHECK(out > 0.2);
    CHECK(out < 0.65);
  }

  SECTION("a window fully in the padded band is pure fill") {
    const auto area = DetectionArea::rectangle(12.0, 0.0, 2.0, 2.0);
    CHECK_THAT(compute_sensor_output(img, area), Catch::Matchers::WithinAbs(0.65, 1e-15));
  }

  SECTION("an area beyond the padded frame is a geometry error") {
    const auto area = DetectionArea::rectangle(40.0, 0.0, 2.0, 2.0);
    CHECK_THROWS_AS(compute_sensor_output(img, area), GeometryError);
  }
}

TEST_CASE("detection area validation", "[sensing]") {
  auto bad_rect = DetectionArea::rectangle(0, 0, 0.0, 1.0);
  CHECK_THROWS_AS(bad_rect.validate(), ConfigError);
  auto bad_angle = DetectionArea::rectangle(0, 0, 1.0, 1.0, 120.0);
  CHECK_THROWS_AS(bad_angle.validate(), ConfigError);
  auto mixed = DetectionArea::circular(0, 0, 2.0);
  mixed.length_mm = 1.0;
  CHECK_THROWS_AS(mixed.validate(), ConfigError);
}

TEST_CASE("photodiode model", "[sensing]") {
  SECTION("zero bias is exactly linear in power") {
    PhotodiodeConfig pd;
    pd.responsivity_a_per_w = 0.5;
    pd.bias_voltage_v = 0.0;
    CHECK(photodiode_current(pd, 1.0) == 0.5);
    CHECK(photodiode_current(pd, 2.0) == 2.0 * photodiode_current(pd, 1.0));
  }

  SECTION("forward bias subtracts the diode current") {
    PhotodiodeConfig pd;
    pd.responsivity_a_per_w = 0.5;
    pd.reverse_saturation_current_a = 1e-9;
    // Temperature chosen so the thermal voltage k_B*T/q is exactly 0.026 V.
    pd.temperature_k = 0.026 * kElectronCharge / kBoltzmann;
    pd.bias_voltage_v = 0.026 * std::log(2.0);
    CHECK_THAT(photodiode_current(pd, 0.0), Catch::Matchers::WithinRel(-1e-9, 1e-12));
  }

  SECTION("negative power is a contract error") {
    CHECK_THROWS_AS(photodiode_current(PhotodiodeConfig{}, -1.0), ContractError);
  }
}
