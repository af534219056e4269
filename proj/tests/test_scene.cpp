#include <doctest.h>

#include <cmath>
#include <string>

#include "ghostspec/errors.hpp"
#include "ghostspec/scene.hpp"

using namespace ghostspec;

namespace {

SceneMask blank_mask() {
  SceneMask mask;
  mask.magnification = 1.5;
  return mask;
}

PairEvent event_at(double y_idler_mm, double lambda_idler_nm) {
  PairEvent ev{};
  ev.lambda_idler_nm = lambda_idler_nm;
  ev.lambda_signal_nm = 810.0;
  ev.y_idler_mm = y_idler_mm;
  return ev;
}

}  // namespace

TEST_CASE("blank object transmits everything") {
  const SceneMask mask = blank_mask();
  for (double y : {-3.0, -0.1, 0.0, 0.4, 2.0})
    for (double lambda : {700.0, 810.0, 950.0})
      CHECK(transmission_at(mask, y, lambda) == 1.0);
}

TEST_CASE("piecewise neutral region splits the plane") {
  SceneMask mask = blank_mask();
  mask.regions.push_back({0.0, 100.0, TransmissionProfile::neutral(0.5)});
  // y_obj = 1.5 * y_crystal
  CHECK(transmission_at(mask, -1.0, 810.0) == 1.0);
  CHECK(transmission_at(mask, 1.0, 810.0) == 0.5);
  CHECK(transmission_at(mask, 1.0, 500.0) == 0.5);  // neutral: no lambda dependence
}

TEST_CASE("bandpass evaluates to peak at center and half peak at half width") {
  const auto profile = TransmissionProfile::bandpass(820.0, 10.0, 0.9);
  CHECK(profile(820.0) == doctest::Approx(0.9).epsilon(1e-15));
  // half-width points: 0.9 * exp(-ln 2) = 0.45
  CHECK(profile(815.0) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(profile(825.0) == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("tabulated profile interpolates linearly and clamps outside") {
  const auto profile = TransmissionProfile::tabulated(
      {{800.0, 0.2}, {810.0, 0.8}, {830.0, 0.4}});
  CHECK(profile(805.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(profile(820.0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(profile(700.0) == 0.2);
  CHECK(profile(900.0) == 0.4);
  CHECK(profile(810.0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("tabulated knots must increase and stay in range") {
  CHECK_THROWS_AS(
      TransmissionProfile::tabulated({{810.0, 0.2}, {800.0, 0.3}}).validate(),
      ConfigError);
  CHECK_THROWS_AS(
      TransmissionProfile::tabulated({{800.0, 0.2}, {810.0, 1.3}}).validate(),
      ConfigError);
  CHECK_THROWS_AS(TransmissionProfile::tabulated({{800.0, 0.2}}).validate(),
                  ConfigError);
}

TEST_CASE("opaque and transparent objects are deterministic") {
  SceneMask opaque = blank_mask();
  opaque.default_transmission = TransmissionProfile::neutral(0.0);
  SceneMask clear = blank_mask();
  RandomStream rng(21);
  for (int i = 0; i < 200; ++i) {
    const PairEvent ev = event_at(0.1 * i - 10.0, 805.0 + i * 0.1);
    CHECK(!apply_object(ev, opaque, rng));
    CHECK(apply_object(ev, clear, rng));
  }
}

TEST_CASE("half-transparent object survives half the trials") {
  SceneMask mask = blank_mask();
  mask.default_transmission = TransmissionProfile::neutral(0.5);
  RandomStream rng(22);
  const int n = 1000000;
  int survived = 0;
  const PairEvent ev = event_at(0.0, 810.0);
  for (int i = 0; i < n; ++i)
    if (apply_object(ev, mask, rng)) ++survived;
  const double sigma = std::sqrt(0.25 / n);
  CHECK(std::abs(survived / static_cast<double>(n) - 0.5) < 5.0 * sigma);
}

TEST_CASE("pointwise-larger transmission never loses a survivor") {
  SceneMask dimmer = blank_mask();
  dimmer.default_transmission = TransmissionProfile::neutral(0.3);
  dimmer.regions.push_back({0.0, 5.0, TransmissionProfile::bandpass(810, 20, 0.5)});
  SceneMask brighter = blank_mask();
  brighter.default_transmission = TransmissionProfile::neutral(0.5);
  brighter.regions.push_back({0.0, 5.0, TransmissionProfile::bandpass(810, 20, 0.9)});

  RandomStream rng_a(23), rng_b(23);  // shared draw per event
  for (int i = 0; i < 10000; ++i) {
    const PairEvent ev = event_at(-4.0 + 0.0008 * i, 790.0 + 0.004 * i);
    const bool lo = apply_object(ev, dimmer, rng_a);
    const bool hi = apply_object(ev, brighter, rng_b);
    if (lo) CHECK(hi);
  }
}

TEST_CASE("doubling magnification halves a feature's crystal-plane extent") {
  SceneMask mask = blank_mask();
  mask.magnification = 1.5;
  mask.regions.push_back({2.0, 4.0, TransmissionProfile::neutral(0.25)});
  SceneMask doubled = mask;
  doubled.magnification = 3.0;
  for (double y = -4.0; y < 4.0; y += 0.01)
    CHECK(transmission_at(mask, y, 810.0) ==
          transmission_at(doubled, y / 2.0, 810.0));
}

TEST_CASE("overlapping regions are rejected") {
  SceneMask mask = blank_mask();
  mask.regions.push_back({0.0, 2.0, TransmissionProfile::blank()});
  mask.regions.push_back({1.0, 3.0, TransmissionProfile::blank()});
  CHECK_THROWS_AS(mask.validate(), ConfigError);

  SceneMask bad_mag = blank_mask();
  bad_mag.magnification = 0.0;
  CHECK_THROWS_AS(bad_mag.validate(), ConfigError);

  SceneMask bad_interval = blank_mask();
  bad_interval.regions.push_back({2.0, 2.0, TransmissionProfile::blank()});
  CHECK_THROWS_AS(bad_interval.validate(), ConfigError);
}

TEST_CASE("adjacent regions touching at a boundary are fine") {
  SceneMask mask = blank_mask();
  mask.regions.push_back({0.0, 2.0, TransmissionProfile::neutral(0.5)});
  mask.regions.push_back({2.0, 4.0, TransmissionProfile::neutral(0.2)});
  CHECK_NOTHROW(mask.validate());
  // half-open intervals: the shared bound belongs to the upper region
  CHECK(transmission_at(mask, 2.0 / 1.5, 810.0) == 0.2);
}
