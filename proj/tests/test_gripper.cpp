#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uamsim/gripper.hpp"

using namespace uamsim::grip;

TEST_CASE("trigger force fit: printed polynomial evaluated verbatim") {
  const auto m = GripperModel::defaults();
  CHECK(trigger_force_fit(140.0, m).force == doctest::Approx(143.86).epsilon(1e-9));
  CHECK(trigger_force_fit(65.0, m).force == doctest::Approx(38.86).epsilon(1e-9));
  // parabola vertex at -b/2a, reported alongside every evaluation
  CHECK(trigger_force_fit(100.0, m).vertex_mm == doctest::Approx(15.0));
  CHECK_THROWS_AS(trigger_force_fit(64.9, m), UncharacterizedInputError);
  CHECK_THROWS_AS(trigger_force_fit(140.1, m), UncharacterizedInputError);
}

TEST_CASE("spring pretension") {
  CHECK(spring_pretension(0.0, 0.274) == doctest::Approx(0.0));
  CHECK(spring_pretension(8.65, 0.274) == doctest::Approx(2.37).epsilon(1e-3));
  CHECK(spring_pretension(10.0, 0.274) == doctest::Approx(2.74));
  CHECK_THROWS_AS(spring_pretension(-1.0, 0.274), std::invalid_argument);
}

TEST_CASE("effective trigger force anchors") {
  GripperModel m = GripperModel::defaults();

  // working pretension, centered: inside the 0.5..1.0 N band
  const double f0 = effective_trigger_force(m, 0.0);
  CHECK(f0 >= 0.5);
  CHECK(f0 <= 1.0);

  // no pretension at 140 mm support: the measured 4.05 N
  GripperModel m0 = m;
  m0.pretension_n = 0.0;
  CHECK(effective_trigger_force(m0, 0.0) == doctest::Approx(4.05).epsilon(1e-9));

  // 60 mm offset roughly quadruples the centered force
  CHECK(effective_trigger_force(m, 60.0) / f0 == doctest::Approx(4.0).epsilon(0.05));

  CHECK_THROWS_AS(effective_trigger_force(m, 60.5), UncharacterizedInputError);
}

TEST_CASE("effective trigger force monotonicities") {
  const GripperModel base = GripperModel::defaults();
  double prev = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double off = 0.5 * i;
    const double f = effective_trigger_force(base, off);
    if (i > 0) CHECK(f >= prev - 1e-12);
    CHECK(f == effective_trigger_force(base, -off));  // symmetric in offset
    prev = f;
  }
  double prev_p = 1e300;
  for (int i = 0; i <= 100; ++i) {
    GripperModel m = base;
    m.pretension_n = 3.21 * i / 100.0;
    const double f = effective_trigger_force(m, 0.0);
    CHECK(f <= prev_p + 1e-12);
    prev_p = f;
  }
}

TEST_CASE("activation time") {
  const GripperModel m = GripperModel::defaults();
  CHECK(activation_time(35.0, m) == doctest::Approx(0.17));
  CHECK(activation_time(0.0, m) <= 0.17);
  CHECK(activation_time(15.0, m) <= activation_time(25.0, m));
  CHECK(activation_time(25.0, m) <= activation_time(35.0, m));
  // clamps beyond the characterized span
  CHECK(activation_time(50.0, m) == doctest::Approx(0.17));
}

TEST_CASE("gripper update: trigger, curl, hold") {
  const GripperModel m = GripperModel::defaults();
  const double dt = 1e-3;
  GripperState g;

  // below threshold: unchanged
  GripperState g2 = gripper_update(g, m, 0.5, 0.0, dt);
  CHECK(g2.band_state == BandState::Flat);

  // at/above threshold, centered: curls with the centered activation time
  g2 = gripper_update(g, m, 2.0, 0.0, dt);
  CHECK(g2.band_state == BandState::Curled);
  CHECK(!g2.holding);
  CHECK(g2.activation_timer_s == doctest::Approx(activation_time(0.0, m)));

  // timer elapses under persistent contact: holding latches
  int steps = 0;
  while (!g2.holding && steps < 1000) {
    g2 = gripper_update(g2, m, 2.0, 0.0, dt);
    ++steps;
  }
  CHECK(g2.holding);
  CHECK(steps == doctest::Approx(activation_time(0.0, m) / dt).epsilon(0.02));

  // outside the +/-40 mm window: a 4x trigger force exists but no transition
  GripperState g3 = gripper_update(g, m, 10.0, 55.0, dt);
  CHECK(g3.band_state == BandState::Flat);
}

TEST_CASE("gripper update: contact lost during curl means no hold") {
  const GripperModel m = GripperModel::defaults();
  GripperState g = gripper_update(GripperState{}, m, 2.0, 0.0, 1e-3);
  REQUIRE(g.band_state == BandState::Curled);
  for (int i = 0; i < 500; ++i) g = gripper_update(g, m, 0.0, 0.0, 1e-3);
  CHECK(g.band_state == BandState::Curled);
  CHECK(!g.holding);
  // the chance is gone even if contact returns
  for (int i = 0; i < 500; ++i) g = gripper_update(g, m, 5.0, 0.0, 1e-3);
  CHECK(!g.holding);
}

TEST_CASE("open gripper") {
  GripperState curled;
  curled.band_state = BandState::Curled;
  curled.holding = true;
  GripperState opened = open_gripper(curled);
  CHECK(opened.band_state == BandState::Flat);
  CHECK(!opened.holding);

  curled.holding = false;
  CHECK(open_gripper(curled).band_state == BandState::Flat);

  CHECK_THROWS_AS(open_gripper(GripperState{}), GripperStateError);
}

TEST_CASE("state machine safety under random inputs") {
  const GripperModel m = GripperModel::defaults();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> force(0.0, 6.0);
  std::uniform_real_distribution<double> offset(-50.0, 50.0);

  for (int trial = 0; trial < 50; ++trial) {
    GripperState g;
    bool seen_curled = false;
    for (int i = 0; i < 2000; ++i) {
      const GripperState prev = g;
      g = gripper_update(g, m, force(rng), offset(rng), 1e-3);
      // holding only ever appears on an already-curled band
      if (g.holding) CHECK(g.band_state == BandState::Curled);
      // no spontaneous un-curl
      if (prev.band_state == BandState::Curled) {
        CHECK(g.band_state == BandState::Curled);
      }
      // holding never reverts without open_gripper
      if (prev.holding) CHECK(g.holding);
      seen_curled = seen_curled || g.band_state == BandState::Curled;
    }
    if (seen_curled) {
      GripperState flat = open_gripper(g);
      CHECK(flat.band_state == BandState::Flat);
      CHECK(!flat.holding);
    }
  }
}

TEST_CASE("model validation rejects out-of-range overrides") {
  GripperModel m = GripperModel::defaults();
  CHECK_NOTHROW(m.validate());
  m.support_distance_mm = 60.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);

  GripperModel m2 = GripperModel::defaults();
  m2.offset_curve = MonotoneCurve({0.0, 60.0}, {1.3, 4.0});
  CHECK_THROWS_AS(m2.validate(), std::invalid_argument);

  GripperModel m3 = GripperModel::defaults();
  m3.activation_curve = MonotoneCurve({0.0, 35.0}, {0.1, 0.3});
  CHECK_THROWS_AS(m3.validate(), std::invalid_argument);
}

TEST_CASE("monotone curve validation") {
  CHECK_THROWS_AS(MonotoneCurve({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneCurve({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(MonotoneCurve({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0}),
                  std::invalid_argument);
  const MonotoneCurve c({0.0, 10.0}, {1.0, 2.0});
  CHECK(c(5.0) == doctest::Approx(1.5));
  CHECK(c(-1.0) == doctest::Approx(1.0));
  CHECK(c(11.0) == doctest::Approx(2.0));
}
