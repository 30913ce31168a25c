#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uamsim/trajectory.hpp"

using namespace uamsim;
using traj::QuinticSegment;
using traj::ScenarioSpec;
using traj::Trajectory;
using traj::Waypoint;

TEST_CASE("quintic: boundary conditions and rest-to-rest midpoint symmetry") {
  const auto q = QuinticSegment::solve(1.0, 3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0);
  double p, v, a;
  q.eval(1.0, p, v, a);
  CHECK(p == doctest::Approx(0.0));
  CHECK(v == doctest::Approx(0.0));
  CHECK(a == doctest::Approx(0.0));
  q.eval(3.0, p, v, a);
  CHECK(p == doctest::Approx(1.0));
  CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a == doctest::Approx(0.0).epsilon(1e-12));
  q.eval(2.0, p, v, a);
  CHECK(p == doctest::Approx(0.5));

  CHECK_THROWS_AS(q.eval(0.99, p, v, a), traj::SpanError);
  CHECK_THROWS_AS(q.eval(3.01, p, v, a), traj::SpanError);
}

TEST_CASE("quintic: honors velocity/acceleration boundary conditions") {
  const auto q = QuinticSegment::solve(0.0, 2.0, 1.0, -0.5, 0.2, -1.0, 0.3, -0.1);
  double p, v, a;
  q.eval(0.0, p, v, a);
  CHECK(p == doctest::Approx(1.0));
  CHECK(v == doctest::Approx(-0.5));
  CHECK(a == doctest::Approx(0.2));
  q.eval(2.0, p, v, a);
  CHECK(p == doctest::Approx(-1.0));
  CHECK(v == doctest::Approx(0.3));
  CHECK(a == doctest::Approx(-0.1));
}

TEST_CASE("quintic: derivatives match finite differences of the position") {
  const auto q = QuinticSegment::solve(0.0, 1.5, 0.2, 0.1, -0.3, 1.4, -0.2, 0.5);
  const double h = 1e-4;
  for (double t = h; t <= 1.5 - h; t += 0.05) {
    double pm, pp, p, v, a, dummy_v, dummy_a;
    q.eval(t - h, pm, dummy_v, dummy_a);
    q.eval(t + h, pp, dummy_v, dummy_a);
    q.eval(t, p, v, a);
    CHECK(v == doctest::Approx((pp - pm) / (2.0 * h)).epsilon(1e-6));
    CHECK(a == doctest::Approx((pp - 2.0 * p + pm) / (h * h)).epsilon(1e-4));
  }
}

TEST_CASE("trajectory: C2 splicing at every interior waypoint") {
  for (const ScenarioSpec& spec :
       {traj::build_scenario1(traj::Scenario1Params{}),
        traj::build_scenario2(traj::Scenario2Params{}, 1),
        traj::build_scenario2(traj::Scenario2Params{}, 3)}) {
    const auto& wps = spec.trajectory.waypoints();
    for (size_t k = 1; k + 1 < wps.size(); ++k) {
      const DesiredPoint a = spec.trajectory.sample(wps[k].t - 1e-9);
      const DesiredPoint b = spec.trajectory.sample(wps[k].t + 1e-9);
      CHECK((a.chi_d - b.chi_d).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((a.chi_d_dot - b.chi_d_dot).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((a.chi_d_ddot - b.chi_d_ddot).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
}

TEST_CASE("trajectory: finite reference suprema") {
  const ScenarioSpec spec = traj::build_scenario1(traj::Scenario1Params{});
  double sv = 0.0, sa = 0.0;
  spec.trajectory.reference_suprema(sv, sa);
  CHECK(sv > 0.0);
  CHECK(sa > 0.0);
  CHECK(std::isfinite(sv));
  CHECK(std::isfinite(sa));
}

TEST_CASE("scenario 1 script: verbatim waypoint values and events") {
  const ScenarioSpec spec = traj::build_scenario1(traj::Scenario1Params{});

  const DesiredPoint start = spec.trajectory.sample(0.0);
  CHECK(start.chi_d.head<3>().norm() == doctest::Approx(0.0));
  CHECK(start.chi_d(6) == doctest::Approx(0.0));
  CHECK(start.chi_d(7) == doctest::Approx(deg2rad(110.0)));

  // hovering at 1 m over the pick point before the grasp
  const DesiredPoint pre = spec.trajectory.sample(9.8);
  CHECK(pre.chi_d(2) == doctest::Approx(1.0));
  CHECK(pre.chi_d(0) == doctest::Approx(-0.8));

  // grasp pose at 12 s
  const DesiredPoint grasp = spec.trajectory.sample(12.0);
  CHECK(grasp.chi_d(6) == doctest::Approx(deg2rad(45.0)));
  CHECK(grasp.chi_d(7) == doctest::Approx(deg2rad(35.0)));

  // drop point on the +x side
  const DesiredPoint late = spec.trajectory.sample(30.0);
  CHECK(late.chi_d(0) == doctest::Approx(0.8));

  REQUIRE(spec.events.size() == 2);
  CHECK(spec.events[0].kind == traj::EventKind::Pickup);
  CHECK(spec.events[0].trigger == traj::EventTrigger::AtTime);
  CHECK(spec.events[0].time == doctest::Approx(12.0));
  CHECK(spec.events[1].kind == traj::EventKind::Drop);
  CHECK(spec.events[1].time == doctest::Approx(31.0));
  CHECK(spec.payload_mass == doctest::Approx(0.2));
  CHECK(spec.t_end == doctest::Approx(35.0));
}

TEST_CASE("scenario 2 script: case speeds and contact-triggered grasp") {
  for (int c = 1; c <= 3; ++c) {
    const ScenarioSpec spec = traj::build_scenario2(traj::Scenario2Params{}, c);
    const double v[] = {0.4, 0.3, 0.2};
    CHECK(spec.approach_speed == doctest::Approx(v[c - 1]));

    // constant-speed phase: sample midway between blend end and decel start
    const traj::Scenario2Params p;
    const double dist = 0.28;  // stock geometry
    const double t_const = dist / v[c - 1] - p.blend_time;
    const double t_mid = p.descent_start + p.blend_time + 0.5 * t_const;
    const DesiredPoint d = spec.trajectory.sample(t_mid);
    CHECK(d.chi_d_dot(0) == doctest::Approx(-v[c - 1]).epsilon(1e-9));
    CHECK(d.chi_d_dot(2) == doctest::Approx(-v[c - 1]).epsilon(1e-9));
    CHECK(d.chi_d_dot(1) == doctest::Approx(0.0));

    REQUIRE(spec.events.size() == 1);
    CHECK(spec.events[0].trigger == traj::EventTrigger::OnContact);

    // takeoff start and arm pose
    const DesiredPoint s0 = spec.trajectory.sample(0.0);
    CHECK(s0.chi_d(0) == doctest::Approx(0.5));
    CHECK(s0.chi_d(7) == doctest::Approx(deg2rad(90.0)));
  }
  CHECK_THROWS_AS(traj::build_scenario2(traj::Scenario2Params{}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(traj::build_scenario2(traj::Scenario2Params{}, 4),
                  std::invalid_argument);
}

TEST_CASE("scenario builders are deterministic") {
  const ScenarioSpec a = traj::build_scenario1(traj::Scenario1Params{});
  const ScenarioSpec b = traj::build_scenario1(traj::Scenario1Params{});
  REQUIRE(a.trajectory.waypoints().size() == b.trajectory.waypoints().size());
  for (size_t k = 0; k < a.trajectory.waypoints().size(); ++k) {
    CHECK(a.trajectory.waypoints()[k].t == b.trajectory.waypoints()[k].t);
    CHECK((a.trajectory.waypoints()[k].chi - b.trajectory.waypoints()[k].chi)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("disturbance: quiet when wind off and no events") {
  ScenarioSpec spec = traj::build_scenario1(traj::Scenario1Params{});
  spec.wind.enabled = false;
  const traj::EventTimeline none;
  for (double t : {0.0, 1.0, 17.3}) {
    CHECK(traj::disturbance_eval(spec, t, SystemState{}, none).d.norm() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("disturbance: pulse magnitudes scale with the pulse peak") {
  ScenarioSpec spec = traj::build_scenario2(traj::Scenario2Params{}, 1);
  spec.wind.enabled = false;

  traj::EventTimeline fast, slow;
  fast.pulses.push_back({10.0, 0.1, 5.0});   // 0.4 m/s worth of reaction
  slow.pulses.push_back({10.0, 0.1, 2.5});   // 0.2 m/s
  const SystemState st;
  for (double t = 10.0; t <= 10.1; t += 0.01) {
    const Vec8 df = traj::disturbance_eval(spec, t, st, fast).d;
    const Vec8 ds = traj::disturbance_eval(spec, t, st, slow).d;
    if (ds.norm() > 1e-12) {
      CHECK(df.norm() / ds.norm() == doctest::Approx(2.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("disturbance: norm saturates at the configured bound") {
  ScenarioSpec spec = traj::build_scenario1(traj::Scenario1Params{});
  spec.disturbance_bound = 1.0;
  spec.wind.enabled = true;
  spec.wind.bias_n = Vec3(5.0, 5.0, 5.0);
  traj::EventTimeline events;
  events.pulses.push_back({0.0, 1.0, 50.0});
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    CHECK(traj::disturbance_eval(spec, t, SystemState{}, events).d.norm() <=
          1.0 + 1e-12);
  }
}
