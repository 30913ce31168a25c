#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "uamsim/gripper.hpp"
#include "uamsim/types.hpp"

namespace uamsim::traj {

struct SpanError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Boundary conditions of one trajectory knot. Velocity/acceleration default
/// to zero (rest point).
struct Waypoint {
  double t = 0.0;
  Vec8 chi = Vec8::Zero();
  Vec8 chi_dot = Vec8::Zero();
  Vec8 chi_ddot = Vec8::Zero();
};

/// Quintic segment for one channel with matched position, velocity and
/// acceleration at both ends.
struct QuinticSegment {
  double t0 = 0.0, t1 = 0.0;
  double c[6] = {0, 0, 0, 0, 0, 0};

  static QuinticSegment solve(double t0, double t1, double p0, double v0,
                              double a0, double p1, double v1, double a1);
  /// Throws SpanError outside [t0, t1].
  void eval(double t, double& p, double& v, double& a) const;
};

/// Piecewise-quintic reference over a shared waypoint grid. Continuous in
/// position, velocity and acceleration everywhere; holds the boundary values
/// outside the waypoint span.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Waypoint> waypoints);

  DesiredPoint sample(double t) const;
  double start_time() const { return waypoints_.front().t; }
  double end_time() const { return waypoints_.back().t; }
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

  /// Suprema of reference speed/acceleration norms over the waypoint span,
  /// sampled on a 1 ms grid (feeds the simulation-truth bound estimates).
  void reference_suprema(double& sup_speed, double& sup_accel) const;

 private:
  std::vector<Waypoint> waypoints_;
  // segments_[k][ch] spans waypoints k -> k+1
  std::vector<std::array<QuinticSegment, kDof>> segments_;
};

/// Constant + sinusoid gust force on the translational channels. The phases
/// are drawn once from the seed at scenario build, so the realization is a
/// smooth deterministic function of time.
struct WindModel {
  bool enabled = false;
  Vec3 bias_n = Vec3::Zero();
  Vec3 amplitude_n = Vec3::Zero();
  Vec3 frequency_hz = Vec3::Zero();
  Vec3 phase_rad = Vec3::Zero();
};

/// Contact reaction pulse: half-sine over the gripper activation window,
/// peak linear in the commanded approach speed.
struct ImpactModel {
  double peak_n_at_ref = 5.0;
  double reference_speed = 0.4;  // m/s
  Vec8 pattern = Vec8::Zero();   // channel pattern, scaled by the peak
};

enum class EventKind : std::uint8_t { Pickup, Drop };
enum class EventTrigger : std::uint8_t { AtTime, OnContact };

struct ScenarioEvent {
  EventKind kind = EventKind::Pickup;
  EventTrigger trigger = EventTrigger::AtTime;
  double time = 0.0;            // trigger time, or arming time for OnContact
  double press_force_n = 0.0;   // sustained contact force for timed pickups
  double press_duration_s = 0.0;
  double offset_mm = 0.0;       // contact offset for timed pickups
  double impact_peak_n = 0.0;   // reaction pulse peak for timed pickups
};

/// Geometry of the contact-triggered grasp: the object's grasp point, the
/// lateral capture span around it, and the residual press force that keeps
/// contact "present" for the gripper after the impact pulse decays.
struct ContactModel {
  Vec3 object_position{0.0, 0.0, 0.15};
  double capture_radius_xy = 0.10;  // m
  double hold_force_n = 0.3;        // below any trigger threshold
};

struct ScenarioSpec {
  std::string name;
  double t_end = 0.0;
  double payload_mass = 0.2;
  double approach_speed = 0.0;        // scenario-2 case speed
  double disturbance_bound = 8.0;     // ||d|| saturation
  Vec8 actuation_trim = Vec8::Zero(); // constant trim added to the law output
  Vec8 tau_limit = Vec8::Constant(std::numeric_limits<double>::infinity());

  Trajectory trajectory;
  std::vector<ScenarioEvent> events;
  WindModel wind;
  ImpactModel impact;
  ContactModel contact;
  grip::GripperModel gripper_model;
};

/// Runtime view of fired events, owned by the simulation loop; the
/// disturbance evaluation reads pulse anchors from here.
struct ActivePulse {
  double t_start = 0.0;
  double duration = 0.0;
  double peak_n = 0.0;
};

struct EventTimeline {
  std::vector<ActivePulse> pulses;
};

/// Wind plus contact pulses, saturated so that ||d|| never exceeds the
/// configured bound.
Disturbance disturbance_eval(const ScenarioSpec& spec, double t,
                             const SystemState& state,
                             const EventTimeline& events);

/// Pick-and-drop script: takeoff to 1 m, translate to the pick site, press
/// the arm onto the object at the pickup time, carry it across, drop. All
/// times/geometry are the reference values and can be overridden.
struct Scenario1Params {
  double takeoff_end = 4.0;
  double reach_pick = 9.5;
  double arm_pregrasp = 10.0;
  double arm_grasp = 12.0;      // timed pickup event
  double arm_retract = 14.0;
  double cruise_start = 16.0;
  double cruise_end = 29.0;
  double drop_time = 31.0;
  double t_end = 35.0;
  double hover_height = 1.0;
  double pick_x = -0.8;
  double drop_x = 0.8;
  double arm_init_deg[2] = {0.0, 110.0};
  double arm_pregrasp_deg[2] = {45.0, 70.0};
  double arm_grasp_deg[2] = {45.0, 35.0};
  double press_force_n = 2.0;
  double press_duration_s = 1.5;
  double press_offset_mm = 0.0;
  double impact_peak_n = 2.0;
};

/// Swoop grasp of a standing object: takeoff, diagonal constant-speed
/// descent onto the grasp point, contact-triggered pickup, carry away.
struct Scenario2Params {
  double takeoff_end = 3.0;
  double descent_start = 5.0;
  double blend_time = 0.5;
  double dwell_time = 1.0;
  double ascend_duration = 4.0;
  double t_end = 16.0;
  double start_x = 0.5;
  double hover_height = 0.65;
  double object_z = 0.15;
  double penetration_m = 0.03;  // planned overshoot past nominal contact
  double ascend_x = -0.5;
  double arm_deg[2] = {0.0, 90.0};
  double case_speeds[3] = {0.4, 0.3, 0.2};
  // Tip offset from the base at the grasp arm pose; must match the arm
  // geometry in use (link lengths 0.25 m at joints 0/90 deg by default).
  double tip_lead_x = -0.25;
  double tip_lead_z = -0.25;
};

ScenarioSpec build_scenario1(const Scenario1Params& p);

/// case_id in {1, 2, 3} selects the approach speed.
ScenarioSpec build_scenario2(const Scenario2Params& p, int case_id);

}  // namespace uamsim::traj
