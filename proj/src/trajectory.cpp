#include "uamsim/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace uamsim::traj {

QuinticSegment QuinticSegment::solve(double t0, double t1, double p0, double v0,
                                     double a0, double p1, double v1, double a1) {
  if (!(t1 > t0)) throw std::invalid_argument("QuinticSegment: t1 must exceed t0");
  const double T = t1 - t0;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;

  QuinticSegment q;
  q.t0 = t0;
  q.t1 = t1;
  q.c[0] = p0;
  q.c[1] = v0;
  q.c[2] = 0.5 * a0;
  q.c[3] = (20.0 * (p1 - p0) - (8.0 * v1 + 12.0 * v0) * T -
            (3.0 * a0 - a1) * T2) / (2.0 * T3);
  q.c[4] = (30.0 * (p0 - p1) + (14.0 * v1 + 16.0 * v0) * T +
            (3.0 * a0 - 2.0 * a1) * T2) / (2.0 * T4);
  q.c[5] = (12.0 * (p1 - p0) - 6.0 * (v1 + v0) * T -
            (a0 - a1) * T2) / (2.0 * T5);
  return q;
}

void QuinticSegment::eval(double t, double& p, double& v, double& a) const {
  if (t < t0 || t > t1) throw SpanError("QuinticSegment: t outside segment span");
  const double u = t - t0;
  p = c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * (c[4] + u * c[5]))));
  v = c[1] + u * (2.0 * c[2] + u * (3.0 * c[3] + u * (4.0 * c[4] + u * 5.0 * c[5])));
  a = 2.0 * c[2] + u * (6.0 * c[3] + u * (12.0 * c[4] + u * 20.0 * c[5]));
}

Trajectory::Trajectory(std::vector<Waypoint> waypoints)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw std::invalid_argument("Trajectory: no waypoints");
  for (size_t k = 1; k < waypoints_.size(); ++k) {
    if (!(waypoints_[k].t > waypoints_[k - 1].t)) {
      throw std::invalid_argument("Trajectory: waypoint times must strictly increase");
    }
  }
  segments_.resize(waypoints_.size() > 1 ? waypoints_.size() - 1 : 0);
  for (size_t k = 0; k + 1 < waypoints_.size(); ++k) {
    const Waypoint& w0 = waypoints_[k];
    const Waypoint& w1 = waypoints_[k + 1];
    for (int ch = 0; ch < kDof; ++ch) {
      segments_[k][ch] =
          QuinticSegment::solve(w0.t, w1.t, w0.chi(ch), w0.chi_dot(ch),
                                w0.chi_ddot(ch), w1.chi(ch), w1.chi_dot(ch),
                                w1.chi_ddot(ch));
    }
  }
}

DesiredPoint Trajectory::sample(double t) const {
  DesiredPoint out;
  if (t <= waypoints_.front().t) {
    out.chi_d = waypoints_.front().chi;
    return out;
  }
  if (t >= waypoints_.back().t) {
    out.chi_d = waypoints_.back().chi;
    return out;
  }
  // first waypoint with time >= t bounds the active segment
  size_t hi = 1;
  while (hi < waypoints_.size() && waypoints_[hi].t < t) ++hi;
  const auto& seg = segments_[hi - 1];
  for (int ch = 0; ch < kDof; ++ch) {
    seg[ch].eval(t, out.chi_d(ch), out.chi_d_dot(ch), out.chi_d_ddot(ch));
  }
  return out;
}

void Trajectory::reference_suprema(double& sup_speed, double& sup_accel) const {
  sup_speed = 0.0;
  sup_accel = 0.0;
  const double t0 = start_time(), t1 = end_time();
  const int n = static_cast<int>(std::ceil((t1 - t0) / 1e-3));
  for (int i = 0; i <= n; ++i) {
    const double t = std::min(t0 + 1e-3 * i, t1);
    const DesiredPoint d = sample(t);
    sup_speed = std::max(sup_speed, d.chi_d_dot.norm());
    sup_accel = std::max(sup_accel, d.chi_d_ddot.norm());
  }
}

Disturbance disturbance_eval(const ScenarioSpec& spec, double t,
                             const SystemState& /*state*/,
                             const EventTimeline& events) {
  Disturbance out;
  if (spec.wind.enabled) {
    for (int i = 0; i < 3; ++i) {
      out.d(i) = spec.wind.bias_n(i) +
                 spec.wind.amplitude_n(i) *
                     std::sin(2.0 * kPi * spec.wind.frequency_hz(i) * t +
                              spec.wind.phase_rad(i));
    }
  }
  for (const ActivePulse& p : events.pulses) {
    if (p.duration <= 0.0) continue;
    const double u = (t - p.t_start) / p.duration;
    if (u < 0.0 || u > 1.0) continue;
    out.d += p.peak_n * std::max(0.0, std::sin(kPi * u)) * spec.impact.pattern;
  }
  const double norm = out.d.norm();
  if (norm > spec.disturbance_bound) {
    out.d *= spec.disturbance_bound / norm;
  }
  return out;
}

namespace {

Vec8 make_chi(double x, double y, double z, double a1_deg, double a2_deg) {
  Vec8 chi = Vec8::Zero();
  chi(0) = x;
  chi(1) = y;
  chi(2) = z;
  chi(6) = deg2rad(a1_deg);
  chi(7) = deg2rad(a2_deg);
  return chi;
}

Vec8 default_impact_pattern() {
  Vec8 p = Vec8::Zero();
  p(2) = 1.0;   // vertical reaction
  p(4) = 0.3;   // pitch coupling through the arm
  p(6) = 0.3;
  p(7) = 0.2;
  return p;
}

// Default hover-thrust trim: calibrated for the stock 3.0 kg platform at
// g = 9.81. The adaptive law carries everything else, payload included.
Vec8 default_trim() {
  Vec8 trim = Vec8::Zero();
  trim(2) = 29.43;
  return trim;
}

}  // namespace

ScenarioSpec build_scenario1(const Scenario1Params& p) {
  std::vector<Waypoint> wps;
  auto push = [&wps](double t, const Vec8& chi) {
    Waypoint w;
    w.t = t;
    w.chi = chi;
    wps.push_back(w);
  };

  Vec8 chi = make_chi(0.0, 0.0, 0.0, p.arm_init_deg[0], p.arm_init_deg[1]);
  push(0.0, chi);
  chi(2) = p.hover_height;
  push(p.takeoff_end, chi);
  chi(0) = p.pick_x;
  push(p.reach_pick, chi);
  chi(6) = deg2rad(p.arm_pregrasp_deg[0]);
  chi(7) = deg2rad(p.arm_pregrasp_deg[1]);
  push(p.arm_pregrasp, chi);
  chi(6) = deg2rad(p.arm_grasp_deg[0]);
  chi(7) = deg2rad(p.arm_grasp_deg[1]);
  push(p.arm_grasp, chi);
  chi(6) = deg2rad(p.arm_pregrasp_deg[0]);
  chi(7) = deg2rad(p.arm_pregrasp_deg[1]);
  push(p.arm_retract, chi);
  push(p.cruise_start, chi);
  chi(0) = p.drop_x;
  push(p.cruise_end, chi);

  ScenarioSpec spec;
  spec.name = "scenario1";
  spec.t_end = p.t_end;
  spec.trajectory = Trajectory(std::move(wps));
  spec.actuation_trim = default_trim();

  ScenarioEvent pickup;
  pickup.kind = EventKind::Pickup;
  pickup.trigger = EventTrigger::AtTime;
  pickup.time = p.arm_grasp;
  pickup.press_force_n = p.press_force_n;
  pickup.press_duration_s = p.press_duration_s;
  pickup.offset_mm = p.press_offset_mm;
  pickup.impact_peak_n = p.impact_peak_n;
  spec.events.push_back(pickup);

  ScenarioEvent drop;
  drop.kind = EventKind::Drop;
  drop.trigger = EventTrigger::AtTime;
  drop.time = p.drop_time;
  spec.events.push_back(drop);

  spec.wind.enabled = true;
  spec.wind.bias_n = Vec3(0.03, 0.03, 0.02);
  spec.wind.amplitude_n = Vec3(0.30, 0.25, 0.20);
  spec.wind.frequency_hz = Vec3(0.40, 0.55, 0.70);

  spec.impact.pattern = default_impact_pattern();
  spec.impact.peak_n_at_ref = p.impact_peak_n;
  return spec;
}

ScenarioSpec build_scenario2(const Scenario2Params& p, int case_id) {
  if (case_id < 1 || case_id > 3) {
    throw std::invalid_argument("build_scenario2: case must be 1, 2 or 3");
  }
  const double v = p.case_speeds[case_id - 1];

  // Nominal contact puts the arm tip on the grasp point; the plan overshoots
  // it slightly so tracking error cannot starve the trigger of contact.
  const double contact_base_x = -p.tip_lead_x;          // tip_x = 0 there
  const double contact_base_z = p.object_z - p.tip_lead_z;
  const double end_x = contact_base_x - p.penetration_m;
  const double end_z = contact_base_z - p.penetration_m;
  const double dist_x = p.start_x - end_x;
  const double dist_z = p.hover_height - end_z;
  const double dist = std::max(dist_x, dist_z);
  const double t_const = (dist - v * p.blend_time) / v;
  if (t_const <= 0.0) {
    throw std::invalid_argument("build_scenario2: blend_time too long for the descent");
  }
  const double vx = v * dist_x / dist;
  const double vz = v * dist_z / dist;

  const double t0 = p.descent_start;
  const double t1 = t0 + p.blend_time;
  const double t2 = t1 + t_const;
  const double t3 = t2 + p.blend_time;       // descent bottom
  const double t4 = t3 + p.dwell_time;
  const double t5 = t4 + p.ascend_duration;

  std::vector<Waypoint> wps;
  auto push = [&wps](double t, const Vec8& chi, const Vec8& chi_dot = Vec8::Zero()) {
    Waypoint w;
    w.t = t;
    w.chi = chi;
    w.chi_dot = chi_dot;
    wps.push_back(w);
  };

  Vec8 chi = make_chi(p.start_x, 0.0, 0.0, p.arm_deg[0], p.arm_deg[1]);
  push(0.0, chi);
  chi(2) = p.hover_height;
  push(p.takeoff_end, chi);
  push(t0, chi);

  Vec8 vel = Vec8::Zero();
  vel(0) = -vx;
  vel(2) = -vz;
  chi(0) -= vx * p.blend_time / 2.0;
  chi(2) -= vz * p.blend_time / 2.0;
  push(t1, chi, vel);
  chi(0) -= vx * t_const;
  chi(2) -= vz * t_const;
  push(t2, chi, vel);
  chi(0) = end_x;
  chi(2) = end_z;
  push(t3, chi);
  push(t4, chi);
  chi(0) = p.ascend_x;
  chi(2) = p.hover_height;
  push(t5, chi);

  ScenarioSpec spec;
  spec.name = "scenario2-case" + std::to_string(case_id);
  spec.t_end = p.t_end;
  spec.approach_speed = v;
  spec.trajectory = Trajectory(std::move(wps));
  spec.actuation_trim = default_trim();

  ScenarioEvent pickup;
  pickup.kind = EventKind::Pickup;
  pickup.trigger = EventTrigger::OnContact;
  pickup.time = t0;  // armed once the descent begins
  spec.events.push_back(pickup);

  spec.contact.object_position = Vec3(0.0, 0.0, p.object_z);

  spec.wind.enabled = true;
  spec.wind.bias_n = Vec3(0.03, 0.03, 0.02);
  spec.wind.amplitude_n = Vec3(0.10, 0.10, 0.08);
  spec.wind.frequency_hz = Vec3(0.40, 0.55, 0.70);

  spec.impact.pattern = default_impact_pattern();
  return spec;
}

}  // namespace uamsim::traj
