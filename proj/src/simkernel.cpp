#include "uamsim/simkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "uamsim/integrator.hpp"

namespace uamsim::sim {

std::string to_string(ControllerChoice c) {
  return c == ControllerChoice::Proposed ? "proposed" : "baseline";
}

std::string to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::Contact: return "contact";
    case TraceEvent::Pickup: return "pickup";
    case TraceEvent::Holding: return "holding";
    case TraceEvent::Drop: return "drop";
    default: return "";
  }
}

int gripper_code(const grip::GripperState& g) {
  if (g.band_state == grip::BandState::Flat) return 0;
  return g.holding ? 2 : 1;
}

double RunTrace::nan_time() { return std::numeric_limits<double>::quiet_NaN(); }

SimTruthBounds sim_truth_bounds(const traj::ScenarioSpec& spec,
                                const dyn::UamParams& params,
                                int envelope_samples,
                                const ctl::ControllerConfig& cfg) {
  if (envelope_samples < 1000) envelope_samples = 1000;

  // Envelope box: reference positions padded by a meter, attitude well inside
  // the rotation-guard region, full arm span, velocities past the reference
  // suprema. Sampled with a fixed seed so bounds are reproducible.
  double lo[3] = {1e30, 1e30, 1e30}, hi[3] = {-1e30, -1e30, -1e30};
  for (const auto& w : spec.trajectory.waypoints()) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], w.chi(i));
      hi[i] = std::max(hi[i], w.chi(i));
    }
  }
  double sup_speed = 0.0, sup_accel = 0.0;
  spec.trajectory.reference_suprema(sup_speed, sup_accel);
  const double vel_span = 2.0 * sup_speed + 1.5;

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  SimTruthBounds b;
  b.m_lower = std::numeric_limits<double>::infinity();
  b.sup_ref_speed = sup_speed;
  b.sup_ref_accel = sup_accel;
  b.d_bar = spec.disturbance_bound;

  dyn::UamParams p = params;
  for (int n = 0; n < envelope_samples; ++n) {
    SystemState st;
    for (int i = 0; i < 3; ++i) {
      st.chi(i) = lo[i] - 1.0 + (hi[i] - lo[i] + 2.0) * 0.5 * (unit(rng) + 1.0);
    }
    st.chi(3) = 0.45 * unit(rng);
    st.chi(4) = 0.45 * unit(rng);
    st.chi(5) = 0.9 * kPi * unit(rng);
    st.chi(6) = 0.9 * kPi * unit(rng);
    st.chi(7) = 0.9 * kPi * unit(rng);
    for (int i = 0; i < kDof; ++i) st.chi_dot(i) = vel_span * unit(rng);
    p.payload_mass = (n % 2 == 0) ? 0.0 : spec.payload_mass;

    const Mat8 m = dyn::mass_matrix(st, p);
    Eigen::SelfAdjointEigenSolver<Mat8> eig(m);
    b.m_upper = std::max(b.m_upper, eig.eigenvalues().maxCoeff());
    b.m_lower = std::min(b.m_lower, eig.eigenvalues().minCoeff());

    const Mat8 c = dyn::coriolis_matrix(st, p);
    const double speed = st.chi_dot.norm();
    if (speed > 1e-9) {
      const double cnorm = c.jacobiSvd().singularValues()(0);
      b.c_bar = std::max(b.c_bar, cnorm / speed);
    }
    const Vec8 g_net = dyn::gravity_vector(st, p) - spec.actuation_trim;
    b.g_bar = std::max(b.g_bar, g_net.norm());
  }

  // Uncertainty-bound constants of the sliding-error dynamics, evaluated from
  // the sampled envelope; unknown to the controller by construction.
  const double phi_norm = cfg.phi.maxCoeff();
  b.k_star(0) = b.d_bar + b.g_bar + b.c_bar * sup_speed * sup_speed +
                b.m_upper * sup_accel;
  b.k_star(1) = b.c_bar * sup_speed * (3.0 + phi_norm) + b.m_upper * phi_norm;
  b.k_star(2) = b.c_bar * (2.0 + phi_norm);

  const double lambda_min = cfg.lambda.minCoeff();
  const double nu_half_min = (cfg.nu / 2.0).minCoeff();
  b.varrho = std::min(lambda_min, nu_half_min) / std::max(b.m_upper / 2.0, 0.5);
  b.zeta = 0.5 * (cfg.nu.array() * b.k_star.array().square()).sum();
  return b;
}

namespace {

struct ContactProbe {
  bool present = false;
  double offset_mm = 0.0;
};

ContactProbe probe_contact(const traj::ScenarioSpec& spec,
                           const SystemState& state,
                           const dyn::UamParams& params) {
  ContactProbe out;
  const Vec3 tip = dyn::arm_tip_position(state, params);
  const Vec3& obj = spec.contact.object_position;
  const double lateral = (tip.head<2>() - obj.head<2>()).norm();
  if (tip(2) <= obj(2) && lateral <= spec.contact.capture_radius_xy) {
    out.present = true;
    // Offset along the band axis (body y) drives the trigger threshold.
    out.offset_mm = std::abs(tip(1) - obj(1)) * 1000.0;
  }
  return out;
}

struct EventEngine {
  traj::EventTimeline timeline;
  bool pickup_armed = false;
  bool pickup_fired = false;
  double press_until = -1.0;  // >= 0 only for timed presses
  double press_force = 0.0;
  double press_offset = 0.0;
  bool payload_attached = false;
};

}  // namespace

RunTrace run(const traj::ScenarioSpec& spec, const ControllerSetup& controller,
             const dyn::UamParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
  spec.gripper_model.validate();
  params.validate();
  controller.proposed.validate();
  controller.baseline.validate();

  RunTrace trace;
  trace.scenario = spec.name;
  trace.controller = to_string(controller.choice);
  trace.dt = dt;
  trace.bounds = sim_truth_bounds(spec, params, 2000, controller.proposed);

  dyn::UamParams truth = params;  // mutated by pickup/drop events
  SystemState state;
  state.chi = spec.trajectory.sample(0.0).chi_d;
  Vec3 k_hat = controller.proposed.k_hat_init;
  grip::GripperState gripper;
  EventEngine engine;

  const long n_steps = std::lround(spec.t_end / dt);
  trace.rows.reserve(static_cast<size_t>(n_steps) + 1);

  // Control decision at (t, state, gains): law output plus trim, clamped to
  // the per-channel limits. Shared by the integrator stages and the logger.
  const auto control_at = [&](double t, const SystemState& s, const Vec3& k,
                              Vec3* k_rate) -> Vec8 {
    const DesiredPoint desired = spec.trajectory.sample(t);
    GeneralizedForce tau;
    if (controller.choice == ControllerChoice::Proposed) {
      const ctl::AdaptiveGains gains(k);
      const ctl::ControlDecision dec =
          ctl::proposed_controller_step(s, desired, gains, controller.proposed);
      tau = dec.tau;
      if (k_rate != nullptr) *k_rate = dec.k_hat_rate;
    } else {
      tau = ctl::baseline_smc_step(s, desired, controller.baseline);
      if (k_rate != nullptr) k_rate->setZero();
    }
    tau.tau += spec.actuation_trim;
    return tau.tau.cwiseMax(-spec.tau_limit).cwiseMin(spec.tau_limit);
  };

  // Continuous-time closed loop for the integrator; the discrete layer
  // (events, gripper, payload) advances only at sample boundaries, so the
  // right-hand side stays smooth within each step.
  const auto rhs = [&](double t, const SystemState& s,
                       const Vec3& k) -> dyn::AugmentedDeriv {
    dyn::AugmentedDeriv out;
    GeneralizedForce tau;
    tau.tau = control_at(t, s, k, &out.k_hat_rate);
    const Disturbance d = traj::disturbance_eval(spec, t, s, engine.timeline);
    out.accel = dyn::forward_dynamics(s, tau, d, truth);
    return out;
  };

  for (long step = 0; step <= n_steps; ++step) {
    const double t = step * dt;
    TraceEvent row_event = TraceEvent::None;

    // --- discrete layer -------------------------------------------------
    double contact_force = 0.0;
    double contact_offset = 0.0;
    bool in_press = false;
    for (const traj::ScenarioEvent& ev : spec.events) {
      if (ev.kind == traj::EventKind::Pickup &&
          ev.trigger == traj::EventTrigger::AtTime && !engine.pickup_fired &&
          t >= ev.time) {
        engine.pickup_fired = true;
        engine.press_until = ev.time + ev.press_duration_s;
        engine.press_force = ev.press_force_n;
        engine.press_offset = ev.offset_mm;
        traj::ActivePulse pulse;
        pulse.t_start = t;
        pulse.duration = grip::activation_time(ev.offset_mm, spec.gripper_model);
        pulse.peak_n = ev.impact_peak_n;
        engine.timeline.pulses.push_back(pulse);
        trace.contact_time = t;
        row_event = TraceEvent::Pickup;
      }
      if (ev.kind == traj::EventKind::Pickup &&
          ev.trigger == traj::EventTrigger::OnContact && t >= ev.time) {
        engine.pickup_armed = true;
      }
      if (ev.kind == traj::EventKind::Drop && t >= ev.time &&
          std::isnan(trace.drop_time) &&
          gripper.band_state == grip::BandState::Curled) {
        const bool was_holding = gripper.holding;
        gripper = grip::open_gripper(gripper);
        if (was_holding && engine.payload_attached) {
          truth.payload_mass -= spec.payload_mass;
          engine.payload_attached = false;
        }
        trace.drop_time = t;
        row_event = TraceEvent::Drop;
      }
    }

    if (engine.pickup_armed && !engine.pickup_fired) {
      const ContactProbe probe = probe_contact(spec, state, truth);
      if (probe.present) {
        engine.pickup_fired = true;
        engine.press_offset = probe.offset_mm;
        traj::ActivePulse pulse;
        pulse.t_start = t;
        pulse.duration = grip::activation_time(probe.offset_mm, spec.gripper_model);
        pulse.peak_n = spec.impact.peak_n_at_ref * spec.approach_speed /
                       spec.impact.reference_speed;
        engine.timeline.pulses.push_back(pulse);
        trace.contact_time = t;
        row_event = TraceEvent::Contact;
      }
    }

    // Contact force seen by the gripper: the reaction pulse plus, while the
    // press window or geometric contact persists, the residual press force.
    if (engine.pickup_fired) {
      if (engine.press_until >= 0.0) {
        in_press = t <= engine.press_until;
      } else {
        in_press = probe_contact(spec, state, truth).present;
      }
      for (const traj::ActivePulse& pu : engine.timeline.pulses) {
        const double u = pu.duration > 0.0 ? (t - pu.t_start) / pu.duration : 2.0;
        if (u >= 0.0 && u <= 1.0) {
          contact_force += pu.peak_n * std::max(0.0, std::sin(kPi * u));
        }
      }
      if (engine.press_until >= 0.0 && in_press) {
        contact_force += engine.press_force;
      } else if (in_press) {
        contact_force += spec.contact.hold_force_n;
      }
      contact_offset = engine.press_offset;
    }

    const bool was_holding = gripper.holding;
    gripper = grip::gripper_update(gripper, spec.gripper_model, contact_force,
                                   contact_offset, dt);
    if (!was_holding && gripper.holding) {
      truth.payload_mass += spec.payload_mass;
      engine.payload_attached = true;
      trace.holding_time = t;
      if (row_event == TraceEvent::None) row_event = TraceEvent::Holding;
    }

    // --- log ------------------------------------------------------------
    const DesiredPoint desired = spec.trajectory.sample(t);
    TraceRow row;
    row.t = t;
    row.chi = state.chi;
    row.chi_d = desired.chi_d;
    row.e = state.chi - desired.chi_d;
    const ctl::TrackingError te = ctl::TrackingError::from(state, desired);
    const Vec8 phi = controller.choice == ControllerChoice::Proposed
                         ? controller.proposed.phi
                         : controller.baseline.phi;
    row.s = ctl::sliding_variable(te.e, te.e_dot, phi);
    row.tau = control_at(t, state, k_hat, nullptr);
    const Mat3 rot = dyn::rotation_matrix(state.chi(3), state.chi(4), state.chi(5));
    row.u1 = dyn::thrust_allocation(row.tau.head<3>(), rot).u1;
    row.k_hat = k_hat;
    row.lyapunov = lyapunov_value(row.s, dyn::mass_matrix(state, truth), k_hat,
                                  trace.bounds.k_star);
    row.gripper = gripper_code(gripper);
    row.event = row_event;
    trace.rows.push_back(row);

    if (step == n_steps) break;

    // --- integrate ------------------------------------------------------
    // Divergence, attitude-singularity and conditioning failures all leave
    // the partial trace in place instead of unwinding past the caller.
    try {
      auto [next_state, next_k] = dyn::step_rk4(state, k_hat, rhs, t, dt);
      if (std::abs(next_state.chi(3)) >= kPi / 2 - 1e-6 ||
          std::abs(next_state.chi(4)) >= kPi / 2 - 1e-6) {
        throw dyn::DivergenceError("roll/pitch left the (-pi/2, pi/2) envelope");
      }
      state = next_state;
      k_hat = next_k;
    } catch (const std::exception& err) {
      trace.diverged = true;
      trace.divergence_message = err.what();
      break;
    }
  }
  trace.payload_mass_final = truth.payload_mass;
  return trace;
}

double rms(const std::vector<Vec8>& series, int channel) {
  if (series.empty()) throw std::invalid_argument("rms: empty series");
  if (channel < 0 || channel >= kDof) throw std::invalid_argument("rms: bad channel");
  double acc = 0.0;
  for (const Vec8& v : series) acc += v(channel) * v(channel);
  return std::sqrt(acc / static_cast<double>(series.size()));
}

Vec8 rms_error(const RunTrace& trace) {
  if (trace.rows.empty()) throw std::invalid_argument("rms_error: empty trace");
  Vec8 acc = Vec8::Zero();
  for (const TraceRow& row : trace.rows) acc += row.e.cwiseProduct(row.e);
  return (acc / static_cast<double>(trace.rows.size())).cwiseSqrt();
}

double lyapunov_value(const Vec8& s, const Mat8& mass, const Vec3& k_hat,
                      const Vec3& k_star) {
  const Vec3 k_err = k_hat - k_star;
  return 0.5 * s.dot(mass * s) + 0.5 * k_err.squaredNorm();
}

UubReport uub_certify(const RunTrace& trace, const SimTruthBounds& bounds,
                      double kappa, double tol) {
  if (!(kappa > 0.0 && kappa < bounds.varrho)) {
    throw std::invalid_argument("uub_certify: kappa must lie in (0, varrho)");
  }
  if (trace.rows.empty()) throw std::invalid_argument("uub_certify: empty trace");

  UubReport report;
  const double ball = bounds.zeta / (bounds.varrho - kappa);
  report.lyapunov_bound = std::max(trace.rows.front().lyapunov, ball);

  report.satisfied = true;
  for (const TraceRow& row : trace.rows) {
    if (row.lyapunov > report.lyapunov_bound + tol) {
      report.satisfied = false;
      break;
    }
  }

  // Entry time: start of the final stretch on which V stays within the ball.
  size_t entry = trace.rows.size();
  for (size_t i = trace.rows.size(); i-- > 0;) {
    if (trace.rows[i].lyapunov > ball + tol) break;
    entry = i;
  }
  if (entry < trace.rows.size()) {
    report.entry_time = trace.rows[entry].t;
    double sup_s = 0.0;
    for (size_t i = entry; i < trace.rows.size(); ++i) {
      sup_s = std::max(sup_s, trace.rows[i].s.norm());
    }
    report.residual_radius = sup_s;
  } else {
    report.entry_time = std::numeric_limits<double>::quiet_NaN();
    report.residual_radius = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace uamsim::sim
