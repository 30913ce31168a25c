#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uamsim/controller.hpp"
#include "uamsim/dynamics.hpp"
#include "uamsim/gripper.hpp"
#include "uamsim/trajectory.hpp"
#include "uamsim/types.hpp"

namespace uamsim::sim {

enum class ControllerChoice : std::uint8_t { Proposed, Baseline };

std::string to_string(ControllerChoice c);

struct ControllerSetup {
  ControllerChoice choice = ControllerChoice::Proposed;
  ctl::ControllerConfig proposed = ctl::ControllerConfig::defaults();
  ctl::BaselineSmcConfig baseline = ctl::BaselineSmcConfig::defaults();
};

enum class TraceEvent : std::uint8_t { None, Contact, Pickup, Holding, Drop };

std::string to_string(TraceEvent e);

/// Encoded gripper state for the trace: 0 flat, 1 curled, 2 curled+holding.
int gripper_code(const grip::GripperState& g);

struct TraceRow {
  double t = 0.0;
  Vec8 chi = Vec8::Zero();
  Vec8 chi_d = Vec8::Zero();
  Vec8 e = Vec8::Zero();
  Vec8 s = Vec8::Zero();
  Vec8 tau = Vec8::Zero();
  Vec3 k_hat = Vec3::Zero();
  double u1 = 0.0;
  double lyapunov = 0.0;
  int gripper = 0;
  TraceEvent event = TraceEvent::None;
};

/// Operating-envelope constants of the true plant, sampled for verification
/// only; the controller never sees them.
struct SimTruthBounds {
  double m_upper = 0.0;   // sup eigenvalue of M over the envelope
  double m_lower = 0.0;   // inf eigenvalue of M
  double c_bar = 0.0;     // sup ||C|| / ||chi_dot||
  double g_bar = 0.0;     // sup ||g - trim|| (gravity net of actuation trim)
  double d_bar = 0.0;
  double sup_ref_speed = 0.0;
  double sup_ref_accel = 0.0;
  Vec3 k_star = Vec3::Zero();
  double varrho = 0.0;
  double zeta = 0.0;
};

struct RunTrace {
  static constexpr int kSchemaVersion = 1;

  std::string scenario;
  std::string controller;
  double dt = 0.0;
  std::vector<TraceRow> rows;
  SimTruthBounds bounds;
  bool diverged = false;
  std::string divergence_message;
  double payload_mass_final = 0.0;  // simulator-truth payload at run end

  // Event bookkeeping filled during the run (NaN when the event never fired).
  double contact_time = nan_time();
  double holding_time = nan_time();
  double drop_time = nan_time();

  static double nan_time();
};

struct UubReport {
  double entry_time = 0.0;       // first time V stays within the bound
  double residual_radius = 0.0;  // sup ||s|| from the entry time on
  double lyapunov_bound = 0.0;   // max(V(0), zeta / (varrho - kappa))
  bool satisfied = false;
};

/// Samples the plant over a padded operating envelope (positions around the
/// reference, both payload configurations) and assembles the uncertainty
/// constants of the tracking-error bound together with the contraction rate
/// and offset of the Lyapunov inequality. Deterministic: fixed internal seed.
/// The gain arguments must match the controller the certificate is for.
SimTruthBounds sim_truth_bounds(const traj::ScenarioSpec& spec,
                                const dyn::UamParams& params,
                                int envelope_samples = 2000,
                                const ctl::ControllerConfig& cfg =
                                    ctl::ControllerConfig::defaults());

/// Closed-loop run: plant + controller + gripper + events, RK4 on the
/// augmented state at fixed dt. Deterministic. On divergence the partial
/// trace is retained and flagged instead of thrown away.
RunTrace run(const traj::ScenarioSpec& spec, const ControllerSetup& controller,
             const dyn::UamParams& params, double dt = 1e-3);

/// Root-mean-square of one channel over a sample series.
/// Throws std::invalid_argument on an empty series.
double rms(const std::vector<Vec8>& series, int channel);

/// Per-channel RMS of the tracking error recorded in a trace.
Vec8 rms_error(const RunTrace& trace);

/// V = 1/2 s' M s + 1/2 sum_i (khat_i - kstar_i)^2.
double lyapunov_value(const Vec8& s, const Mat8& mass, const Vec3& k_hat,
                      const Vec3& k_star);

/// Checks V(t) <= max(V(0), zeta/(varrho - kappa)) + tol samplewise.
/// Throws std::invalid_argument unless 0 < kappa < varrho.
UubReport uub_certify(const RunTrace& trace, const SimTruthBounds& bounds,
                      double kappa, double tol = 1e-6);

}  // namespace uamsim::sim
