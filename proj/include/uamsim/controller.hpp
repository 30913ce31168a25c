#pragma once

#include <stdexcept>

#include "uamsim/types.hpp"

// Model-free adaptive sliding-mode controller plus a fixed-gain baseline.
//
// Everything in this module is a pure function of tracking errors, gains, and
// user configuration. Plant parameters (masses, inertias, gravity) are not
// visible here by construction: this header depends only on the shared state
// types, and the library target links nothing from the dynamics module.

namespace uamsim::ctl {

/// The three uncertainty-bound estimates driven by the adaptation law.
struct AdaptiveGains {
  Vec3 k_hat{0.1, 0.1, 0.1};

  AdaptiveGains() = default;
  explicit AdaptiveGains(const Vec3& init) : k_hat(init) {
    if (!(k_hat.array() > 0.0).all()) {
      throw std::invalid_argument("AdaptiveGains: initial estimates must be > 0");
    }
  }
};

struct ControllerConfig {
  Vec8 phi;       // sliding-variable gain, diagonal
  Vec8 lambda;    // proportional sliding gain, diagonal
  Vec3 nu;        // leak rates
  Vec3 k_hat_init;
  double delta = 0.1;  // switching smoothing

  /// Stock tuning used by the reference scenarios.
  static ControllerConfig defaults();
  void validate() const;
};

struct TrackingError {
  Vec8 e = Vec8::Zero();
  Vec8 e_dot = Vec8::Zero();
  double xi_norm = 0.0;  // ||[e; e_dot]||

  static TrackingError from(const SystemState& state, const DesiredPoint& desired);
};

/// Fixed-gain sliding-mode stand-in used for comparisons. Unlike the adaptive
/// law it needs a user-supplied uncertainty bound, which is the point.
/// phi must match the adaptive controller's phi so both laws regulate the
/// same sliding variable.
struct BaselineSmcConfig {
  Vec8 phi;
  Vec8 lambda;
  double fixed_rho = 5.0;
  double delta = 0.1;

  static BaselineSmcConfig defaults();
  void validate() const;
};

/// s = e_dot + Phi e.
Vec8 sliding_variable(const Vec8& e, const Vec8& e_dot, const Vec8& phi_diag);

/// Adaptation rates: k_rate_i = ||s|| ||xi||^i - nu_i k_hat_i.
Vec3 gain_rate(const Vec3& k_hat, double s_norm, double xi_norm, const Vec3& nu);

/// rho = K0 + K1 ||xi|| + K2 ||xi||^2.
double uncertainty_gain_rho(const Vec3& k_hat, double xi_norm);

/// tau = -Lambda s - rho * s / sqrt(||s||^2 + delta). The smoothed switching
/// direction is used unconditionally, so the law is continuous at s = 0.
Vec8 control_law(const Vec8& s, double rho, const Vec8& lambda_diag, double delta);

struct ControlDecision {
  GeneralizedForce tau;
  Vec3 k_hat_rate = Vec3::Zero();
};

ControlDecision proposed_controller_step(const SystemState& state,
                                         const DesiredPoint& desired,
                                         const AdaptiveGains& gains,
                                         const ControllerConfig& cfg);

GeneralizedForce baseline_smc_step(const SystemState& state,
                                   const DesiredPoint& desired,
                                   const BaselineSmcConfig& cfg);

}  // namespace uamsim::ctl
