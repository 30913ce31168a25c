#include "uamsim/controller.hpp"

#include <cmath>

namespace uamsim::ctl {

ControllerConfig ControllerConfig::defaults() {
  ControllerConfig c;
  c.phi << 1.0, 1.0, 1.2, 1.1, 1.1, 1.0, 1.2, 1.2;
  c.lambda << 2.0, 2.0, 3.5, 1.5, 1.5, 1.2, 3.0, 3.0;
  c.nu << 2.0, 5.0, 5.0;
  c.k_hat_init << 0.1, 0.1, 0.1;
  c.delta = 0.1;
  return c;
}

void ControllerConfig::validate() const {
  const bool ok = (phi.array() > 0.0).all() && (lambda.array() > 0.0).all() &&
                  (nu.array() > 0.0).all() && (k_hat_init.array() > 0.0).all() &&
                  delta > 0.0;
  if (!ok) throw std::invalid_argument("ControllerConfig: gains must be positive");
}

BaselineSmcConfig BaselineSmcConfig::defaults() {
  BaselineSmcConfig c;
  c.phi << 1.0, 1.0, 1.2, 1.1, 1.1, 1.0, 1.2, 1.2;
  c.lambda << 2.0, 2.0, 3.5, 1.5, 1.5, 1.2, 3.0, 3.0;
  return c;
}

void BaselineSmcConfig::validate() const {
  if (!((phi.array() > 0.0).all() && (lambda.array() > 0.0).all() &&
        fixed_rho > 0.0 && delta > 0.0)) {
    throw std::invalid_argument("BaselineSmcConfig: gains must be positive");
  }
}

TrackingError TrackingError::from(const SystemState& state,
                                  const DesiredPoint& desired) {
  TrackingError te;
  te.e = state.chi - desired.chi_d;
  te.e_dot = state.chi_dot - desired.chi_d_dot;
  te.xi_norm = std::sqrt(te.e.squaredNorm() + te.e_dot.squaredNorm());
  return te;
}

Vec8 sliding_variable(const Vec8& e, const Vec8& e_dot, const Vec8& phi_diag) {
  return e_dot + phi_diag.cwiseProduct(e);
}

Vec3 gain_rate(const Vec3& k_hat, double s_norm, double xi_norm, const Vec3& nu) {
  Vec3 rate;
  double pow_xi = 1.0;
  for (int i = 0; i < 3; ++i) {
    rate(i) = s_norm * pow_xi - nu(i) * k_hat(i);
    pow_xi *= xi_norm;
  }
  return rate;
}

double uncertainty_gain_rho(const Vec3& k_hat, double xi_norm) {
  return k_hat(0) + k_hat(1) * xi_norm + k_hat(2) * xi_norm * xi_norm;
}

Vec8 control_law(const Vec8& s, double rho, const Vec8& lambda_diag,
                 double delta) {
  const double smooth = std::sqrt(s.squaredNorm() + delta);
  return -lambda_diag.cwiseProduct(s) - (rho / smooth) * s;
}

ControlDecision proposed_controller_step(const SystemState& state,
                                         const DesiredPoint& desired,
                                         const AdaptiveGains& gains,
                                         const ControllerConfig& cfg) {
  const TrackingError te = TrackingError::from(state, desired);
  const Vec8 s = sliding_variable(te.e, te.e_dot, cfg.phi);
  const double rho = uncertainty_gain_rho(gains.k_hat, te.xi_norm);

  ControlDecision out;
  out.tau.tau = control_law(s, rho, cfg.lambda, cfg.delta);
  out.k_hat_rate = gain_rate(gains.k_hat, s.norm(), te.xi_norm, cfg.nu);
  return out;
}

GeneralizedForce baseline_smc_step(const SystemState& state,
                                   const DesiredPoint& desired,
                                   const BaselineSmcConfig& cfg) {
  const TrackingError te = TrackingError::from(state, desired);
  const Vec8 s = sliding_variable(te.e, te.e_dot, cfg.phi);
  GeneralizedForce out;
  out.tau = control_law(s, cfg.fixed_rho, cfg.lambda, cfg.delta);
  return out;
}

}  // namespace uamsim::ctl
