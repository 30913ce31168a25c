#pragma once

#include <stdexcept>

#include "uamsim/types.hpp"

namespace uamsim::dyn {

// Rigid-body model: a quadrotor base carrying a 2R planar arm mounted at the
// base center of mass. Link i is a lumped body (point mass at its COM plus a
// scalar inertia about the joint-plane normal); the payload, when held, is a
// point mass at the arm tip. All quantities are exact analytic expressions;
// the Coriolis matrix comes from Christoffel symbols of M so that
// d/dt(M) - 2C is skew-symmetric to machine precision.
struct UamParams {
  // Stock platform: 650-class quadrotor at 2.6 kg plus a 0.4 kg serial arm
  // (joint servos and the gripper dominate the link masses, which pushes the
  // COMs outboard), 3.0 kg all up.
  double quad_mass = 2.6;                      // kg
  Vec3 quad_inertia{0.04, 0.04, 0.07};         // kg m^2, body-frame diagonal
  double link_masses[2] = {0.22, 0.18};        // kg
  double link_lengths[2] = {0.25, 0.25};       // m
  double link_com_offsets[2] = {0.18, 0.16};   // m, joint to link COM
  double link_inertias[2] = {5.0e-3, 4.0e-3};  // kg m^2, about link COM
  double payload_mass = 0.0;                   // kg, > 0 only while holding
  double gravity = 9.81;                       // m/s^2

  double total_mass() const {
    return quad_mass + link_masses[0] + link_masses[1] + payload_mass;
  }
  /// Throws std::invalid_argument unless all masses/lengths/inertias are
  /// strictly positive and payload_mass >= 0.
  void validate() const;
};

struct SingularAttitudeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Z-Y-X Euler rotation, body frame to world frame.
/// Throws SingularAttitudeError when |theta| >= pi/2 - 1e-6.
Mat3 rotation_matrix(double phi, double theta, double psi);

/// Maps Euler angle rates to the body angular velocity: omega_B = W * eta_dot.
Mat3 euler_rate_map(double phi, double theta);

/// Inertia matrix M(chi). Symmetric positive definite for valid params and
/// |theta| < pi/2.
Mat8 mass_matrix(const SystemState& state, const UamParams& params);

/// Coriolis/centrifugal matrix from the Christoffel symbols of M.
Mat8 coriolis_matrix(const SystemState& state, const UamParams& params);

/// Gravity vector g(chi) = dV/dchi; at hover the input balancing gravity is
/// exactly tau = g(chi).
Vec8 gravity_vector(const SystemState& state, const UamParams& params);

/// Potential energy with datum at world z = 0 (consistent with gravity_vector).
double potential_energy(const SystemState& state, const UamParams& params);

/// 0.5 * chi_dot' M chi_dot.
double kinetic_energy(const SystemState& state, const UamParams& params);

double mechanical_energy(const SystemState& state, const UamParams& params);

/// Solves M qdd = tau - C qd - g - d for the generalized acceleration.
/// Throws ConditioningError if the reciprocal condition estimate of M falls
/// below 1e-12.
Vec8 forward_dynamics(const SystemState& state, const GeneralizedForce& tau,
                      const Disturbance& d, const UamParams& params);

struct ThrustAllocation {
  double u1 = 0.0;                       // body-z thrust component
  Eigen::Vector2d residual{0.0, 0.0};    // lateral components of R' tau_p
};

/// Resolves a translational generalized force into the scalar body-z thrust.
/// The lateral remainder is reported as a diagnostic, not reallocated.
ThrustAllocation thrust_allocation(const Vec3& tau_p, const Mat3& rotation);

/// World position of the gripper attachment point (arm tip).
Vec3 arm_tip_position(const SystemState& state, const UamParams& params);

}  // namespace uamsim::dyn
