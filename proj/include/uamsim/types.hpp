#pragma once

#include <Eigen/Dense>

namespace uamsim {

// Generalized-coordinate layout used everywhere:
//   chi = [x y z  phi theta psi  alpha1 alpha2]
// Quadrotor position in the world frame, Z-Y-X Euler attitude, and the two
// arm joint angles. The arm moves in the body x-z plane; joint angles are
// measured from the straight-down direction, positive swinging toward -x_B.
inline constexpr int kDof = 8;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec8 = Eigen::Matrix<double, kDof, 1>;
using Mat8 = Eigen::Matrix<double, kDof, kDof>;

struct SystemState {
  Vec8 chi = Vec8::Zero();
  Vec8 chi_dot = Vec8::Zero();

  Vec3 position() const { return chi.head<3>(); }
  Vec3 attitude() const { return chi.segment<3>(3); }
  Eigen::Vector2d arm() const { return chi.tail<2>(); }

  bool finite() const { return chi.allFinite() && chi_dot.allFinite(); }
};

/// Generalized input tau = [tau_p (N, 3); tau_q (N*m, 3); tau_alpha (N*m, 2)].
struct GeneralizedForce {
  Vec8 tau = Vec8::Zero();
};

/// Lumped external forces/disturbances, same channel layout as the input.
struct Disturbance {
  Vec8 d = Vec8::Zero();
};

/// One sample of the reference trajectory and its first two derivatives.
struct DesiredPoint {
  Vec8 chi_d = Vec8::Zero();
  Vec8 chi_d_dot = Vec8::Zero();
  Vec8 chi_d_ddot = Vec8::Zero();
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace uamsim
