#pragma once

#include <stdexcept>
#include <utility>

#include "uamsim/types.hpp"

namespace uamsim::dyn {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kDivergenceLimit = 1e6;

/// One classical RK4 step for a fixed-size first-order system.
/// Rhs signature: Vec f(double t, const Vec& y).
template <int N, typename Rhs>
Eigen::Matrix<double, N, 1> rk4_step(const Rhs& f, double t,
                                     const Eigen::Matrix<double, N, 1>& y,
                                     double dt) {
  using Vec = Eigen::Matrix<double, N, 1>;
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k1));
  const Vec k3 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k2));
  const Vec k4 = f(t + dt, Vec(y + dt * k3));
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Time derivative of the augmented closed-loop state [chi, chi_dot, k_hat].
struct AugmentedDeriv {
  Vec8 accel = Vec8::Zero();
  Vec3 k_hat_rate = Vec3::Zero();
};

inline constexpr int kAugDim = 2 * kDof + 3;

/// RK4 step of plant and adaptive gains as one augmented state, so the gain
/// integration shares the stage structure of the plant (no splitting scheme).
/// Rhs signature: AugmentedDeriv f(double t, const SystemState&, const Vec3&).
/// Throws DivergenceError if any updated entry exceeds 1e6 in magnitude.
template <typename Rhs>
std::pair<SystemState, Vec3> step_rk4(const SystemState& state,
                                      const Vec3& k_hat, const Rhs& rhs,
                                      double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be > 0");

  using Aug = Eigen::Matrix<double, kAugDim, 1>;
  Aug y;
  y << state.chi, state.chi_dot, k_hat;

  const auto f = [&rhs](double tk, const Aug& yk) -> Aug {
    SystemState s;
    s.chi = yk.segment<kDof>(0);
    s.chi_dot = yk.segment<kDof>(kDof);
    const AugmentedDeriv d = rhs(tk, s, Vec3(yk.tail<3>()));
    Aug dy;
    dy << s.chi_dot, d.accel, d.k_hat_rate;
    return dy;
  };

  const Aug next = rk4_step<kAugDim>(f, t, y, dt);
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergenceLimit) {
    throw DivergenceError("step_rk4: state magnitude exceeded 1e6");
  }

  SystemState out;
  out.chi = next.segment<kDof>(0);
  out.chi_dot = next.segment<kDof>(kDof);
  return {out, Vec3(next.tail<3>())};
}

}  // namespace uamsim::dyn
