#include "uamsim/dynamics.hpp"

#include <cmath>
#include <complex>

namespace uamsim::dyn {

namespace {

constexpr double kThetaGuard = 1e-6;

template <typename S>
using Mat3T = Eigen::Matrix<S, 3, 3>;
template <typename S>
using Vec3T = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Mat8T = Eigen::Matrix<S, kDof, kDof>;

template <typename S>
Mat3T<S> rotation_zyx(const S& phi, const S& theta, const S& psi) {
  using std::cos;
  using std::sin;
  const S cphi = cos(phi), sphi = sin(phi);
  const S cth = cos(theta), sth = sin(theta);
  const S cpsi = cos(psi), spsi = sin(psi);
  Mat3T<S> r;
  r(0, 0) = cpsi * cth;
  r(0, 1) = cpsi * sth * sphi - spsi * cphi;
  r(0, 2) = cpsi * sth * cphi + spsi * sphi;
  r(1, 0) = spsi * cth;
  r(1, 1) = spsi * sth * sphi + cpsi * cphi;
  r(1, 2) = spsi * sth * cphi - cpsi * sphi;
  r(2, 0) = -sth;
  r(2, 1) = sphi * cth;
  r(2, 2) = cphi * cth;
  return r;
}

// omega_B = W(phi, theta) * [phi_dot, theta_dot, psi_dot]
template <typename S>
Mat3T<S> rate_map(const S& phi, const S& theta) {
  using std::cos;
  using std::sin;
  const S cphi = cos(phi), sphi = sin(phi);
  const S cth = cos(theta), sth = sin(theta);
  Mat3T<S> w;
  w(0, 0) = S(1); w(0, 1) = S(0); w(0, 2) = -sth;
  w(1, 0) = S(0); w(1, 1) = cphi; w(1, 2) = sphi * cth;
  w(2, 0) = S(0); w(2, 1) = -sphi; w(2, 2) = cphi * cth;
  return w;
}

template <typename S>
Mat3T<S> skew(const Vec3T<S>& v) {
  Mat3T<S> m;
  m << S(0), -v(2), v(1),
       v(2), S(0), -v(0),
       -v(1), v(0), S(0);
  return m;
}

// Arm link direction for a joint angle measured from straight down,
// positive toward -x_B.
template <typename S>
Vec3T<S> link_dir(const S& beta) {
  using std::cos;
  using std::sin;
  return Vec3T<S>(-sin(beta), S(0), -cos(beta));
}

template <typename S>
Vec3T<S> link_dir_deriv(const S& beta) {
  using std::cos;
  using std::sin;
  return Vec3T<S>(-cos(beta), S(0), sin(beta));
}

// One point-mass body of the coupled system: COM position in the body frame
// and its derivative w.r.t. the two joint angles.
template <typename S>
struct LumpedBody {
  double mass = 0.0;
  Vec3T<S> com = Vec3T<S>::Zero();
  Eigen::Matrix<S, 3, 2> dcom = Eigen::Matrix<S, 3, 2>::Zero();
};

template <typename S>
struct ModelGeometry {
  Mat3T<S> rot;   // R_B^W
  Mat3T<S> wmap;  // Euler rate map
  // bodies[0] = link 1, bodies[1] = link 2, bodies[2] = payload at tip
  LumpedBody<S> bodies[3];
  int n_bodies = 2;
};

template <typename S>
ModelGeometry<S> geometry(const Eigen::Matrix<S, 5, 1>& angles,
                          const UamParams& p) {
  // angles = [phi, theta, psi, alpha1, alpha2]
  ModelGeometry<S> g;
  g.rot = rotation_zyx(angles(0), angles(1), angles(2));
  g.wmap = rate_map(angles(0), angles(1));

  const S a1 = angles(3);
  const S a12 = angles(3) + angles(4);
  const Vec3T<S> u1 = link_dir(a1), du1 = link_dir_deriv(a1);
  const Vec3T<S> u2 = link_dir(a12), du2 = link_dir_deriv(a12);

  auto& l1 = g.bodies[0];
  l1.mass = p.link_masses[0];
  l1.com = p.link_com_offsets[0] * u1;
  l1.dcom.col(0) = p.link_com_offsets[0] * du1;

  auto& l2 = g.bodies[1];
  l2.mass = p.link_masses[1];
  l2.com = p.link_lengths[0] * u1 + p.link_com_offsets[1] * u2;
  l2.dcom.col(0) = p.link_lengths[0] * du1 + p.link_com_offsets[1] * du2;
  l2.dcom.col(1) = p.link_com_offsets[1] * du2;

  if (p.payload_mass > 0.0) {
    auto& pay = g.bodies[2];
    pay.mass = p.payload_mass;
    pay.com = p.link_lengths[0] * u1 + p.link_lengths[1] * u2;
    pay.dcom.col(0) = p.link_lengths[0] * du1 + p.link_lengths[1] * du2;
    pay.dcom.col(1) = p.link_lengths[1] * du2;
    g.n_bodies = 3;
  }
  return g;
}

// M(chi) assembled from translational Gram blocks of each body Jacobian,
// the base rotational energy W' I_q W, and the lumped link terms
// I_i * j_w j_w' with j_w the body-y angular rate row.
template <typename S>
Mat8T<S> mass_matrix_impl(const Eigen::Matrix<S, 5, 1>& angles,
                          const UamParams& p) {
  const ModelGeometry<S> g = geometry(angles, p);
  Mat8T<S> m = Mat8T<S>::Zero();

  m(0, 0) = m(1, 1) = m(2, 2) = S(p.quad_mass);
  Vec3T<S> inertia_q;
  inertia_q << S(p.quad_inertia(0)), S(p.quad_inertia(1)), S(p.quad_inertia(2));
  m.template block<3, 3>(3, 3) =
      g.wmap.transpose() * inertia_q.asDiagonal() * g.wmap;

  for (int i = 0; i < g.n_bodies; ++i) {
    const auto& b = g.bodies[i];
    const Mat3T<S> j_att = -g.rot * skew<S>(b.com) * g.wmap;
    const Eigen::Matrix<S, 3, 2> j_arm = g.rot * b.dcom;
    const S mass = S(b.mass);

    m(0, 0) += mass; m(1, 1) += mass; m(2, 2) += mass;
    m.template block<3, 3>(0, 3) += mass * j_att;
    m.template block<3, 2>(0, 6) += mass * j_arm;
    m.template block<3, 3>(3, 3) += mass * j_att.transpose() * j_att;
    m.template block<3, 2>(3, 6) += mass * j_att.transpose() * j_arm;
    m.template block<2, 2>(6, 6) += mass * j_arm.transpose() * j_arm;
  }

  // Lumped rotational energy of the links about the joint-plane normal.
  // The body-y rate row picks out w_y = e_y' W eta_dot.
  Eigen::Matrix<S, kDof, 1> jw = Eigen::Matrix<S, kDof, 1>::Zero();
  jw(4) = g.wmap(1, 1);
  jw(5) = g.wmap(1, 2);
  jw(6) = S(1);
  m += S(p.link_inertias[0]) * jw * jw.transpose();
  jw(7) = S(1);
  m += S(p.link_inertias[1]) * jw * jw.transpose();

  // Symmetrize: the Gram construction is symmetric up to rounding in the
  // mixed blocks; mirror the upper triangle so tests see exact symmetry.
  m.template block<3, 3>(3, 0) = m.template block<3, 3>(0, 3).transpose();
  m.template block<2, 3>(6, 0) = m.template block<3, 2>(0, 6).transpose();
  m.template block<2, 3>(6, 3) = m.template block<3, 2>(3, 6).transpose();
  return m;
}

template <typename S>
Eigen::Matrix<S, 5, 1> angle_coords(const SystemState& state) {
  Eigen::Matrix<S, 5, 1> a;
  for (int i = 0; i < 5; ++i) a(i) = S(state.chi(3 + i));
  return a;
}

void check_attitude(const SystemState& state) {
  if (std::abs(state.chi(4)) >= kPi / 2 - kThetaGuard) {
    throw SingularAttitudeError("pitch magnitude at or beyond pi/2");
  }
}

// dM/dchi_k for the five angle coordinates, by complex-step differentiation
// of the analytic assembly (exact to machine precision; no cancellation).
void mass_matrix_derivatives(const SystemState& state, const UamParams& p,
                             Mat8 dm[5]) {
  using C = std::complex<double>;
  constexpr double h = 1e-100;
  const Eigen::Matrix<C, 5, 1> base = angle_coords<C>(state);
  for (int k = 0; k < 5; ++k) {
    Eigen::Matrix<C, 5, 1> a = base;
    a(k) += C(0.0, h);
    const Mat8T<C> mc = mass_matrix_impl<C>(a, p);
    dm[k] = mc.imag() / h;
  }
}

}  // namespace

void UamParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  bool ok = positive(quad_mass) && positive(gravity);
  for (int i = 0; i < 3; ++i) ok = ok && positive(quad_inertia(i));
  for (int i = 0; i < 2; ++i) {
    ok = ok && positive(link_masses[i]) && positive(link_lengths[i]) &&
         positive(link_com_offsets[i]) && positive(link_inertias[i]) &&
         link_com_offsets[i] <= link_lengths[i];
  }
  ok = ok && payload_mass >= 0.0 && std::isfinite(payload_mass);
  if (!ok) throw std::invalid_argument("UamParams: nonpositive or nonfinite entry");
}

Mat3 rotation_matrix(double phi, double theta, double psi) {
  if (!std::isfinite(phi) || !std::isfinite(theta) || !std::isfinite(psi)) {
    throw std::invalid_argument("rotation_matrix: nonfinite angle");
  }
  if (std::abs(theta) >= kPi / 2 - kThetaGuard) {
    throw SingularAttitudeError("rotation_matrix: |theta| >= pi/2 - 1e-6");
  }
  return rotation_zyx<double>(phi, theta, psi);
}

Mat3 euler_rate_map(double phi, double theta) {
  return rate_map<double>(phi, theta);
}

Mat8 mass_matrix(const SystemState& state, const UamParams& params) {
  check_attitude(state);
  return mass_matrix_impl<double>(angle_coords<double>(state), params);
}

Mat8 coriolis_matrix(const SystemState& state, const UamParams& params) {
  check_attitude(state);
  Mat8 dm[5];
  mass_matrix_derivatives(state, params, dm);

  // C_{kj} = 1/2 sum_i (dM_kj/dq_i + dM_ki/dq_j - dM_ij/dq_k) qd_i.
  // M depends only on coordinates 3..7, so the i-sum and the q_k/q_j
  // derivatives restrict to those indices.
  Mat8 c = Mat8::Zero();
  const Vec8& qd = state.chi_dot;
  for (int k = 0; k < kDof; ++k) {
    for (int j = 0; j < kDof; ++j) {
      double sum = 0.0;
      for (int i = 3; i < kDof; ++i) {
        sum += dm[i - 3](k, j) * qd(i);
      }
      if (j >= 3) {
        for (int i = 0; i < kDof; ++i) sum += dm[j - 3](k, i) * qd(i);
      }
      if (k >= 3) {
        for (int i = 0; i < kDof; ++i) sum -= dm[k - 3](i, j) * qd(i);
      }
      c(k, j) = 0.5 * sum;
    }
  }
  return c;
}

Vec8 gravity_vector(const SystemState& state, const UamParams& params) {
  check_attitude(state);
  const auto g = geometry<double>(angle_coords<double>(state), params);
  Vec8 grad = Vec8::Zero();
  grad(2) = params.total_mass() * params.gravity;
  for (int i = 0; i < g.n_bodies; ++i) {
    const auto& b = g.bodies[i];
    const Mat3 j_att = -g.rot * skew<double>(b.com) * g.wmap;
    const Eigen::Matrix<double, 3, 2> j_arm = g.rot * b.dcom;
    grad.segment<3>(3) += b.mass * params.gravity * j_att.row(2).transpose();
    grad.tail<2>() += b.mass * params.gravity * j_arm.row(2).transpose();
  }
  return grad;
}

double potential_energy(const SystemState& state, const UamParams& params) {
  const auto g = geometry<double>(angle_coords<double>(state), params);
  double v = params.quad_mass * params.gravity * state.chi(2);
  for (int i = 0; i < g.n_bodies; ++i) {
    const auto& b = g.bodies[i];
    const double z = state.chi(2) + (g.rot * b.com)(2);
    v += b.mass * params.gravity * z;
  }
  return v;
}

double kinetic_energy(const SystemState& state, const UamParams& params) {
  const Mat8 m = mass_matrix(state, params);
  return 0.5 * state.chi_dot.dot(m * state.chi_dot);
}

double mechanical_energy(const SystemState& state, const UamParams& params) {
  return kinetic_energy(state, params) + potential_energy(state, params);
}

Vec8 forward_dynamics(const SystemState& state, const GeneralizedForce& tau,
                      const Disturbance& d, const UamParams& params) {
  const Mat8 m = mass_matrix(state, params);
  const Vec8 rhs = tau.tau - coriolis_matrix(state, params) * state.chi_dot -
                   gravity_vector(state, params) - d.d;
  Eigen::LLT<Mat8> llt(m);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
    throw ConditioningError("forward_dynamics: mass matrix condition beyond 1e12");
  }
  return llt.solve(rhs);
}

ThrustAllocation thrust_allocation(const Vec3& tau_p, const Mat3& rotation) {
  const Vec3 body = rotation.transpose() * tau_p;
  ThrustAllocation out;
  out.u1 = body(2);
  out.residual = body.head<2>();
  return out;
}

Vec3 arm_tip_position(const SystemState& state, const UamParams& params) {
  const double a1 = state.chi(6);
  const double a12 = state.chi(6) + state.chi(7);
  const Vec3 tip_body = params.link_lengths[0] * link_dir<double>(a1) +
                        params.link_lengths[1] * link_dir<double>(a12);
  const Mat3 r =
      rotation_zyx<double>(state.chi(3), state.chi(4), state.chi(5));
  return state.position() + r * tip_body;
}

}  // namespace uamsim::dyn
