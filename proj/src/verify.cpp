#include "uamsim/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "uamsim/controller.hpp"
#include "uamsim/gripper.hpp"
#include "uamsim/integrator.hpp"
#include "uamsim/trajectory.hpp"

namespace uamsim::sim {

namespace {

SystemState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SystemState st;
  for (int i = 0; i < 3; ++i) st.chi(i) = 2.0 * uni(rng);
  st.chi(3) = uni(rng);
  st.chi(4) = uni(rng);
  st.chi(5) = 0.9 * kPi * uni(rng);
  st.chi(6) = 0.9 * kPi * uni(rng);
  st.chi(7) = 0.9 * kPi * uni(rng);
  for (int i = 0; i < kDof; ++i) st.chi_dot(i) = 2.0 * uni(rng);
  return st;
}

CheckResult make_result(const std::string& name, int samples, double residual,
                        double tol) {
  CheckResult r;
  r.name = name;
  r.samples = samples;
  r.value = residual;
  r.threshold = tol;
  r.kind = CheckResult::Kind::UpperBound;
  r.pass = residual <= tol && std::isfinite(residual);
  return r;
}

CheckResult make_lower_bound(const std::string& name, int samples, double value,
                             double threshold) {
  CheckResult r;
  r.name = name;
  r.samples = samples;
  r.value = value;
  r.threshold = threshold;
  r.kind = CheckResult::Kind::LowerBound;
  r.pass = value >= threshold && std::isfinite(value);
  return r;
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

VerifyReport verify_dynamics(const dyn::UamParams& params,
                             const VerifyOptions& opt) {
  VerifyReport report;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const CoriolisFn coriolis =
      opt.coriolis ? opt.coriolis : CoriolisFn(&dyn::coriolis_matrix);

  dyn::UamParams p = params;

  double sym_res = 0.0, eig_min = 1e300, skew_res = 0.0, rot_res = 0.0,
         fwd_res = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    p.payload_mass = (n % 2 == 0) ? 0.0 : 0.2;
    const SystemState st = random_state(rng);

    const Mat8 m = dyn::mass_matrix(st, p);
    sym_res = std::max(sym_res, (m - m.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat8> eig(m);
    eig_min = std::min(eig_min, eig.eigenvalues().minCoeff());

    // Property-3 residual against a central finite difference of M along the
    // state velocity; C itself comes from the analytic Christoffel path.
    const Mat8 c = coriolis(st, p);
    const double h = 1e-5;
    SystemState plus = st, minus = st;
    plus.chi += 0.5 * h * st.chi_dot;
    minus.chi -= 0.5 * h * st.chi_dot;
    const Mat8 m_dot = (dyn::mass_matrix(plus, p) - dyn::mass_matrix(minus, p)) / h;
    Vec8 r;
    for (int i = 0; i < kDof; ++i) r(i) = uni(rng);
    const double q = r.dot((m_dot - 2.0 * c) * r);
    skew_res = std::max(
        skew_res, std::abs(q) / (r.squaredNorm() * (1.0 + st.chi_dot.norm())));

    const Mat3 rot = dyn::rotation_matrix(st.chi(3), st.chi(4), st.chi(5));
    const double ortho = (rot.transpose() * rot - Mat3::Identity()).cwiseAbs().maxCoeff();
    rot_res = std::max(rot_res, std::max(ortho, std::abs(rot.determinant() - 1.0)));

    GeneralizedForce tau;
    Disturbance d;
    for (int i = 0; i < kDof; ++i) {
      tau.tau(i) = 10.0 * uni(rng);
      d.d(i) = 2.0 * uni(rng);
    }
    const Vec8 acc = dyn::forward_dynamics(st, tau, d, p);
    const Vec8 resid = m * acc + c * st.chi_dot + dyn::gravity_vector(st, p) +
                       d.d - tau.tau;
    fwd_res = std::max(fwd_res, resid.cwiseAbs().maxCoeff());
  }

  report.checks.push_back(
      make_result("mass_matrix_symmetry", opt.samples, sym_res, 1e-12));
  report.checks.push_back(make_lower_bound("mass_matrix_min_eigenvalue",
                                           opt.samples, eig_min, 1e-12));
  report.checks.push_back(
      make_result("coriolis_skew_symmetry", opt.samples, skew_res, 1e-6));
  report.checks.push_back(
      make_result("rotation_orthonormality", opt.samples, rot_res, 1e-12));

  // Unforced flight with a counter-rotating arm: the base barely rotates, so
  // pitch stays inside the guard band while every coupling term is exercised.
  {
    dyn::UamParams pe = params;
    pe.payload_mass = 0.0;
    SystemState st;
    st.chi(6) = 0.4;
    st.chi(7) = -0.6;
    st.chi_dot(6) = 0.6;
    st.chi_dot(7) = -1.2;
    st.chi_dot(2) = 1.0;
    const double e0 = dyn::mechanical_energy(st, pe);
    const double scale = std::max(std::abs(e0), 1.0);
    const auto rhs = [&pe](double, const SystemState& s,
                           const Vec3&) -> dyn::AugmentedDeriv {
      dyn::AugmentedDeriv out;
      out.accel = dyn::forward_dynamics(s, GeneralizedForce{}, Disturbance{}, pe);
      return out;
    };
    double drift = 0.0;
    Vec3 k = Vec3::Ones();
    double t = 0.0;
    for (int i = 0; i < 5000; ++i) {
      std::tie(st, k) = dyn::step_rk4(st, k, rhs, t, 1e-3);
      t += 1e-3;
      drift = std::max(drift, std::abs(dyn::mechanical_energy(st, pe) - e0));
    }
    report.checks.push_back(
        make_result("energy_conservation_5s", 5000, drift / scale, 1e-5));
  }

  report.checks.push_back(
      make_result("forward_dynamics_residual", opt.samples, fwd_res, 1e-9));
  return report;
}

VerifyReport verify_controller(const VerifyOptions& opt) {
  VerifyReport report;
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const ctl::ControllerConfig cfg = ctl::ControllerConfig::defaults();

  // Gain positivity along piecewise-constant excitation at the stock leaks.
  double k_min = 1e300;
  {
    Vec3 k = cfg.k_hat_init;
    double s_norm = 0.0, xi = 0.0;
    for (int i = 0; i < 20000; ++i) {
      if (i % 200 == 0) {
        s_norm = 3.0 * uni(rng);
        xi = 3.0 * uni(rng);
      }
      const auto f = [&](double, const Eigen::Matrix<double, 3, 1>& y) {
        return Eigen::Matrix<double, 3, 1>(ctl::gain_rate(y, s_norm, xi, cfg.nu));
      };
      k = dyn::rk4_step<3>(f, 0.0, k, 1e-3);
      k_min = std::min(k_min, k.minCoeff());
    }
  }
  report.checks.push_back(
      make_lower_bound("gain_positivity_20k_steps", 20000, k_min, 1e-12));

  // rho monotone in ||xi|| for fixed gains.
  double mono_res = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    const Vec3 k(0.01 + uni(rng), 0.01 + uni(rng), 0.01 + uni(rng));
    const double a = 5.0 * uni(rng), b = 5.0 * uni(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    mono_res = std::max(mono_res, ctl::uncertainty_gain_rho(k, lo) -
                                      ctl::uncertainty_gain_rho(k, hi));
  }
  report.checks.push_back(
      make_result("rho_monotonicity", opt.samples, mono_res, 0.0));

  // Lipschitz bound of the smoothed law on a ball: |J| <= lambda_max + 2 rho/sqrt(delta).
  double lip_res = 0.0;
  for (int n = 0; n < opt.samples; ++n) {
    Vec8 s1, s2;
    for (int i = 0; i < kDof; ++i) {
      s1(i) = 2.0 * (uni(rng) - 0.5);
      s2(i) = 2.0 * (uni(rng) - 0.5);
    }
    const double rho = 5.0 * uni(rng);
    const double bound =
        cfg.lambda.maxCoeff() + 2.0 * rho / std::sqrt(cfg.delta);
    const double num = (ctl::control_law(s1, rho, cfg.lambda, cfg.delta) -
                        ctl::control_law(s2, rho, cfg.lambda, cfg.delta))
                           .norm();
    const double den = (s1 - s2).norm();
    if (den > 1e-12) lip_res = std::max(lip_res, num / den - bound);
  }
  report.checks.push_back(
      make_result("control_law_lipschitz", opt.samples, lip_res, 0.0));
  return report;
}

VerifyReport verify_gripper(const VerifyOptions& opt) {
  VerifyReport report;
  const grip::GripperModel model = grip::GripperModel::defaults();

  double offset_mono = 0.0, preten_mono = 0.0, act_mono = 0.0;
  const int n = std::max(opt.samples, 50);
  for (int i = 0; i + 1 < n; ++i) {
    const double o1 = 60.0 * i / (n - 1), o2 = 60.0 * (i + 1) / (n - 1);
    offset_mono = std::max(offset_mono,
                           grip::effective_trigger_force(model, o1) -
                               grip::effective_trigger_force(model, o2));
    grip::GripperModel m1 = model, m2 = model;
    m1.pretension_n = 3.21 * i / (n - 1);
    m2.pretension_n = 3.21 * (i + 1) / (n - 1);
    preten_mono = std::max(preten_mono,
                           grip::effective_trigger_force(m2, 0.0) -
                               grip::effective_trigger_force(m1, 0.0));
    const double a1 = 35.0 * i / (n - 1), a2 = 35.0 * (i + 1) / (n - 1);
    act_mono = std::max(act_mono, grip::activation_time(a1, model) -
                                      grip::activation_time(a2, model));
  }
  report.checks.push_back(
      make_result("trigger_force_offset_monotone", n, offset_mono, 0.0));
  report.checks.push_back(
      make_result("trigger_force_pretension_monotone", n, preten_mono, 0.0));
  report.checks.push_back(
      make_result("activation_time_monotone", n, act_mono, 0.0));

  const double f0 = grip::effective_trigger_force(model, 0.0);
  const double anchor_res =
      std::max(0.0, std::max(0.5 - f0, f0 - 1.0));  // inside [0.5, 1.0] N
  report.checks.push_back(make_result("trigger_force_anchor", 1, anchor_res, 0.0));
  return report;
}

VerifyReport verify_trajectory(const VerifyOptions& opt) {
  VerifyReport report;
  (void)opt;

  auto boundary_residual = [](const traj::ScenarioSpec& spec) {
    double res = 0.0;
    const auto& wps = spec.trajectory.waypoints();
    for (size_t k = 1; k + 1 < wps.size(); ++k) {
      const double t = wps[k].t;
      const DesiredPoint a = spec.trajectory.sample(t - 1e-9);
      const DesiredPoint b = spec.trajectory.sample(t + 1e-9);
      res = std::max(res, (a.chi_d - b.chi_d).cwiseAbs().maxCoeff());
      res = std::max(res, (a.chi_d_dot - b.chi_d_dot).cwiseAbs().maxCoeff());
      res = std::max(res, 1e-3 * (a.chi_d_ddot - b.chi_d_ddot).cwiseAbs().maxCoeff());
    }
    return res;
  };

  const traj::ScenarioSpec s1 = traj::build_scenario1(traj::Scenario1Params{});
  report.checks.push_back(
      make_result("scenario1_c2_continuity",
                  static_cast<int>(s1.trajectory.waypoints().size()),
                  boundary_residual(s1), 1e-6));
  for (int c = 1; c <= 3; ++c) {
    const traj::ScenarioSpec s2 = traj::build_scenario2(traj::Scenario2Params{}, c);
    report.checks.push_back(
        make_result("scenario2_case" + std::to_string(c) + "_c2_continuity",
                    static_cast<int>(s2.trajectory.waypoints().size()),
                    boundary_residual(s2), 1e-6));
  }
  return report;
}

VerifyReport verify_all(const dyn::UamParams& params, const VerifyOptions& opt) {
  VerifyReport report = verify_dynamics(params, opt);
  for (auto&& fn : {&verify_controller, &verify_gripper, &verify_trajectory}) {
    VerifyReport part = fn(opt);
    report.checks.insert(report.checks.end(), part.checks.begin(),
                         part.checks.end());
  }
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    const char* rel = c.kind == CheckResult::Kind::UpperBound ? "<=" : ">=";
    out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  samples=" << c.samples
        << "  value=" << c.value << "  required " << rel << " " << c.threshold
        << "\n";
  }
  out << (report.all_pass() ? "verify: all checks passed\n"
                            : "verify: FAILURES present\n");
  return out.str();
}

}  // namespace uamsim::sim
