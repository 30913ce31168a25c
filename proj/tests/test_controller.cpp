#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uamsim/controller.hpp"
#include "uamsim/integrator.hpp"

using namespace uamsim;
using ctl::ControllerConfig;

TEST_CASE("sliding variable") {
  Vec8 e = Vec8::Zero(), ed = Vec8::Zero();
  const Vec8 phi_one = Vec8::Ones();
  CHECK(ctl::sliding_variable(e, ed, phi_one).norm() == doctest::Approx(0.0));

  e.setRandom();
  ed.setRandom();
  CHECK((ctl::sliding_variable(e, ed, phi_one) - (ed + e)).norm() ==
        doctest::Approx(0.0));

  Vec8 e1 = Vec8::Zero();
  e1(0) = 1.0;
  const Vec8 phi_two = Vec8::Constant(2.0);
  const Vec8 s = ctl::sliding_variable(e1, Vec8::Zero(), phi_two);
  CHECK(s(0) == doctest::Approx(2.0));
  CHECK(s.tail<7>().norm() == doctest::Approx(0.0));
}

TEST_CASE("gain rate: leak, positivity barrier, direct substitution") {
  const Vec3 nu(2.0, 5.0, 5.0);

  // pure leak at s = 0 with the stock initial estimates
  const Vec3 r0 = ctl::gain_rate(Vec3(0.1, 0.1, 0.1), 0.0, 1.0, nu);
  CHECK(r0(0) == doctest::Approx(-0.2));

  // at k_hat = 0 the rate cannot be negative
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 r = ctl::gain_rate(Vec3::Zero(), uni(rng), uni(rng), nu);
    CHECK(r.minCoeff() >= 0.0);
  }

  const Vec3 r = ctl::gain_rate(Vec3(0.1, 0.1, 0.1), 1.0, 2.0, nu);
  CHECK(r(0) == doctest::Approx(0.8));
  CHECK(r(1) == doctest::Approx(1.5));
  CHECK(r(2) == doctest::Approx(3.5));
}

TEST_CASE("uncertainty gain rho") {
  CHECK(ctl::uncertainty_gain_rho(Vec3(0.7, 9, 9), 0.0) == doctest::Approx(0.7));
  CHECK(ctl::uncertainty_gain_rho(Vec3(0.1, 0.1, 0.1), 1.0) ==
        doctest::Approx(0.3));
  CHECK(ctl::uncertainty_gain_rho(Vec3(1, 2, 3), 2.0) == doctest::Approx(17.0));
}

TEST_CASE("rho monotone in xi for fixed gains") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uni(0.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Vec3 k(0.01 + uni(rng), 0.01 + uni(rng), 0.01 + uni(rng));
    const double a = uni(rng), b = uni(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(ctl::uncertainty_gain_rho(k, lo) <= ctl::uncertainty_gain_rho(k, hi));
  }
}

TEST_CASE("control law: zero at s = 0, saturating switching term, substitution") {
  const Vec8 lambda2 = Vec8::Constant(2.0);
  CHECK(ctl::control_law(Vec8::Zero(), 3.0, lambda2, 0.1).norm() ==
        doctest::Approx(0.0));

  Vec8 s_big = Vec8::Zero();
  s_big(0) = 1e5;
  const Vec8 tau_big = ctl::control_law(s_big, 7.0, lambda2, 0.1);
  CHECK(std::abs(tau_big(0) + 2.0 * 1e5 + 7.0) < 1e-3);

  Vec8 s1 = Vec8::Zero();
  s1(0) = 1.0;
  const Vec8 tau = ctl::control_law(s1, 1.0, lambda2, 0.1);
  CHECK(tau(0) == doctest::Approx(-2.0 - 1.0 / std::sqrt(1.1)).epsilon(1e-12));
  CHECK(tau.tail<7>().norm() == doctest::Approx(0.0));
}

TEST_CASE("control law: measured Lipschitz constant within the analytic bound") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const ControllerConfig cfg = ControllerConfig::defaults();
  for (int i = 0; i < 500; ++i) {
    Vec8 s1, s2;
    for (int k = 0; k < kDof; ++k) {
      s1(k) = uni(rng);
      s2(k) = uni(rng);
    }
    const double rho = 5.0 * std::abs(uni(rng));
    const double bound = cfg.lambda.maxCoeff() + 2.0 * rho / std::sqrt(cfg.delta);
    const double den = (s1 - s2).norm();
    if (den < 1e-12) continue;
    const double num = (ctl::control_law(s1, rho, cfg.lambda, cfg.delta) -
                        ctl::control_law(s2, rho, cfg.lambda, cfg.delta))
                           .norm();
    CHECK(num / den <= bound);
  }
}

TEST_CASE("proposed step: perfect tracking, purity, composition regression") {
  const ControllerConfig cfg = ControllerConfig::defaults();

  SystemState st;
  st.chi.setRandom();
  st.chi_dot.setRandom();
  DesiredPoint d;
  d.chi_d = st.chi;
  d.chi_d_dot = st.chi_dot;
  const ctl::AdaptiveGains g0(cfg.k_hat_init);
  const ctl::ControlDecision dec = ctl::proposed_controller_step(st, d, g0, cfg);
  CHECK(dec.tau.tau.norm() == doctest::Approx(0.0));
  CHECK((dec.k_hat_rate + cfg.nu.cwiseProduct(cfg.k_hat_init)).norm() ==
        doctest::Approx(0.0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    SystemState s;
    DesiredPoint dp;
    for (int i = 0; i < kDof; ++i) {
      s.chi(i) = uni(rng);
      s.chi_dot(i) = uni(rng);
      dp.chi_d(i) = uni(rng);
      dp.chi_d_dot(i) = uni(rng);
    }
    const ctl::AdaptiveGains g(
        Vec3(0.1 + std::abs(uni(rng)), 0.1 + std::abs(uni(rng)),
             0.1 + std::abs(uni(rng))));

    const ctl::ControlDecision a = ctl::proposed_controller_step(s, dp, g, cfg);
    const ctl::ControlDecision b = ctl::proposed_controller_step(s, dp, g, cfg);
    CHECK((a.tau.tau - b.tau.tau).norm() == doctest::Approx(0.0));

    // hand-composed law
    const ctl::TrackingError te = ctl::TrackingError::from(s, dp);
    const Vec8 sv = ctl::sliding_variable(te.e, te.e_dot, cfg.phi);
    const double rho = ctl::uncertainty_gain_rho(g.k_hat, te.xi_norm);
    const Vec8 tau = ctl::control_law(sv, rho, cfg.lambda, cfg.delta);
    const Vec3 rate = ctl::gain_rate(g.k_hat, sv.norm(), te.xi_norm, cfg.nu);
    CHECK((a.tau.tau - tau).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((a.k_hat_rate - rate).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("tracking error invariant: xi dominates both norms") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int n = 0; n < 200; ++n) {
    SystemState s;
    DesiredPoint d;
    for (int i = 0; i < kDof; ++i) {
      s.chi(i) = uni(rng);
      s.chi_dot(i) = uni(rng);
      d.chi_d(i) = uni(rng);
      d.chi_d_dot(i) = uni(rng);
    }
    const ctl::TrackingError te = ctl::TrackingError::from(s, d);
    CHECK(te.xi_norm >= te.e.norm() - 1e-12);
    CHECK(te.xi_norm >= te.e_dot.norm() - 1e-12);
    CHECK(te.xi_norm ==
          doctest::Approx(std::sqrt(te.e.squaredNorm() + te.e_dot.squaredNorm())));
  }
}

TEST_CASE("baseline: zero at s = 0, pure proportional at rho = 0, law parity") {
  ctl::BaselineSmcConfig cfg = ctl::BaselineSmcConfig::defaults();

  SystemState st;
  DesiredPoint d;
  st.chi.setRandom();
  st.chi_dot.setRandom();
  d.chi_d = st.chi;
  d.chi_d_dot = st.chi_dot;
  CHECK(ctl::baseline_smc_step(st, d, cfg).tau.norm() == doctest::Approx(0.0));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SystemState s;
  DesiredPoint dp;
  for (int i = 0; i < kDof; ++i) {
    s.chi(i) = uni(rng);
    s.chi_dot(i) = uni(rng);
    dp.chi_d(i) = uni(rng);
    dp.chi_d_dot(i) = uni(rng);
  }
  const ctl::TrackingError te = ctl::TrackingError::from(s, dp);
  const Vec8 sv = ctl::sliding_variable(te.e, te.e_dot, cfg.phi);

  // rho -> 0 edge: validate() rejects 0, but the law itself degrades to -Lambda s
  const Vec8 tau_prop = ctl::control_law(sv, 0.0, cfg.lambda, cfg.delta);
  CHECK((tau_prop + cfg.lambda.cwiseProduct(sv)).norm() == doctest::Approx(0.0));

  // matched instantaneous rho gives the identical input
  const ControllerConfig pc = ControllerConfig::defaults();
  const ctl::AdaptiveGains g(Vec3(0.3, 0.2, 0.1));
  const double rho = ctl::uncertainty_gain_rho(g.k_hat, te.xi_norm);
  cfg.fixed_rho = rho;
  cfg.lambda = pc.lambda;
  const Vec8 a = ctl::baseline_smc_step(s, dp, cfg).tau;
  const Vec8 b = ctl::proposed_controller_step(s, dp, g, pc).tau.tau;
  CHECK((a - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("adaptive gains: constructor positivity and integration invariants") {
  CHECK_THROWS_AS(ctl::AdaptiveGains(Vec3(0.0, 0.1, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(ctl::AdaptiveGains(Vec3(0.1, -0.1, 0.1)), std::invalid_argument);

  // positivity and the analytic envelope along random bounded excitation
  const ControllerConfig cfg = ControllerConfig::defaults();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vec3 k = cfg.k_hat_init;
  double sup_s = 0.0, sup_sxi = 0.0, sup_sxi2 = 0.0;
  double s_norm = 0.0, xi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    if (i % 100 == 0) {
      s_norm = 2.5 * uni(rng);
      xi = 3.0 * uni(rng);
    }
    sup_s = std::max(sup_s, s_norm);
    sup_sxi = std::max(sup_sxi, s_norm * xi);
    sup_sxi2 = std::max(sup_sxi2, s_norm * xi * xi);
    const auto f = [&](double, const Eigen::Matrix<double, 3, 1>& y) {
      return Eigen::Matrix<double, 3, 1>(ctl::gain_rate(y, s_norm, xi, cfg.nu));
    };
    k = dyn::rk4_step<3>(f, 0.0, k, 1e-3);
    CHECK(k.minCoeff() > 0.0);
    CHECK(k(0) <= std::max(cfg.k_hat_init(0), sup_s / cfg.nu(0)) + 1e-6);
    CHECK(k(1) <= std::max(cfg.k_hat_init(1), sup_sxi / cfg.nu(1)) + 1e-6);
    CHECK(k(2) <= std::max(cfg.k_hat_init(2), sup_sxi2 / cfg.nu(2)) + 1e-6);
  }
}

TEST_CASE("config validation") {
  ControllerConfig c = ControllerConfig::defaults();
  CHECK_NOTHROW(c.validate());
  c.delta = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  ctl::BaselineSmcConfig b = ctl::BaselineSmcConfig::defaults();
  CHECK_NOTHROW(b.validate());
  b.fixed_rho = 0.0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}
