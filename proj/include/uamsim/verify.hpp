#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uamsim/dynamics.hpp"

namespace uamsim::sim {

struct CheckResult {
  enum class Kind { UpperBound, LowerBound };

  std::string name;
  int samples = 0;
  double value = 0.0;      // worst observed residual (or extreme value)
  double threshold = 0.0;
  Kind kind = Kind::UpperBound;
  bool pass = false;       // value <= threshold (Upper) or >= (Lower)
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

using CoriolisFn =
    std::function<Mat8(const SystemState&, const dyn::UamParams&)>;

struct VerifyOptions {
  int samples = 1000;
  std::uint64_t seed = 42;
  // Seam for negative-control tests: swap in a corrupted Coriolis term and
  // the skew-symmetry check must fail.
  CoriolisFn coriolis = {};
};

/// Randomized identity checks of the plant model: mass-matrix symmetry and
/// positive definiteness, skew symmetry of dM/dt - 2C against a
/// finite-difference dM/dt, rotation orthonormality, unforced energy
/// conservation, and the forward-dynamics residual.
VerifyReport verify_dynamics(const dyn::UamParams& params,
                             const VerifyOptions& opt = {});

/// Controller invariants: gain positivity under integration, rho
/// monotonicity, switching-law Lipschitz continuity.
VerifyReport verify_controller(const VerifyOptions& opt = {});

/// Gripper monotonicities over the characterized ranges.
VerifyReport verify_gripper(const VerifyOptions& opt = {});

/// C2 splicing of both reference scenario scripts at segment boundaries.
VerifyReport verify_trajectory(const VerifyOptions& opt = {});

/// Everything above, concatenated.
VerifyReport verify_all(const dyn::UamParams& params, const VerifyOptions& opt = {});

std::string format_report(const VerifyReport& report);

}  // namespace uamsim::sim
