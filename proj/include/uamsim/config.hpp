#pragma once

#include <map>
#include <string>

#include "uamsim/simkernel.hpp"

namespace uamsim::io {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value configuration. Lines may be blank or start with '#'.
// Vector values are comma-separated; curve values are comma-separated x:y
// pairs. Unknown keys are rejected so typos cannot silently change a run.
// The full key list is documented in the README.
class SimConfig {
 public:
  SimConfig() = default;

  static SimConfig from_file(const std::string& path);
  /// Applies one "key=value" override on top of the current values.
  void set(const std::string& key, const std::string& value);
  void set_pair(const std::string& key_equals_value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct RunSetup {
  traj::ScenarioSpec spec;
  dyn::UamParams params;
  sim::ControllerSetup controller;
  double dt = 1e-3;
  std::uint64_t seed = 1;
};

/// Materializes a full run description from a configuration: scenario script,
/// plant truth parameters, controller gains, integration step and seed.
/// Wind phases are drawn from the seed here, once.
RunSetup build_run_setup(const SimConfig& cfg);

}  // namespace uamsim::io
