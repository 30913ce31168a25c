#include "uamsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace uamsim::io {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario", "case", "controller", "dt", "t_end", "seed",
      "payload.mass", "disturbance.bound",
      "trim.force", "plant.tau_limit",
      "ctrl.phi", "ctrl.lambda", "ctrl.nu", "ctrl.k_init", "ctrl.delta",
      "baseline.lambda", "baseline.rho", "baseline.delta",
      "wind.enabled", "wind.bias", "wind.amp", "wind.freq",
      "impact.peak", "impact.reference_speed", "impact.pattern",
      "contact.object", "contact.capture_radius", "contact.hold_force",
      "gripper.support_distance", "gripper.pretension", "gripper.spring_k",
      "gripper.poly", "gripper.base_trigger_force", "gripper.window",
      "gripper.pretension_curve", "gripper.offset_curve",
      "gripper.activation_curve",
      "plant.quad_mass", "plant.quad_inertia", "plant.link_masses",
      "plant.link_lengths", "plant.link_com_offsets", "plant.link_inertias",
      "plant.gravity",
      "scenario1.takeoff_end", "scenario1.reach_pick", "scenario1.arm_pregrasp",
      "scenario1.arm_grasp", "scenario1.arm_retract", "scenario1.cruise_start",
      "scenario1.cruise_end", "scenario1.drop_time", "scenario1.t_end",
      "scenario1.hover_height", "scenario1.pick_x", "scenario1.drop_x",
      "scenario1.arm_init", "scenario1.arm_pregrasp_deg", "scenario1.arm_grasp_deg",
      "scenario1.press_force", "scenario1.press_duration", "scenario1.press_offset",
      "scenario1.impact_peak",
      "scenario2.takeoff_end", "scenario2.descent_start", "scenario2.blend_time",
      "scenario2.dwell_time", "scenario2.ascend_duration", "scenario2.t_end",
      "scenario2.start_x", "scenario2.hover_height", "scenario2.object_z",
      "scenario2.penetration", "scenario2.ascend_x", "scenario2.arm_deg",
      "scenario2.case_speeds",
  };
  return keys;
}

std::string trim_ws(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::istringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim_ws(tok);
    if (tok.empty()) continue;
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("config: bad number '" + tok + "' in " + key);
    }
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

grip::MonotoneCurve parse_curve(const std::string& value, const std::string& key) {
  std::vector<double> xs, ys;
  std::istringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim_ws(tok);
    if (tok.empty()) continue;
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("config: expected x:y pairs in " + key);
    }
    try {
      xs.push_back(std::stod(tok.substr(0, colon)));
      ys.push_back(std::stod(tok.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("config: bad pair '" + tok + "' in " + key);
    }
  }
  try {
    return grip::MonotoneCurve(xs, ys);
  } catch (const std::exception& e) {
    throw ConfigError("config: " + key + ": " + e.what());
  }
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vec(const SimConfig& cfg, const std::string& key,
                                      const Eigen::Matrix<double, N, 1>& fallback) {
  if (!cfg.has(key)) return fallback;
  const std::vector<double> xs = parse_list(cfg.get_string(key, ""), key);
  if (static_cast<int>(xs.size()) != N) {
    throw ConfigError("config: " + key + " needs exactly " +
                      std::to_string(N) + " values");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = xs[i];
  return v;
}

void fill_pair(const SimConfig& cfg, const std::string& key, double out[2]) {
  if (!cfg.has(key)) return;
  const auto xs = parse_list(cfg.get_string(key, ""), key);
  if (xs.size() != 2) throw ConfigError("config: " + key + " needs 2 values");
  out[0] = xs[0];
  out[1] = xs[1];
}

}  // namespace

SimConfig SimConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  SimConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string stripped = trim_ws(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    cfg.set(trim_ws(stripped.substr(0, eq)), trim_ws(stripped.substr(eq + 1)));
  }
  return cfg;
}

void SimConfig::set(const std::string& key, const std::string& value) {
  if (known_keys().find(key) == known_keys().end()) {
    throw ConfigError("config: unknown key '" + key + "'");
  }
  values_[key] = value;
}

void SimConfig::set_pair(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("config: override must be key=value, got '" + kv + "'");
  }
  set(trim_ws(kv.substr(0, eq)), trim_ws(kv.substr(eq + 1)));
}

bool SimConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string SimConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double SimConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key);
  }
}

int SimConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key);
  }
}

bool SimConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config: bad boolean for " + key);
}

RunSetup build_run_setup(const SimConfig& cfg) {
  RunSetup setup;
  setup.dt = cfg.get_double("dt", 1e-3);
  setup.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));

  // plant truth
  dyn::UamParams& p = setup.params;
  p.quad_mass = cfg.get_double("plant.quad_mass", p.quad_mass);
  p.quad_inertia = parse_vec<3>(cfg, "plant.quad_inertia", p.quad_inertia);
  fill_pair(cfg, "plant.link_masses", p.link_masses);
  fill_pair(cfg, "plant.link_lengths", p.link_lengths);
  fill_pair(cfg, "plant.link_com_offsets", p.link_com_offsets);
  fill_pair(cfg, "plant.link_inertias", p.link_inertias);
  p.gravity = cfg.get_double("plant.gravity", p.gravity);
  p.validate();

  // controller
  const std::string which = cfg.get_string("controller", "proposed");
  if (which == "proposed") {
    setup.controller.choice = sim::ControllerChoice::Proposed;
  } else if (which == "baseline") {
    setup.controller.choice = sim::ControllerChoice::Baseline;
  } else {
    throw ConfigError("config: controller must be 'proposed' or 'baseline'");
  }
  ctl::ControllerConfig& cc = setup.controller.proposed;
  cc.phi = parse_vec<kDof>(cfg, "ctrl.phi", cc.phi);
  cc.lambda = parse_vec<kDof>(cfg, "ctrl.lambda", cc.lambda);
  cc.nu = parse_vec<3>(cfg, "ctrl.nu", cc.nu);
  cc.k_hat_init = parse_vec<3>(cfg, "ctrl.k_init", cc.k_hat_init);
  cc.delta = cfg.get_double("ctrl.delta", cc.delta);
  cc.validate();

  ctl::BaselineSmcConfig& bc = setup.controller.baseline;
  bc.phi = cc.phi;  // shared sliding variable
  bc.lambda = parse_vec<kDof>(cfg, "baseline.lambda", bc.lambda);
  bc.fixed_rho = cfg.get_double("baseline.rho", bc.fixed_rho);
  bc.delta = cfg.get_double("baseline.delta", bc.delta);
  bc.validate();

  // scenario script
  const std::string scenario = cfg.get_string("scenario", "scenario1");
  if (scenario == "scenario1") {
    traj::Scenario1Params s1;
    s1.takeoff_end = cfg.get_double("scenario1.takeoff_end", s1.takeoff_end);
    s1.reach_pick = cfg.get_double("scenario1.reach_pick", s1.reach_pick);
    s1.arm_pregrasp = cfg.get_double("scenario1.arm_pregrasp", s1.arm_pregrasp);
    s1.arm_grasp = cfg.get_double("scenario1.arm_grasp", s1.arm_grasp);
    s1.arm_retract = cfg.get_double("scenario1.arm_retract", s1.arm_retract);
    s1.cruise_start = cfg.get_double("scenario1.cruise_start", s1.cruise_start);
    s1.cruise_end = cfg.get_double("scenario1.cruise_end", s1.cruise_end);
    s1.drop_time = cfg.get_double("scenario1.drop_time", s1.drop_time);
    s1.t_end = cfg.get_double("scenario1.t_end", s1.t_end);
    s1.hover_height = cfg.get_double("scenario1.hover_height", s1.hover_height);
    s1.pick_x = cfg.get_double("scenario1.pick_x", s1.pick_x);
    s1.drop_x = cfg.get_double("scenario1.drop_x", s1.drop_x);
    fill_pair(cfg, "scenario1.arm_init", s1.arm_init_deg);
    fill_pair(cfg, "scenario1.arm_pregrasp_deg", s1.arm_pregrasp_deg);
    fill_pair(cfg, "scenario1.arm_grasp_deg", s1.arm_grasp_deg);
    s1.press_force_n = cfg.get_double("scenario1.press_force", s1.press_force_n);
    s1.press_duration_s =
        cfg.get_double("scenario1.press_duration", s1.press_duration_s);
    s1.press_offset_mm =
        cfg.get_double("scenario1.press_offset", s1.press_offset_mm);
    s1.impact_peak_n = cfg.get_double("scenario1.impact_peak", s1.impact_peak_n);
    setup.spec = traj::build_scenario1(s1);
  } else if (scenario == "scenario2") {
    traj::Scenario2Params s2;
    s2.takeoff_end = cfg.get_double("scenario2.takeoff_end", s2.takeoff_end);
    s2.descent_start = cfg.get_double("scenario2.descent_start", s2.descent_start);
    s2.blend_time = cfg.get_double("scenario2.blend_time", s2.blend_time);
    s2.dwell_time = cfg.get_double("scenario2.dwell_time", s2.dwell_time);
    s2.ascend_duration =
        cfg.get_double("scenario2.ascend_duration", s2.ascend_duration);
    s2.t_end = cfg.get_double("scenario2.t_end", s2.t_end);
    s2.start_x = cfg.get_double("scenario2.start_x", s2.start_x);
    s2.hover_height = cfg.get_double("scenario2.hover_height", s2.hover_height);
    s2.object_z = cfg.get_double("scenario2.object_z", s2.object_z);
    s2.penetration_m = cfg.get_double("scenario2.penetration", s2.penetration_m);
    s2.ascend_x = cfg.get_double("scenario2.ascend_x", s2.ascend_x);
    fill_pair(cfg, "scenario2.arm_deg", s2.arm_deg);
    if (cfg.has("scenario2.case_speeds")) {
      const auto xs = parse_list(cfg.get_string("scenario2.case_speeds", ""),
                                 "scenario2.case_speeds");
      if (xs.size() != 3) {
        throw ConfigError("config: scenario2.case_speeds needs 3 values");
      }
      for (int i = 0; i < 3; ++i) s2.case_speeds[i] = xs[i];
    }
    setup.spec = traj::build_scenario2(s2, cfg.get_int("case", 1));
  } else {
    throw ConfigError("config: scenario must be 'scenario1' or 'scenario2'");
  }

  // scenario-wide overrides
  traj::ScenarioSpec& spec = setup.spec;
  spec.payload_mass = cfg.get_double("payload.mass", spec.payload_mass);
  spec.disturbance_bound =
      cfg.get_double("disturbance.bound", spec.disturbance_bound);
  spec.actuation_trim = parse_vec<kDof>(cfg, "trim.force", spec.actuation_trim);
  spec.tau_limit = parse_vec<kDof>(cfg, "plant.tau_limit", spec.tau_limit);
  if (cfg.has("t_end")) spec.t_end = cfg.get_double("t_end", spec.t_end);

  spec.wind.enabled = cfg.get_bool("wind.enabled", spec.wind.enabled);
  spec.wind.bias_n = parse_vec<3>(cfg, "wind.bias", spec.wind.bias_n);
  spec.wind.amplitude_n = parse_vec<3>(cfg, "wind.amp", spec.wind.amplitude_n);
  spec.wind.frequency_hz = parse_vec<3>(cfg, "wind.freq", spec.wind.frequency_hz);

  spec.impact.peak_n_at_ref = cfg.get_double("impact.peak", spec.impact.peak_n_at_ref);
  spec.impact.reference_speed =
      cfg.get_double("impact.reference_speed", spec.impact.reference_speed);
  spec.impact.pattern = parse_vec<kDof>(cfg, "impact.pattern", spec.impact.pattern);

  spec.contact.object_position =
      parse_vec<3>(cfg, "contact.object", spec.contact.object_position);
  spec.contact.capture_radius_xy =
      cfg.get_double("contact.capture_radius", spec.contact.capture_radius_xy);
  spec.contact.hold_force_n =
      cfg.get_double("contact.hold_force", spec.contact.hold_force_n);

  grip::GripperModel& gm = spec.gripper_model;
  gm.support_distance_mm =
      cfg.get_double("gripper.support_distance", gm.support_distance_mm);
  gm.pretension_n = cfg.get_double("gripper.pretension", gm.pretension_n);
  gm.spring_k_n_per_mm = cfg.get_double("gripper.spring_k", gm.spring_k_n_per_mm);
  if (cfg.has("gripper.poly")) {
    const auto xs = parse_list(cfg.get_string("gripper.poly", ""), "gripper.poly");
    if (xs.size() != 3) throw ConfigError("config: gripper.poly needs 3 values");
    gm.poly_a = xs[0];
    gm.poly_b = xs[1];
    gm.poly_c = xs[2];
  }
  gm.base_trigger_force_140_n =
      cfg.get_double("gripper.base_trigger_force", gm.base_trigger_force_140_n);
  gm.grasp_window_mm = cfg.get_double("gripper.window", gm.grasp_window_mm);
  if (cfg.has("gripper.pretension_curve")) {
    gm.pretension_curve =
        parse_curve(cfg.get_string("gripper.pretension_curve", ""),
                    "gripper.pretension_curve");
  }
  if (cfg.has("gripper.offset_curve")) {
    gm.offset_curve = parse_curve(cfg.get_string("gripper.offset_curve", ""),
                                  "gripper.offset_curve");
  }
  if (cfg.has("gripper.activation_curve")) {
    gm.activation_curve =
        parse_curve(cfg.get_string("gripper.activation_curve", ""),
                    "gripper.activation_curve");
  }
  gm.validate();

  // Wind phases are the only seeded quantity; one draw per axis.
  std::mt19937_64 rng(setup.seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  for (int i = 0; i < 3; ++i) spec.wind.phase_rad(i) = uni(rng);

  return setup;
}

}  // namespace uamsim::io
