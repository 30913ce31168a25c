// Command-line front end: run scenarios, compute RMS comparison tables,
// verify the model property suites, sweep the scenario-2 cases.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "uamsim/config.hpp"
#include "uamsim/rms_table.hpp"
#include "uamsim/trace_io.hpp"
#include "uamsim/verify.hpp"

namespace {

using namespace uamsim;

int log_level() {
  // SIM_LOG_LEVEL: silent, error, warn, info (default), debug
  const char* env = std::getenv("SIM_LOG_LEVEL");
  const std::string v = env ? env : "info";
  if (v == "silent") return 0;
  if (v == "error") return 1;
  if (v == "warn") return 2;
  if (v == "debug") return 4;
  return 3;
}

void log_info(const std::string& msg) {
  if (log_level() >= 3) std::cerr << "[uamsim] " << msg << "\n";
}

io::SimConfig load_config(const std::string& path,
                          const std::vector<std::string>& overrides) {
  io::SimConfig cfg;
  if (!path.empty()) cfg = io::SimConfig::from_file(path);
  for (const std::string& kv : overrides) cfg.set_pair(kv);
  return cfg;
}

void apply_cli_shortcuts(io::SimConfig& cfg, const std::string& scenario,
                         int case_id, const std::string& controller,
                         double dt, long seed) {
  if (!scenario.empty()) cfg.set("scenario", scenario);
  if (case_id > 0) cfg.set("case", std::to_string(case_id));
  if (!controller.empty()) cfg.set("controller", controller);
  if (dt > 0.0) cfg.set("dt", std::to_string(dt));
  if (seed >= 0) cfg.set("seed", std::to_string(seed));
}

void print_run_summary(const sim::RunTrace& trace) {
  const Vec8 rms = io::rms_row_from_trace(trace);
  std::cout << "scenario:   " << trace.scenario << "\n"
            << "controller: " << trace.controller << "\n"
            << "rows:       " << trace.rows.size() << " (dt=" << trace.dt << ")\n";
  if (!std::isnan(trace.contact_time)) {
    std::cout << "contact:    t=" << trace.contact_time << " s\n";
  }
  if (!std::isnan(trace.holding_time)) {
    std::cout << "holding:    t=" << trace.holding_time << " s\n";
  }
  if (!std::isnan(trace.drop_time)) {
    std::cout << "drop:       t=" << trace.drop_time << " s\n";
  }
  std::cout << "rms (m/deg): x=" << rms(0) << " y=" << rms(1) << " z=" << rms(2)
            << " phi=" << rms(3) << " theta=" << rms(4) << " psi=" << rms(5)
            << " a1=" << rms(6) << " a2=" << rms(7) << "\n";
  if (!trace.rows.empty()) {
    const auto& last = trace.rows.back();
    std::cout << "k_hat(end): " << last.k_hat.transpose() << "\n";
  }
  if (trace.controller == "proposed" && !trace.rows.empty()) {
    // the boundedness certificate is defined for the adaptive law only
    const sim::UubReport uub =
        sim::uub_certify(trace, trace.bounds, trace.bounds.varrho / 2.0);
    std::cout << "uub:        " << (uub.satisfied ? "satisfied" : "VIOLATED")
              << " (bound=" << uub.lyapunov_bound
              << ", entry=" << uub.entry_time
              << ", radius=" << uub.residual_radius << ")\n";
  }
  if (trace.diverged) {
    std::cout << "DIVERGED:   " << trace.divergence_message << "\n";
  }
}

int cmd_run(const io::SimConfig& cfg, const std::string& out, int decimate) {
  const io::RunSetup setup = io::build_run_setup(cfg);
  log_info("running " + setup.spec.name + " with " +
           sim::to_string(setup.controller.choice));
  const sim::RunTrace trace =
      sim::run(setup.spec, setup.controller, setup.params, setup.dt);
  if (!out.empty()) {
    io::write_trace_csv(trace, out, decimate);
    log_info("trace written to " + out);
  }
  print_run_summary(trace);
  return trace.diverged ? 2 : 0;
}

int cmd_rms(const std::vector<std::string>& proposed_paths,
            const std::string& baseline_path, const std::string& out) {
  std::vector<sim::RunTrace> traces;
  std::vector<std::string> labels;
  for (const std::string& p : proposed_paths) {
    traces.push_back(io::read_trace_csv(p));
    labels.push_back(traces.back().scenario + "/" + traces.back().controller);
  }
  sim::RunTrace baseline;
  const sim::RunTrace* base_ptr = nullptr;
  if (!baseline_path.empty()) {
    baseline = io::read_trace_csv(baseline_path);
    base_ptr = &baseline;
  }
  const io::RmsTable table = io::RmsTable::build(traces, labels, base_ptr);
  std::cout << table.format();
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + out);
    f << table.to_csv();
    log_info("table written to " + out);
  }
  return 0;
}

int cmd_verify(int samples, long seed) {
  sim::VerifyOptions opt;
  if (samples > 0) opt.samples = samples;
  if (seed >= 0) opt.seed = static_cast<std::uint64_t>(seed);
  const sim::VerifyReport report = sim::verify_all(dyn::UamParams{}, opt);
  std::cout << sim::format_report(report);
  return report.all_pass() ? 0 : 1;
}

int cmd_sweep(const io::SimConfig& base_cfg, const std::string& out_dir,
              int decimate) {
  std::filesystem::create_directories(out_dir);
  std::vector<sim::RunTrace> traces;
  std::vector<std::string> labels;
  for (int c = 1; c <= 3; ++c) {
    io::SimConfig cfg = base_cfg;
    cfg.set("scenario", "scenario2");
    cfg.set("case", std::to_string(c));
    const io::RunSetup setup = io::build_run_setup(cfg);
    log_info("sweep: " + setup.spec.name);
    traces.push_back(sim::run(setup.spec, setup.controller, setup.params, setup.dt));
    labels.push_back("case " + std::to_string(c));
    io::write_trace_csv(traces.back(),
                        out_dir + "/scenario2_case" + std::to_string(c) + ".csv",
                        decimate);
    if (traces.back().diverged) {
      std::cerr << "sweep: case " << c << " diverged\n";
      return 2;
    }
  }
  const io::RmsTable table = io::RmsTable::build(traces, labels, nullptr);
  std::cout << table.format();
  std::ofstream f(out_dir + "/scenario2_rms.csv", std::ios::binary);
  f << table.to_csv();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uamsim: aerial-manipulator grasp simulation and analysis"};
  app.require_subcommand(1);

  std::string config_path, scenario, controller, out;
  std::vector<std::string> overrides;
  int case_id = 0, decimate = 1, samples = 0;
  double dt = 0.0;
  long seed = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value)");
    sub->add_option("--set", overrides, "override, e.g. --set ctrl.delta=0.2");
    sub->add_option("--scenario", scenario, "scenario1 | scenario2");
    sub->add_option("--case", case_id, "scenario-2 case (1|2|3)");
    sub->add_option("--controller", controller, "proposed | baseline");
    sub->add_option("--dt", dt, "integration step (s)");
    sub->add_option("--seed", seed, "wind phase seed");
  };

  CLI::App* run = app.add_subcommand("run", "simulate one scenario");
  add_common(run);
  run->add_option("--out", out, "trace CSV path");
  run->add_option("--decimate", decimate, "export every Nth row");

  CLI::App* rms = app.add_subcommand("rms", "RMS table from trace CSVs");
  std::vector<std::string> rms_traces;
  std::string rms_baseline;
  rms->add_option("traces", rms_traces, "trace CSVs (one table row each)")
      ->required();
  rms->add_option("--baseline", rms_baseline, "baseline trace CSV");
  rms->add_option("--out", out, "write the table as CSV");

  CLI::App* verify = app.add_subcommand("verify", "model property suites");
  verify->add_option("--samples", samples, "randomized samples per check");
  verify->add_option("--seed", seed, "sampling seed");

  CLI::App* sweep = app.add_subcommand("sweep", "all scenario-2 cases");
  add_common(sweep);
  std::string out_dir = "sweep_out";
  sweep->add_option("--out-dir", out_dir, "output directory");
  sweep->add_option("--decimate", decimate, "export every Nth row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      io::SimConfig cfg = load_config(config_path, overrides);
      apply_cli_shortcuts(cfg, scenario, case_id, controller, dt, seed);
      return cmd_run(cfg, out, decimate);
    }
    if (rms->parsed()) return cmd_rms(rms_traces, rms_baseline, out);
    if (verify->parsed()) return cmd_verify(samples, seed);
    if (sweep->parsed()) {
      io::SimConfig cfg = load_config(config_path, overrides);
      apply_cli_shortcuts(cfg, scenario, case_id, controller, dt, seed);
      return cmd_sweep(cfg, out_dir, decimate);
    }
  } catch (const std::exception& e) {
    std::cerr << "uamsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
