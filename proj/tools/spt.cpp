// spt: series-parallel transmission toolkit.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spt/commands.hpp"

namespace {

template <class T>
std::optional<T> if_given(const CLI::Option* opt, const T& value) {
  return opt->count() ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace spt;
  using namespace spt::cli;

  CLI::App app{"Series-parallel transmission toolkit: closure maps, derivative checks, "
               "inverse kinematics, impedance transfer and closed-loop simulation."};
  app.require_subcommand(1);

  std::string config_path;
  const auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Mechanism config (JSON)")->required()->check(CLI::ExistingFile);
  };

  std::string out_path;

  // map
  MapOptions map_opt;
  auto* map = app.add_subcommand("map", "Feasibility and transmission-ratio map over the serial range (CSV)");
  add_config(map);
  map->add_option("--grid", map_opt.grid, "Grid points per serial axis")->check(CLI::Range(2, 100000));
  map->add_option("--extend", map_opt.extend, "Widen the serial range on every side (rad)");
  map->add_option("--out", out_path, "Output CSV (default: stdout)");

  // check
  CheckOptions check_opt;
  double tolerance = 0.0;
  auto* check = app.add_subcommand("check", "Verify analytic derivatives against finite differences");
  add_config(check);
  check->add_option("--samples", check_opt.samples, "Random feasible configurations per check");
  check->add_option("--seed", check_opt.seed, "Random seed");
  auto* tol_opt = check->add_option("--tolerance", tolerance, "Replace every error tolerance with this value");
  check->add_option("--out", out_path, "Write the JSON report here");

  // estimate
  EstimateOptions est_opt;
  std::vector<double> warm;
  auto* est = app.add_subcommand("estimate", "Serial configuration from motor angles");
  add_config(est);
  est->add_option("--qm", est_opt.q_m, "Motor angles (rad), comma separated")->required()->delimiter(',');
  auto* warm_opt = est->add_option("--warm", warm, "Warm-start serial configuration")->delimiter(',');

  // gains
  GainsOptions gains_opt;
  std::vector<double> qds, kp, kd, qref;
  auto* gains = app.add_subcommand("gains", "Transfer a serial PD to motor space at one state");
  add_config(gains);
  gains->add_option("--qs", gains_opt.q_s, "Serial configuration (rad)")->required()->delimiter(',');
  auto* qds_opt = gains->add_option("--qds", qds, "Serial velocity (rad/s), default 0")->delimiter(',');
  auto* kp_opt = gains->add_option("--kp", kp, "Serial stiffness (N·m/rad), default from config")->delimiter(',');
  auto* kd_opt = gains->add_option("--kd", kd, "Serial damping (N·m·s/rad), default from config")->delimiter(',');
  auto* qref_opt = gains->add_option("--qref", qref, "Serial reference (rad), default --qs")->delimiter(',');

  // simulate
  SimulateOptions sim_opt;
  std::string scenario, waveform;
  double duration = 0.0;
  auto* sim = app.add_subcommand("simulate", "Closed-loop multi-rate simulation");
  add_config(sim);
  auto* scen_opt = sim->add_option("--scenario", scenario, "serial_pd | transferred_gains | feedforward_only");
  auto* wave_opt = sim->add_option("--waveform", waveform, "constant | sine | chirp | step (overrides config)");
  auto* dur_opt = sim->add_option("--duration", duration, "Simulated time (s), overrides config");
  sim->add_option("--out", out_path, "Write <out>.csv (trace) and <out>.json (summary)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    const AnyConfig cfg = load_config(config_path);
    if (map->parsed()) {
      if (out_path.empty()) return cmd_map(cfg, map_opt, std::cout);
      auto f = open_output(out_path);
      return cmd_map(cfg, map_opt, f);
    }
    if (check->parsed()) {
      check_opt.tolerance = if_given(tol_opt, tolerance);
      std::unique_ptr<std::ofstream> f;
      if (!out_path.empty()) f = std::make_unique<std::ofstream>(open_output(out_path));
      return cmd_check(cfg, check_opt, std::cout, f.get());
    }
    if (est->parsed()) {
      est_opt.warm = if_given(warm_opt, warm);
      return cmd_estimate(cfg, est_opt, std::cout);
    }
    if (gains->parsed()) {
      gains_opt.qd_s = if_given(qds_opt, qds);
      gains_opt.kp = if_given(kp_opt, kp);
      gains_opt.kd = if_given(kd_opt, kd);
      gains_opt.q_ref = if_given(qref_opt, qref);
      return cmd_gains(cfg, gains_opt, std::cout);
    }
    if (sim->parsed()) {
      sim_opt.scenario = if_given(scen_opt, scenario);
      sim_opt.waveform = if_given(wave_opt, waveform);
      sim_opt.duration = if_given(dur_opt, duration);
      if (!out_path.empty()) sim_opt.out_prefix = out_path;
      return cmd_simulate(cfg, sim_opt, std::cout);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const TransmissionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
