#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsrd/setup.hpp"
#include "bsrd/simulation.hpp"

namespace bsrd {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_nonconvergence = 3;

struct CliOptions {
  std::string config;
  std::string out;  // overrides out_dir when nonempty
  std::vector<std::string> overrides;
  bool quiet = false;
};

/// parse -> build mesh -> equilibrium -> run -> write outputs.
/// Returns 0 on success, 2 on configuration errors, 3 on solver non-convergence.
inline int run_cli(const CliOptions& opts, std::ostream& log, std::ostream& err) {
  namespace fs = std::filesystem;
  if (opts.config.empty()) {
    err << "error: no configuration file given (--config <path>)\n";
    return exit_config_error;
  }

  RunConfig cfg;
  std::optional<Setup> setup;
  try {
    cfg = parse_config(opts.config, opts.overrides);
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    setup.emplace(build_setup(cfg));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return exit_config_error;
  }

  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << cfg.out_dir << "': " << ec.message() << '\n';
    return exit_config_error;
  }
  const fs::path out_dir(cfg.out_dir);

  const Problem& p = setup->problem;
  if (!opts.quiet)
    log << "equilibrium u* = " << format_number(p.equilibrium.u_star) << ", v* = " << format_number(p.equilibrium.v_star)
        << ", m = " << format_number(p.equilibrium.mass) << "; window l = " << format_number(p.window.l)
        << ", L = " << format_number(p.window.L) << '\n';

  std::ofstream diag(out_dir / "diagnostics.csv");
  diag << diagnostics_header << '\n';

  TimeStepper stepper(setup->problem, setup->step);
  RunOptions ro;
  ro.t_final = cfg.t_final;
  ro.record_every = std::numeric_limits<std::size_t>::max();  // rows are streamed by the observer
  std::size_t max_clamp = 0;
  const std::size_t total_steps =
      cfg.t_final > 0.0 ? static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9)) : 0;
  ro.observer = [&](std::size_t n, const State&, const DiagnosticsRecord& r) {
    max_clamp = std::max(max_clamp, r.clamp_activations);
    if (n % cfg.output_cadence == 0 || n == total_steps) write_diagnostics_row(diag, r);
  };

  const auto start = std::chrono::steady_clock::now();
  RunResult result = run(stepper, setup->initial, ro);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  diag.flush();

  if (cfg.write_final_state) {
    std::ofstream fs_state(out_dir / "final_state.csv");
    write_state_csv(fs_state, p.mesh, result.final_state);
  }
  if (cfg.write_summary) {
    nlohmann::ordered_json j;
    j["status"] = result.ok() ? "ok" : "nonconvergence";
    j["u_star"] = p.equilibrium.u_star;
    j["v_star"] = p.equilibrium.v_star;
    j["mass"] = p.equilibrium.mass;
    j["clamp_l"] = p.window.l;
    j["clamp_L"] = p.window.L;
    j["steps"] = result.steps;
    j["t_reached"] = result.final_state.t;
    j["final_sup_distance"] = sup_distance(result.final_state, p.equilibrium);
    j["final_mass"] = weighted_mass(result.final_state, p.mesh, p.kinetics);
    j["newton_iterations"] = stepper.total_newton_iterations();
    j["dt_halvings"] = stepper.halvings();
    j["max_clamp_activations"] = max_clamp;
    j["wall_time_s"] = wall;
    if (result.failure) {
      j["failure"] = {{"t", result.failure->t},
                      {"iterations", result.failure->iterations},
                      {"residual", result.failure->residual},
                      {"message", result.failure->message}};
    }
    std::ofstream(out_dir / "summary.json") << j.dump(2) << '\n';
  }

  if (!result.ok()) {
    err << "error: solver did not converge at t = " << format_number(result.failure->t) << ": "
        << result.failure->message << " (last good state written)\n";
    return exit_nonconvergence;
  }
  if (!opts.quiet)
    log << "completed " << result.steps << " steps to t = " << format_number(result.final_state.t)
        << ", sup distance to equilibrium " << format_number(sup_distance(result.final_state, p.equilibrium))
        << '\n';
  return exit_ok;
}

}  // namespace bsrd
