// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Settings come from an optional --config file
// (nested key-value JSON) and are overridden by flags.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracbound/report.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> family;
  std::optional<double> alpha, gamma, depth, half_width;
  std::optional<double> m, q;
  std::optional<std::string> lambda;
  std::optional<std::vector<double>> fk_q;
  std::optional<std::string> method, kind;
  std::optional<std::vector<double>> region_alphas;
  std::optional<int> gamma_steps, m_steps;
  std::optional<double> m_max;
  std::optional<double> rel_tol, abs_tol, grid_step, half_length;
  std::optional<int> scan_points;
  std::optional<std::string> window;
  std::optional<std::string> format, output, wavefunction;
  std::optional<unsigned> jobs;
};

template <class T>
void overlay(const std::optional<T>& src, T& dst) {
  if (src) dst = *src;
}

diracbound::RunConfig resolve(const Flags& f, const std::string& command) {
  using namespace diracbound;
  RunConfig cfg;
  if (f.config) apply_config(load_config_file(*f.config), cfg);
  if (!command.empty()) cfg.command = command;
  overlay(f.family, cfg.potential.family);
  overlay(f.alpha, cfg.potential.alpha);
  overlay(f.gamma, cfg.potential.gamma);
  overlay(f.depth, cfg.potential.depth);
  overlay(f.half_width, cfg.potential.half_width);
  overlay(f.m, cfg.m);
  overlay(f.q, cfg.q);
  if (f.lambda) cfg.lambda = LambdaRange::parse(*f.lambda, "--lambda");
  overlay(f.fk_q, cfg.fk_q);
  overlay(f.method, cfg.method);
  overlay(f.kind, cfg.kind);
  overlay(f.region_alphas, cfg.region_alphas);
  overlay(f.gamma_steps, cfg.gamma_steps);
  overlay(f.m_steps, cfg.m_steps);
  overlay(f.m_max, cfg.m_max);
  overlay(f.rel_tol, cfg.solver.rel_tol);
  overlay(f.abs_tol, cfg.solver.abs_tol);
  overlay(f.grid_step, cfg.solver.grid_step);
  overlay(f.half_length, cfg.solver.half_length);
  overlay(f.scan_points, cfg.solver.scan_points);
  if (f.window) {
    auto r = LambdaRange::parse(*f.window + ":1", "--window");
    cfg.solver.fit_window = {r.start, r.stop};
  }
  overlay(f.format, cfg.format);
  overlay(f.output, cfg.output);
  overlay(f.wavefunction, cfg.wavefunction);
  overlay(f.jobs, cfg.jobs);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound states of a 1D Dirac particle in short-range wells"};
  app.set_version_flag("--version", std::string(DIRACBOUND_VERSION));
  app.require_subcommand(0, 1);
  app.fallthrough();
  Flags f;

  app.add_option("--config", f.config, "Nested key-value (JSON) configuration file; flags override it");
  app.add_option("--family", f.family, "Potential family: gaussian | square | delta");
  app.add_option("--alpha", f.alpha, "Gaussian inverse width squared");
  app.add_option("--gamma", f.gamma, "Gaussian/delta mixing parameter");
  app.add_option("--depth", f.depth, "Square-well depth");
  app.add_option("--half-width", f.half_width, "Square-well half width");
  app.add_option("--m", f.m, "Mass");
  app.add_option("--q", f.q, "Transverse momentum (pt2-2d)");
  app.add_option("--lambda", f.lambda, "Coupling: value or start:stop:step");
  app.add_option("--format", f.format, "Output format: csv | json");
  app.add_option("-o,--output", f.output, "Output file (relative paths use $DIRACBOUND_OUTPUT_DIR)");
  app.add_option("--jobs", f.jobs, "Worker threads for scans");
  app.add_option("--rel-tol", f.rel_tol, "ODE relative tolerance");
  app.add_option("--abs-tol", f.abs_tol, "ODE absolute tolerance");
  app.add_option("--grid-step", f.grid_step, "Wavefunction grid spacing");
  app.add_option("--half-length", f.half_length, "Integration half-length L (0 = automatic)");
  app.add_option("--scan-points", f.scan_points, "Energy scan points");
  app.add_option("--window", f.window, "Fit window x_min:x_max");

  auto* functionals = app.add_subcommand("functionals", "Print the potential functionals as JSON");
  functionals->add_option("--fk-q", f.fk_q, "Transverse momenta at which to tabulate F(k)")->delimiter(',');
  auto* energy = app.add_subcommand("energy", "Perturbative energy rows");
  energy->add_option("--method", f.method, "pt4 | pt2-2d");
  auto* pade = app.add_subcommand("pade", "Pade-resummed energy rows");
  pade->add_option("--kind", f.kind, "rel | nr21 | nr22");
  auto* region = app.add_subcommand("region", "Pole-free region of the Gaussian family");
  region->add_option("--alpha", f.region_alphas, "Comma-separated alphas")->delimiter(',');
  region->add_option("--gamma-steps", f.gamma_steps, "Points in gamma over [-1, 1]");
  region->add_option("--m-max", f.m_max, "Largest mass of the grid");
  region->add_option("--m-steps", f.m_steps, "Mass grid points (0: boundary curves only)");
  auto* shoot = app.add_subcommand("shoot", "Shooting solution at one coupling");
  shoot->add_option("--wavefunction", f.wavefunction, "Write (x, psi1, psi2, rho) CSV here");
  app.add_subcommand("scan", "Energy scan: shooting, Pade and non-relativistic columns");
  app.add_subcommand("fit", "Decay-constant scan: fitted versus model Gamma");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : diracbound::kExitInvalidConfig;
  }

  std::string command;
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();

  diracbound::RunConfig cfg;
  try {
    cfg = resolve(f, command);
  } catch (const diracbound::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return diracbound::kExitInvalidConfig;
  }
  if (cfg.command.empty()) {
    std::cerr << "invalid config: command: no subcommand given\n" << app.help();
    return diracbound::kExitInvalidConfig;
  }
  return diracbound::run(cfg, std::cout, std::cerr).exit_code;
}
