// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file nr_solver.hpp
/// Ground state of -psi'' / (2m) + lambda V psi = E psi by parity shooting
/// (psi'(0) = 0) for smooth even V. Mass convention: kinetic term 1/(2m).

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "diracbound/dirac_solver.hpp"
#include "diracbound/errors.hpp"
#include "diracbound/ode.hpp"
#include "diracbound/potentials.hpp"

namespace diracbound {

struct NrSolution {
  double binding = 0.0;  ///< B = -E > 0
  double energy = 0.0;
  std::vector<double> grid;
  std::vector<double> psi;
  double residual = 0.0;
  int nodes = 0;
};

namespace detail {

struct SchrodingerProblem {
  const PotentialSpec& spec;
  double m;
  double lambda;
  OdeTolerances tol;

  State2 rhs(double x, const State2& y, double e) const {
    return {y[1], 2.0 * m * (lambda * spec.v(x) - e) * y[0]};
  }

  double kappa(double e) const { return std::sqrt(-2.0 * m * e); }

  double matching(double e) const {
    const double r = spec.support_radius();
    const double k = kappa(e);
    const double n = std::hypot(1.0, k);
    auto f = [this, e](double x, const State2& y) { return rhs(x, y, e); };
    State2 y = propagate(f, {1.0 / n, -k / n}, r, 0.0, spec.breakpoints(), {}, [](double, const State2&) {}, tol);
    return y[1] / std::hypot(y[0], y[1]);
  }
};

inline double sampled_min(const PotentialSpec& spec, Component c) {
  const double r = spec.support_radius();
  double lo = 0.0;
  constexpr int n = 4001;
  for (int i = 0; i < n; ++i) lo = std::min(lo, spec.eval(c, -r + 2.0 * r * i / (n - 1)));
  return lo;
}

}  // namespace detail

inline NrSolution solve_schrodinger_ground(const PotentialSpec& spec, double m, double lambda,
                                           const SolverConfig& cfg = {}) {
  if (!(m > 0.0)) throw InvalidArgument("solve_schrodinger_ground: m must be > 0");
  if (!(lambda > 0.0)) throw InvalidArgument("solve_schrodinger_ground: lambda must be > 0");
  if (spec.has_atoms()) throw InvalidArgument("solve_schrodinger_ground: point atoms are not supported");
  if (!spec.is_even()) throw InvalidArgument("solve_schrodinger_ground: parity shooting requires an even V");
  cfg.validate(spec);

  detail::SchrodingerProblem p{spec, m, lambda, {cfg.abs_tol, cfg.rel_tol}};
  const double depth = lambda * detail::sampled_min(spec, Component::V);
  if (!(depth < 0.0)) throw NoBoundState("no bound state: lambda V has no negative part");

  const double lo = depth * (1.0 - cfg.energy_margin);
  const double hi = -cfg.energy_margin * std::abs(depth) * 1e-3;
  auto roots = detail::bracket_and_bisect([&](double e) { return p.matching(e); }, lo, hi, cfg.scan_points,
                                          cfg.bisection_tol * std::abs(depth));
  if (roots.empty()) throw NoBoundState("no non-relativistic bound state detected for lambda = " + std::to_string(lambda));

  std::optional<NrSolution> best;
  for (double e : roots) {
    NrSolution s;
    s.energy = e;
    s.binding = -e;
    const double k = p.kappa(e);
    const double r = spec.support_radius();
    const double length = r + std::max(10.0, 8.0 / k);
    const auto half = detail::uniform_half_grid(length, cfg.grid_step);
    const std::size_t n = half.size();
    std::vector<double> samples(half.rbegin(), half.rend());
    std::vector<double> psi(n), dpsi(n);
    std::size_t idx = n;
    const double start = std::max(std::exp(-k * (length - r)), 1e-280);
    auto f = [&](double x, const State2& y) { return p.rhs(x, y, e); };
    detail::propagate(f, {start, -k * start}, length, 0.0, spec.breakpoints(), samples,
                      [&](double, const State2& y) {
                        --idx;
                        psi[idx] = y[0];
                        dpsi[idx] = y[1];
                      },
                      p.tol);
    s.residual = std::abs(dpsi[0]) / std::hypot(psi[0], dpsi[0]);
    // Even continuation onto the full line.
    s.grid.resize(2 * n - 1);
    s.psi.resize(2 * n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      s.grid[n - 1 - j] = -half[j];
      s.grid[n - 1 + j] = half[j];
      s.psi[n - 1 - j] = s.psi[n - 1 + j] = psi[j];
    }
    std::vector<double> dens(s.psi.size());
    for (std::size_t i = 0; i < dens.size(); ++i) dens[i] = s.psi[i] * s.psi[i];
    const double c = (psi[0] < 0.0 ? -1.0 : 1.0) / std::sqrt(detail::trapezoid(s.grid, dens));
    for (double& v : s.psi) v *= c;
    s.nodes = detail::count_sign_changes(s.psi);
    if (!best || s.nodes < best->nodes || (s.nodes == best->nodes && s.energy < best->energy)) best = std::move(s);
  }
  return std::move(*best);
}

}  // namespace diracbound
