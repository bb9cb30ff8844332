// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file dirac_solver.hpp
/// Shooting solver for the ground state of the 1D Dirac problem at q = 0.
///
/// With psi2 = -i chi the component equations become the real, regular
/// first-order system
///
///   psi1' = (E + m + lambda U) chi,
///   chi'  = (m - E + lambda V) psi1,
///
/// which is integrated inward from the decaying asymptotic solution
/// psi1 ~ exp(-Gamma |x|), Gamma = sqrt(m^2 - E^2). For even potentials the
/// ground state has psi1 even and chi odd, so E is a root of chi(0; E).
/// Non-even potentials use the two-sided match determinant instead.
///
/// The decoupled second-order equation for psi1 has a coefficient
/// singularity where E + m + lambda U(x) = 0. In the first-order form that
/// point is a regular zero of psi1'; it is reported as a diagnostic.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "diracbound/errors.hpp"
#include "diracbound/ode.hpp"
#include "diracbound/parallel.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/resummation.hpp"

namespace diracbound {

struct FitWindow {
  double x_min = 5.0;
  double x_max = 50.0;
};

enum class MatchMode { automatic, parity, two_sided };

struct SolverConfig {
  double half_length = 0.0;       ///< L; 0 selects R + max(10, 8 / Gamma), at least the fit window
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int scan_points = 200;
  double energy_margin = 1e-6;    ///< scan E over (-m, m) shrunk by margin * m at both ends
  double bisection_tol = 1e-12;   ///< relative to m
  double grid_step = 0.005;
  FitWindow fit_window;
  MatchMode mode = MatchMode::automatic;

  void validate(const PotentialSpec& spec) const {
    if (half_length != 0.0 && !(half_length > spec.support_radius()))
      throw InvalidArgument("solver: half_length must exceed the support radius");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("solver: tolerances must be > 0");
    if (scan_points < 2) throw InvalidArgument("solver: scan_points must be >= 2");
    if (!(energy_margin > 0.0 && energy_margin < 0.5)) throw InvalidArgument("solver: energy_margin out of range");
    if (!(bisection_tol > 0.0)) throw InvalidArgument("solver: bisection_tol must be > 0");
    if (!(grid_step > 0.0)) throw InvalidArgument("solver: grid_step must be > 0");
    if (!(fit_window.x_max > fit_window.x_min)) throw InvalidArgument("solver: empty fit window");
  }
};

struct DecayFit {
  double amplitude = 0.0;
  double gamma = 0.0;
};

/// Least-squares line through log psi1 on [x_min, x_max]; psi1 ~ amplitude * exp(-gamma x).
inline DecayFit fit_decay(std::span<const double> x, std::span<const double> psi1, FitWindow window) {
  if (x.size() != psi1.size()) throw InvalidArgument("fit_decay: size mismatch");
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < window.x_min || x[i] > window.x_max) continue;
    if (!(psi1[i] > 1e-300))
      throw InvalidArgument("fit_decay: non-positive sample at x = " + std::to_string(x[i]) +
                            " (window too wide or precision floor reached)");
    const double y = std::log(psi1[i]);
    n += 1;
    sx += x[i];
    sy += y;
    sxx += x[i] * x[i];
    sxy += x[i] * y;
  }
  if (n < 2) throw InvalidArgument("fit_decay: fewer than two samples in the fit window");
  const double mx = sx / n, my = sy / n;
  const double varx = sxx / n - mx * mx;
  if (!(varx > 0.0)) throw InvalidArgument("fit_decay: degenerate fit window");
  const double slope = (sxy / n - mx * my) / varx;
  const double intercept = my - slope * mx;
  return {std::exp(intercept), -slope};
}

struct BoundStateSolution {
  double m = 0.0;
  double lambda = 0.0;
  double energy = 0.0;
  std::vector<double> grid;
  std::vector<double> psi1;
  std::vector<double> psi2;  ///< realified lower component chi, psi2 = -i chi
  std::vector<double> rho;
  double gamma_fit = 0.0;
  double amplitude_fit = 0.0;
  FitWindow fit_window;
  double residual = 0.0;
  double half_length = 0.0;
  int nodes = 0;
  std::vector<double> singular_points;  ///< zeros of E + m + lambda U(x)
  double singular_slope = 0.0;          ///< max |psi1'| there over max |psi1'| on the grid

  /// Gamma = sqrt(m^2 - E^2).
  double decay_constant() const { return std::sqrt((m - energy) * (m + energy)); }
};

namespace detail {

struct DiracProblem {
  const PotentialSpec& spec;
  double m;
  double lambda;
  OdeTolerances tol;

  State2 rhs(double x, const State2& y, double e) const {
    return {(e + m + lambda * spec.u(x)) * y[1], (m - e + lambda * spec.v(x)) * y[0]};
  }

  double gamma(double e) const { return std::sqrt((m - e) * (m + e)); }

  /// Decaying data at x0 (sign of x0 selects the side), unit length.
  State2 tail_state(double x0, double e) const {
    const double g = gamma(e);
    const double c = (x0 > 0.0 ? -g : g) / (e + m);
    const double n = std::hypot(1.0, c);
    return {1.0 / n, c / n};
  }

  State2 shoot(double from, double e) const {
    auto r = [this, e](double x, const State2& y) { return rhs(x, y, e); };
    return propagate(r, tail_state(from, e), from, 0.0, spec.breakpoints(), {}, [](double, const State2&) {}, tol);
  }

  MatchMode mode(MatchMode requested) const {
    if (requested != MatchMode::automatic) return requested;
    return spec.is_even() ? MatchMode::parity : MatchMode::two_sided;
  }

  double matching(double e, MatchMode md) const {
    const double r = spec.support_radius();
    const State2 right = shoot(r, e);
    if (md == MatchMode::parity) return right[1] / std::hypot(right[0], right[1]);
    const State2 left = shoot(-r, e);
    return (right[0] * left[1] - left[0] * right[1]) /
           (std::hypot(right[0], right[1]) * std::hypot(left[0], left[1]));
  }
};

/// Sign changes of f on a uniform scan of [lo, hi], refined by bisection.
template <class F>
std::vector<double> bracket_and_bisect(F&& f, double lo, double hi, int points, double tol) {
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * i / (points - 1);
    fs[i] = f(xs[i]);
  }
  std::vector<double> roots;
  for (int i = 0; i + 1 < points; ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if ((fs[i] > 0.0) == (fs[i + 1] > 0.0) || fs[i + 1] == 0.0) continue;
    auto [a, b] = boost::math::tools::bisect(f, xs[i], xs[i + 1],
                                             [tol](double a, double b) { return std::abs(b - a) <= tol; });
    roots.push_back(0.5 * (a + b));
  }
  if (fs[points - 1] == 0.0) roots.push_back(xs[points - 1]);
  return roots;
}

inline std::vector<double> uniform_half_grid(double length, double step) {
  const auto n = static_cast<std::size_t>(std::ceil(length / step));
  std::vector<double> g(n + 1);
  for (std::size_t j = 0; j < n; ++j) g[j] = length * static_cast<double>(j) / static_cast<double>(n);
  g[n] = length;
  return g;
}

}  // namespace detail

/// Matching function whose zeros in (-m, m) are bound-state energies.
inline double dirac_matching_function(const PotentialSpec& spec, double m, double lambda, double energy,
                                      const SolverConfig& cfg = {}) {
  detail::DiracProblem p{spec, m, lambda, {cfg.abs_tol, cfg.rel_tol}};
  return p.matching(energy, p.mode(cfg.mode));
}

/// All sign changes of the matching function found by the energy scan.
inline std::vector<double> dirac_energy_roots(const PotentialSpec& spec, double m, double lambda,
                                              const SolverConfig& cfg = {}) {
  detail::DiracProblem p{spec, m, lambda, {cfg.abs_tol, cfg.rel_tol}};
  const MatchMode md = p.mode(cfg.mode);
  const double edge = m * (1.0 - cfg.energy_margin);
  return detail::bracket_and_bisect([&](double e) { return p.matching(e, md); }, -edge, edge, cfg.scan_points,
                                    cfg.bisection_tol * m);
}

/// Normalized spinor at a converged energy; psi1(0) > 0 and the integral of
/// rho over the grid (trapezoidal) is one.
inline BoundStateSolution reconstruct_spinor(const PotentialSpec& spec, double m, double lambda, double energy,
                                             const SolverConfig& cfg = {}) {
  detail::DiracProblem p{spec, m, lambda, {cfg.abs_tol, cfg.rel_tol}};
  const double g = p.gamma(energy);
  const double r = spec.support_radius();
  double length = cfg.half_length;
  if (length == 0.0) {
    length = r + std::max(10.0, g > 0.0 ? 8.0 / g : 1e6);
    length = std::max(length, cfg.fit_window.x_max);
  }

  const std::vector<double> half = detail::uniform_half_grid(length, cfg.grid_step);
  const std::size_t n = half.size();
  auto rhs = [&](double x, const State2& y) { return p.rhs(x, y, energy); };

  // Start small enough that the inward growth exp(Gamma (L - r)) stays O(1).
  const double start = std::max(std::exp(-g * (length - r)), 1e-280);
  auto scaled_tail = [&](double x0) {
    State2 s = p.tail_state(x0, energy);
    const double k = start / s[0];
    return State2{s[0] * k, s[1] * k};
  };

  // Right half: x_j for j = n-1 .. 0.
  std::vector<double> rp(n), rc(n), lp(n), lc(n);
  std::vector<double> right_samples(half.rbegin(), half.rend());
  {
    std::size_t idx = n;
    detail::propagate(rhs, scaled_tail(length), length, 0.0, spec.breakpoints(), right_samples,
                      [&](double, const State2& y) {
                        --idx;
                        rp[idx] = y[0];
                        rc[idx] = y[1];
                      },
                      p.tol);
  }
  // Left half, independently: -x_j for j = n-1 .. 0.
  {
    std::vector<double> left_samples(n);
    for (std::size_t j = 0; j < n; ++j) left_samples[j] = -half[n - 1 - j];
    std::size_t idx = n;
    detail::propagate(rhs, scaled_tail(-length), -length, 0.0, spec.breakpoints(), left_samples,
                      [&](double, const State2& y) {
                        --idx;
                        lp[idx] = y[0];
                        lc[idx] = y[1];
                      },
                      p.tol);
  }

  // Scale the left branch onto the right one at x = 0 (least squares).
  const double k = (rp[0] * lp[0] + rc[0] * lc[0]) / (lp[0] * lp[0] + lc[0] * lc[0]);

  BoundStateSolution sol;
  sol.m = m;
  sol.lambda = lambda;
  sol.energy = energy;
  sol.half_length = length;
  sol.fit_window = cfg.fit_window;
  const double rn = std::hypot(rp[0], rc[0]);
  const double ln = std::hypot(lp[0], lc[0]);
  sol.residual = p.mode(cfg.mode) == MatchMode::parity ? std::abs(rc[0]) / rn
                                                       : std::abs(rp[0] * lc[0] - lp[0] * rc[0]) / (rn * ln);

  const std::size_t total = 2 * n - 1;
  sol.grid.resize(total);
  sol.psi1.resize(total);
  sol.psi2.resize(total);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t left = n - 1 - j;   // x = -half[j]
    const std::size_t right = n - 1 + j;  // x = +half[j]
    sol.grid[left] = -half[j];
    sol.psi1[left] = k * lp[j];
    sol.psi2[left] = k * lc[j];
    sol.grid[right] = half[j];
    sol.psi1[right] = rp[j];
    sol.psi2[right] = rc[j];
  }
  // x = 0 takes the average of both branches.
  sol.psi1[n - 1] = 0.5 * (rp[0] + k * lp[0]);
  sol.psi2[n - 1] = 0.5 * (rc[0] + k * lc[0]);

  sol.rho.resize(total);
  for (std::size_t i = 0; i < total; ++i) sol.rho[i] = sol.psi1[i] * sol.psi1[i] + sol.psi2[i] * sol.psi2[i];
  const double norm = detail::trapezoid(sol.grid, sol.rho);
  const double c = (sol.psi1[n - 1] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm);
  for (std::size_t i = 0; i < total; ++i) {
    sol.psi1[i] *= c;
    sol.psi2[i] *= c;
    sol.rho[i] /= norm;
  }
  sol.nodes = detail::count_sign_changes(sol.psi1);

  // psi1' = 0 where E + m + lambda U changes sign.
  auto coeff = [&](double x) { return energy + m + lambda * spec.u(x); };
  std::vector<double> dpsi(total, 0.0);
  double max_slope = 0.0;
  for (std::size_t i = 1; i + 1 < total; ++i) {
    dpsi[i] = (sol.psi1[i + 1] - sol.psi1[i - 1]) / (sol.grid[i + 1] - sol.grid[i - 1]);
    max_slope = std::max(max_slope, std::abs(dpsi[i]));
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 2 < total; ++i) {
    const double a = coeff(sol.grid[i]), b = coeff(sol.grid[i + 1]);
    if (a == 0.0 || (a > 0.0) == (b > 0.0)) continue;
    auto [lo, hi] = boost::math::tools::bisect(coeff, sol.grid[i], sol.grid[i + 1],
                                               [](double u, double v) { return std::abs(v - u) < 1e-13; });
    const double xs = 0.5 * (lo + hi);
    sol.singular_points.push_back(xs);
    const double t = (xs - sol.grid[i]) / (sol.grid[i + 1] - sol.grid[i]);
    worst = std::max(worst, std::abs((1.0 - t) * dpsi[i] + t * dpsi[i + 1]));
  }
  sol.singular_slope = max_slope > 0.0 ? worst / max_slope : 0.0;

  std::vector<double> xs(sol.grid.begin() + (n - 1), sol.grid.end());
  std::vector<double> ys(sol.psi1.begin() + (n - 1), sol.psi1.end());
  try {
    auto fit = fit_decay(xs, ys, cfg.fit_window);
    sol.gamma_fit = fit.gamma;
    sol.amplitude_fit = fit.amplitude;
  } catch (const InvalidArgument&) {
    sol.gamma_fit = std::numeric_limits<double>::quiet_NaN();
    sol.amplitude_fit = std::numeric_limits<double>::quiet_NaN();
  }
  return sol;
}

/// Ground state: among the roots of the matching function, the one whose
/// psi1 has the fewest nodes (ties go to the larger energy).
inline BoundStateSolution solve_dirac_ground(const PotentialSpec& spec, double m, double lambda,
                                             const SolverConfig& cfg = {}) {
  if (!(m > 0.0)) throw InvalidArgument("solve_dirac_ground: m must be > 0");
  if (!(lambda >= 0.0)) throw InvalidArgument("solve_dirac_ground: lambda must be >= 0");
  if (spec.has_atoms()) throw InvalidArgument("solve_dirac_ground: point atoms are not supported by the shooting solver");
  cfg.validate(spec);
  if (!spec.is_even() && cfg.mode == MatchMode::parity)
    throw InvalidArgument("solve_dirac_ground: parity matching requires even potentials");

  const auto roots = dirac_energy_roots(spec, m, lambda, cfg);
  if (roots.empty())
    throw NoBoundState("no bound state detected in (-m, m) for lambda = " + std::to_string(lambda));

  std::optional<BoundStateSolution> best;
  for (double e : roots) {
    auto s = reconstruct_spinor(spec, m, lambda, e, cfg);
    if (!best || s.nodes < best->nodes || (s.nodes == best->nodes && s.energy > best->energy)) best = std::move(s);
  }
  return std::move(*best);
}

struct GammaRow {
  double lambda = 0.0;
  std::optional<double> energy;
  std::optional<double> gamma_fit;
  std::optional<double> gamma_model;
  std::string error;
};

/// Fitted decay constants over a lambda list, next to the Pade-model value.
/// Per-row failures are recorded and the scan continues.
inline std::vector<GammaRow> scan_gamma(const PotentialSpec& spec, double m, std::span<const double> lambdas,
                                        const SolverConfig& cfg = {}, const PadeModel* model = nullptr,
                                        unsigned jobs = 1) {
  return parallel_map(lambdas.size(), jobs, [&](std::size_t i) {
    GammaRow row;
    row.lambda = lambdas[i];
    if (model) row.gamma_model = decay_constant_model(*model, m, row.lambda);
    try {
      auto s = solve_dirac_ground(spec, m, row.lambda, cfg);
      row.energy = s.energy;
      if (std::isfinite(s.gamma_fit)) row.gamma_fit = s.gamma_fit;
      else row.error = "fit window outside usable tail";
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });
}

}  // namespace diracbound
