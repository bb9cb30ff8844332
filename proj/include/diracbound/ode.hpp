// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file ode.hpp
/// Piecewise adaptive integration of a 2-component linear system in x with
/// Dormand-Prince 5(4) dense output. Integration restarts at breakpoints,
/// where the coefficients may jump.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "diracbound/errors.hpp"

namespace diracbound {

using State2 = std::array<double, 2>;

struct OdeTolerances {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
};

namespace detail {

/// Integrate y' = rhs(x, y) from x_from to x_to (either direction). obs(x, y)
/// is called at x_from, at each point of `samples` (ordered along the
/// direction of integration and inside the range) and at x_to.
template <class Rhs, class Obs>
State2 propagate(Rhs&& rhs, State2 y, double x_from, double x_to, std::span<const double> breakpoints,
                 std::span<const double> samples, Obs&& obs, const OdeTolerances& tol) {
  namespace odeint = boost::numeric::odeint;
  const double dir = x_to >= x_from ? 1.0 : -1.0;
  auto ahead = [dir](double a, double b) { return dir * (b - a) > 0.0; };  // b strictly beyond a

  std::vector<double> stops;
  for (double b : breakpoints)
    if (ahead(x_from, b) && ahead(b, x_to)) stops.push_back(b);
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return dir * a < dir * b; });
  stops.push_back(x_to);

  auto system = [&rhs](const State2& s, State2& ds, double x) {
    ds = rhs(x, s);
    if (!std::isfinite(ds[0]) || !std::isfinite(ds[1]))
      throw IntegrationError("ODE right-hand side is not finite at x = " + std::to_string(x), x);
  };

  std::size_t next_sample = 0;
  double seg_start = x_from;
  obs(x_from, y);
  double last_x = x_from;
  try {
    for (double seg_end : stops) {
      std::vector<double> times{seg_start};
      bool report_end = seg_end == x_to;
      while (next_sample < samples.size() && !ahead(seg_end, samples[next_sample])) {
        double s = samples[next_sample++];
        if (s == seg_end) report_end = true;
        else if (ahead(seg_start, s)) times.push_back(s);
      }
      times.push_back(seg_end);
      const double span = std::abs(seg_end - seg_start);
      if (span == 0.0) continue;
      auto stepper = odeint::make_dense_output(tol.abs_tol, tol.rel_tol, odeint::runge_kutta_dopri5<State2>());
      bool first = true;
      odeint::integrate_times(
          stepper, system, y, times.begin(), times.end(), dir * std::min(1e-3, 0.1 * span),
          [&](const State2& s, double x) {
            last_x = x;
            if (first) {
              first = false;
              return;
            }
            if (x != seg_end || report_end) obs(x, s);
          },
          odeint::max_step_checker(200000));
      seg_start = seg_end;
    }
  } catch (const diracbound::Error&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("ODE integration failed near x = ") + std::to_string(last_x) + ": " +
                               e.what(),
                           last_x);
  }
  if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
    throw IntegrationError("ODE solution overflowed near x = " + std::to_string(last_x), last_x);
  return y;
}

/// Count strict sign changes, ignoring exact zeros.
inline int count_sign_changes(std::span<const double> v) {
  int n = 0;
  double prev = 0.0;
  for (double x : v) {
    if (x == 0.0) continue;
    if (prev != 0.0 && (x > 0.0) != (prev > 0.0)) ++n;
    prev = x;
  }
  return n;
}

/// Trapezoidal rule on a (possibly non-uniform) grid.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace detail
}  // namespace diracbound
