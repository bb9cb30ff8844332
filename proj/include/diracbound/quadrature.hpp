// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file quadrature.hpp
/// Globally adaptive Gauss-Kronrod (G10/K21) integration with an absolute
/// tolerance and caller-supplied breakpoints.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace diracbound {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;           ///< stop when error <= max(abs_tol, rel_tol * |I|)
  std::size_t max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
  using gauss = boost::math::quadrature::gauss<double, 10>;
  const auto& xk = kronrod::abscissa();
  const auto& wk = kronrod::weights();
  const auto& wg = gauss::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  // Gauss order 10 is even: Gauss nodes sit at odd Kronrod indices.
  double fc = f(c);
  double k = fc * wk[0];
  double g = 0.0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    double s = f(c + h * xk[i]) + f(c - h * xk[i]);
    k += s * wk[i];
    if (i & 1) g += s * wg[i / 2];
  }
  k *= h;
  g *= h;
  double err = std::max(std::abs(k - g), 50.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
  return {a, b, k, err};
}

}  // namespace detail

/// Integrate f over [a, b]. Interior breakpoints split the initial partition
/// so kinks and jumps never fall inside a panel.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                           const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel> panels;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto p = detail::gk21(f, cuts[i], cuts[i + 1]);
    out.evaluations += 21;
    total += p.value;
    total_err += p.error;
    panels.push(p);
  }

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (total_err > target() && panels.size() < opt.max_intervals) {
    auto worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
    panels.pop();
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_err += panels.top().error;
    panels.pop();
  }
  out.value = sign * total;
  out.error = total_err;
  out.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return out;
}

}  // namespace diracbound
