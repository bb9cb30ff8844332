// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file potentials.hpp
/// Short-range potential pairs (V, U) entering the 1D Dirac problem
///
///   (m + lambda V - E) psi1 - i psi2' = 0,   -(E + m + lambda U) psi2 - i psi1' = 0.
///
/// A pair is a smooth profile per component plus optional point atoms
/// w * delta(x - x0). Atoms are never sampled; consumers handle them
/// analytically.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diracbound/errors.hpp"

namespace diracbound {

enum class Component { V, U };

inline const char* to_string(Component c) { return c == Component::V ? "V" : "U"; }

/// Point mass contributing weight * delta(x - position).
struct PointAtom {
  double position = 0.0;
  double weight = 0.0;
};

/// Tail threshold, relative to max(|V|, |U|), that defines the support radius.
inline constexpr double kSupportEpsilon = 1e-16;

/// Mass m, coupling lambda and transverse momentum q in units hbar = c = 1.
struct ModelParams {
  double m = 1.0;
  double lambda = 0.0;
  double q = 0.0;

  /// k(q) = sqrt(q^2 + m^2).
  double k() const { return std::hypot(q, m); }

  void validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("mass m must be positive and finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("coupling lambda must be >= 0");
    if (!std::isfinite(q)) throw InvalidArgument("transverse momentum q must be finite");
  }
};

/// Smallest R with max(|f(+-R)|) below threshold, found by bisection on the
/// tail. Assumes the profiles decay monotonically beyond their bulk.
inline double tail_radius(const std::function<double(double)>& f, double threshold) {
  auto above = [&](double r) { return std::max(std::abs(f(r)), std::abs(f(-r))) >= threshold; };
  double hi = 1.0;
  while (above(hi)) {
    hi *= 2.0;
    if (hi > 1e8) throw InvalidArgument("potential does not decay: no finite support radius");
  }
  double lo = 0.0;
  if (!above(lo)) return hi;  // profile already negligible everywhere
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }
  return hi;
}

class PotentialSpec {
 public:
  using Profile = std::function<double(double)>;

  struct Part {
    Profile smooth;                ///< may be empty, meaning identically zero
    std::vector<PointAtom> atoms;
  };

  /// \param breakpoints  positions where a smooth profile is non-smooth
  ///                     (quadrature and the ODE integrator restart there)
  PotentialSpec(std::string family, Part v, Part u, double support_radius,
                std::vector<double> breakpoints = {}, bool even = true,
                std::map<std::string, double> parameters = {})
      : family_(std::move(family)),
        v_(std::move(v)),
        u_(std::move(u)),
        support_radius_(support_radius),
        breakpoints_(std::move(breakpoints)),
        even_(even),
        parameters_(std::move(parameters)) {
    if (!(support_radius_ > 0.0) || !std::isfinite(support_radius_))
      throw InvalidArgument("support_radius must be positive and finite");
    std::sort(breakpoints_.begin(), breakpoints_.end());
    if (!has_well())
      throw InvalidArgument("potential V must be negative somewhere (no well)");
  }

  const std::string& family() const { return family_; }
  const std::map<std::string, double>& parameters() const { return parameters_; }
  double support_radius() const { return support_radius_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  bool is_even() const { return even_; }

  /// Smooth part only; atoms are never included.
  double eval(Component which, double x) const {
    const Profile& p = part(which).smooth;
    return p ? p(x) : 0.0;
  }
  double v(double x) const { return eval(Component::V, x); }
  double u(double x) const { return eval(Component::U, x); }

  bool has_smooth(Component which) const { return static_cast<bool>(part(which).smooth); }
  std::span<const PointAtom> atoms(Component which) const { return part(which).atoms; }
  bool has_atoms() const { return !v_.atoms.empty() || !u_.atoms.empty(); }

  /// V -> cv V, U -> cu U (atoms included). Support and breakpoints are kept.
  PotentialSpec scaled(double cv, double cu) const {
    auto scale_part = [](const Part& p, double c) {
      Part out;
      if (p.smooth) out.smooth = [f = p.smooth, c](double x) { return c * f(x); };
      for (auto a : p.atoms) out.atoms.push_back({a.position, c * a.weight});
      return out;
    };
    auto params = parameters_;
    params["scale_v"] = cv;
    params["scale_u"] = cu;
    return PotentialSpec(family_, scale_part(v_, cv), scale_part(u_, cu), support_radius_,
                         breakpoints_, even_, std::move(params));
  }

 private:
  const Part& part(Component c) const { return c == Component::V ? v_ : u_; }

  bool has_well() const {
    for (auto a : v_.atoms)
      if (a.weight < 0.0) return true;
    if (!v_.smooth) return false;
    constexpr int n = 4001;
    for (int i = 0; i < n; ++i) {
      double x = -support_radius_ + 2.0 * support_radius_ * i / (n - 1);
      if (v_.smooth(x) < 0.0) return true;
    }
    return false;
  }

  std::string family_;
  Part v_, u_;
  double support_radius_;
  std::vector<double> breakpoints_;
  bool even_;
  std::map<std::string, double> parameters_;
};

/// V = -(1+gamma) exp(-alpha x^2), U = -(1-gamma) exp(-alpha x^2).
inline PotentialSpec gaussian_pair(double alpha, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("gaussian_pair: alpha must be > 0");
  if (!(std::abs(gamma) <= 1.0))
    throw InvalidArgument("gaussian_pair: |gamma| must be <= 1 (rescale lambda for |gamma| > 1)");
  if (gamma == -1.0) throw InvalidArgument("gaussian_pair: gamma = -1 leaves V identically zero (no well)");
  const double cv = 1.0 + gamma;
  const double cu = 1.0 - gamma;
  PotentialSpec::Part v{[alpha, cv](double x) { return -cv * std::exp(-alpha * x * x); }, {}};
  PotentialSpec::Part u{[alpha, cu](double x) { return -cu * std::exp(-alpha * x * x); }, {}};
  auto both = [&](double x) { return std::max(std::abs(v.smooth(x)), std::abs(u.smooth(x))); };
  const double radius = tail_radius(both, kSupportEpsilon);
  return PotentialSpec("gaussian", std::move(v), std::move(u), radius, {}, true,
                       {{"alpha", alpha}, {"gamma", gamma}});
}

/// V = -(1+gamma) delta(x), U = -(1-gamma) delta(x). Only gamma = 1 is
/// admitted: otherwise psi1 is discontinuous at the origin and the
/// point-interaction problem is ill-defined.
inline PotentialSpec delta_pair(double gamma) {
  if (gamma != 1.0)
    throw InvalidArgument(
        "delta_pair: only gamma = 1 is supported; for gamma != 1 the U atom makes psi1 "
        "discontinuous at x = 0");
  PotentialSpec::Part v{{}, {PointAtom{0.0, -(1.0 + gamma)}}};
  PotentialSpec::Part u{{}, {}};
  return PotentialSpec("delta", std::move(v), std::move(u), 1.0, {}, true, {{"gamma", gamma}});
}

/// V = U = -depth on |x| <= half_width. U = V is the gamma = 0 analog of the
/// Gaussian family.
inline PotentialSpec square_well(double depth, double half_width) {
  if (!(depth > 0.0) || !std::isfinite(depth)) throw InvalidArgument("square_well: depth must be > 0");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("square_well: half_width must be > 0");
  auto box = [depth, half_width](double x) { return std::abs(x) <= half_width ? -depth : 0.0; };
  return PotentialSpec("square", {box, {}}, {box, {}}, half_width, {-half_width, half_width}, true,
                       {{"depth", depth}, {"half_width", half_width}});
}

}  // namespace diracbound
