// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file resummation.hpp
/// Rational resummations of the weak-coupling series.
///
/// Every model is stored as E(lambda) = m + n2 lambda^2 / (d0 + d1 lambda + d2 lambda^2).
///   relativistic [2,2]:  n2 = m^2 F1^4, d0 = -2 m F1^2, d1 = 4 m^2 F1 F21,
///                        d2 = 2 (-2 dE + m^3 (eta4 - 4 F21^2))
///   non-relativistic [2,2]: the same with dE = 0
///   non-relativistic [2,1]: binding m - E = -m F1^3 l^2 / (4 m l F21 - 2 F1)

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "diracbound/errors.hpp"
#include "diracbound/functionals.hpp"
#include "diracbound/perturbation.hpp"

namespace diracbound {

enum class PadeKind { relativistic_22, nonrelativistic_22, nonrelativistic_21 };

inline const char* to_string(PadeKind k) {
  switch (k) {
    case PadeKind::relativistic_22: return "rel";
    case PadeKind::nonrelativistic_22: return "nr22";
    case PadeKind::nonrelativistic_21: return "nr21";
  }
  return "?";
}

class PadeModel {
 public:
  PadeModel(PadeKind kind, double m, double n2, std::array<double, 3> den)
      : kind_(kind), m_(m), n2_(n2), den_(den) {
    const double scale = std::abs(den_[0]) + std::abs(den_[1]) + std::abs(den_[2]);
    if (!(scale > 1e-300) || !std::isfinite(scale)) throw InvalidArgument("Pade denominator is degenerate");
    find_poles();
  }

  PadeKind kind() const { return kind_; }
  double m() const { return m_; }
  double numerator() const { return n2_; }
  const std::array<double, 3>& denominator() const { return den_; }

  double denominator_at(double lambda) const { return den_[0] + lambda * (den_[1] + lambda * den_[2]); }

  double energy(double lambda) const { return m_ + n2_ * lambda * lambda / denominator_at(lambda); }
  double binding(double lambda) const { return m_ - energy(lambda); }

  /// Limit lambda -> infinity; empty when the model grows without bound.
  std::optional<double> asymptote() const {
    if (den_[2] == 0.0) return std::nullopt;
    return m_ + n2_ / den_[2];
  }

  /// Real roots with lambda > 0, ascending.
  const std::vector<double>& poles() const { return poles_; }

  /// Taylor coefficients c0..c_order of E(lambda) at lambda = 0.
  std::vector<double> taylor(int order) const {
    // q = 1/den by series inversion, then shift by two powers for n2 lambda^2.
    std::vector<double> inv(order + 1, 0.0);
    inv[0] = 1.0 / den_[0];
    for (int n = 1; n <= order; ++n) {
      double acc = 0.0;
      for (int j = 1; j <= std::min(n, 2); ++j) acc += den_[j] * inv[n - j];
      inv[n] = -acc / den_[0];
    }
    std::vector<double> c(order + 1, 0.0);
    c[0] = m_;
    for (int n = 2; n <= order; ++n) c[n] = n2_ * inv[n - 2];
    return c;
  }

 private:
  void find_poles() {
    const auto [c, b, a] = den_;
    std::vector<double> roots;
    if (a == 0.0) {
      if (b != 0.0) roots.push_back(-c / b);
    } else {
      const double disc = b * b - 4.0 * a * c;
      if (disc >= 0.0) {
        // Cancellation-free form of the quadratic formula.
        const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (qq != 0.0) {
          roots.push_back(qq / a);
          roots.push_back(c / qq);
        } else {
          roots.push_back(0.0);
        }
      }
    }
    for (double r : roots)
      if (r > 0.0 && std::isfinite(r)) poles_.push_back(r);
    std::sort(poles_.begin(), poles_.end());
  }

  PadeKind kind_;
  double m_;
  double n2_;
  std::array<double, 3> den_;  // d0, d1, d2
  std::vector<double> poles_;
};

namespace detail {

inline PadeModel pade22(PadeKind kind, const FunctionalSet& fs, double m, double delta_e) {
  if (fs.f1 == 0.0) throw InvalidArgument("Pade approximant requires F1 != 0");
  const double f1sq = fs.f1 * fs.f1;
  const double n2 = m * m * f1sq * f1sq;
  const double d0 = -2.0 * m * f1sq;
  const double d1 = 4.0 * m * m * fs.f1 * fs.f21;
  const double d2 = 2.0 * (-2.0 * delta_e + m * m * m * (eta4(fs) - 4.0 * fs.f21 * fs.f21));
  return PadeModel(kind, m, n2, {d0, d1, d2});
}

}  // namespace detail

/// Diagonal [2,2] approximant; tends to a constant as lambda -> infinity.
inline PadeModel pade_relativistic(const FunctionalSet& fs, double m) {
  if (!(m > 0.0)) throw InvalidArgument("pade_relativistic: m must be > 0");
  return detail::pade22(PadeKind::relativistic_22, fs, m, relativistic_correction(fs, m));
}

enum class NrPadeOrder { p21, p22 };

inline PadeModel pade_nonrelativistic(const FunctionalSet& fs, double m, NrPadeOrder order) {
  if (!(m > 0.0)) throw InvalidArgument("pade_nonrelativistic: m must be > 0");
  if (order == NrPadeOrder::p22) return detail::pade22(PadeKind::nonrelativistic_22, fs, m, 0.0);
  if (fs.f1 == 0.0) throw InvalidArgument("Pade approximant requires F1 != 0");
  // m - E = -m F1^3 l^2 / (4 m F21 l - 2 F1), i.e. E = m + m F1^3 l^2 / (4 m F21 l - 2 F1).
  // With F21 = 0 this is the bare leading term.
  const double f1 = fs.f1;
  return PadeModel(PadeKind::nonrelativistic_21, m, m * f1 * f1 * f1, {-2.0 * f1, 4.0 * m * fs.f21, 0.0});
}

inline PadeModel make_pade(PadeKind kind, const FunctionalSet& fs, double m) {
  switch (kind) {
    case PadeKind::relativistic_22: return pade_relativistic(fs, m);
    case PadeKind::nonrelativistic_22: return pade_nonrelativistic(fs, m, NrPadeOrder::p22);
    case PadeKind::nonrelativistic_21: return pade_nonrelativistic(fs, m, NrPadeOrder::p21);
  }
  throw InvalidArgument("unknown Pade kind");
}

/// True iff the relativistic [2,2] denominator has no real root:
///   dE > (m^3 / 2) (eta4 - 3 F21^2).
inline bool pole_free_condition(const FunctionalSet& fs, double delta_e, double m) {
  return delta_e > 0.5 * m * m * m * (eta4(fs) - 3.0 * fs.f21 * fs.f21);
}

/// Closed form of pole_free_condition for the Gaussian pair:
///   pi alpha (gamma + 5) > 8 (-6 + 3 sqrt 3 + 2 pi) (gamma + 1) m^2.
inline bool gaussian_region(double alpha, double gamma, double m) {
  if (!(alpha > 0.0)) throw InvalidArgument("gaussian_region: alpha must be > 0");
  if (!(std::abs(gamma) <= 1.0)) throw InvalidArgument("gaussian_region: |gamma| must be <= 1");
  const double pi = std::numbers::pi;
  return pi * alpha * (gamma + 5.0) > 8.0 * (-6.0 + 3.0 * std::sqrt(3.0) + 2.0 * pi) * (gamma + 1.0) * m * m;
}

/// Largest m for which gaussian_region holds (boundary of the pole-free region).
inline double gaussian_region_boundary(double alpha, double gamma) {
  const double pi = std::numbers::pi;
  if (gamma == -1.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(pi * alpha * (gamma + 5.0) / (8.0 * (-6.0 + 3.0 * std::sqrt(3.0) + 2.0 * pi) * (gamma + 1.0)));
}

/// Gamma = sqrt(m^2 - E^2) from the model energy; empty once E leaves [-m, m].
inline std::optional<double> decay_constant_model(const PadeModel& pade, double m, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("decay_constant_model: lambda must be >= 0");
  const double e = pade.energy(lambda);
  if (!std::isfinite(e) || std::abs(e) > m) return std::nullopt;
  return std::sqrt((m - e) * (m + e));
}

}  // namespace diracbound
