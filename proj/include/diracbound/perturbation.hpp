// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file perturbation.hpp
/// Weak-coupling energy of the Dirac bound state assembled from a
/// FunctionalSet (limit of vanishing regulator).
///
/// One dimension, through lambda^4:
///   E = m - (m/2) F1^2 l^2 - m^2 F1 F21 l^3 - (m^3/2) eta4 l^4 + dE l^4,
///   eta4 = F1^2 F22 + 2 F1 F31 + F21^2,
///   kappa4 = (F1 F32 + F1^4) / 2,
///   dE = (m/2) (kappa4 - F1^4 / 4).
/// Two dimensions (transverse momentum q), through lambda^2:
///   E = k - lambda^2 F(k)^2 / (2k),  k = sqrt(q^2 + m^2).

#pragma once

#include <cmath>

#include "diracbound/errors.hpp"
#include "diracbound/functionals.hpp"

namespace diracbound {

struct EnergySeries {
  double m = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4_nr = 0.0;
  double c4_rel = 0.0;
  double delta_e = 0.0;  ///< leading relativistic correction, equals c4_rel
  double eta4 = 0.0;
  double kappa4 = 0.0;

  double c4() const { return c4_nr + c4_rel; }
};

inline double eta4(const FunctionalSet& fs) {
  return fs.f1 * fs.f1 * fs.f22 + 2.0 * fs.f1 * fs.f31 + fs.f21 * fs.f21;
}

inline double kappa4(const FunctionalSet& fs) {
  const double f1sq = fs.f1 * fs.f1;
  return 0.5 * (fs.f1 * fs.f32 + f1sq * f1sq);
}

/// dE = (m/2) (kappa4 - F1^4 / 4).
inline double relativistic_correction(const FunctionalSet& fs, double m) {
  const double f1sq = fs.f1 * fs.f1;
  return 0.5 * m * (kappa4(fs) - 0.25 * f1sq * f1sq);
}

inline EnergySeries energy_series_1d(const FunctionalSet& fs, double m) {
  if (!(m > 0.0)) throw InvalidArgument("energy_series_1d: m must be > 0");
  EnergySeries s;
  s.m = m;
  s.eta4 = eta4(fs);
  s.kappa4 = kappa4(fs);
  s.delta_e = relativistic_correction(fs, m);
  s.c2 = -0.5 * m * fs.f1 * fs.f1;
  s.c3 = -m * m * fs.f1 * fs.f21;
  s.c4_nr = -0.5 * m * m * m * s.eta4;
  s.c4_rel = s.delta_e;
  return s;
}

inline double eval_pt4(const EnergySeries& s, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("eval_pt4: lambda must be >= 0");
  return s.m + lambda * lambda * (s.c2 + lambda * (s.c3 + lambda * s.c4()));
}

/// Non-relativistic part only (dE dropped), measured from m.
inline double eval_nr_shift(const EnergySeries& s, double lambda) {
  return lambda * lambda * (s.c2 + lambda * (s.c3 + lambda * s.c4_nr));
}

inline double energy_2d_pt2(const FunctionalSet& fs, double m, double q, double lambda) {
  if (!(m > 0.0)) throw InvalidArgument("energy_2d_pt2: m must be > 0");
  if (!(lambda >= 0.0)) throw InvalidArgument("energy_2d_pt2: lambda must be >= 0");
  const double k = std::hypot(q, m);
  const double fk = fs.fk(m, k);
  return k - lambda * lambda * fk * fk / (2.0 * k);
}

inline double energy_2d_pt2(const PotentialSpec& spec, double m, double q, double lambda,
                            const FunctionalOptions& opt = {}) {
  FunctionalSet fs;
  fs.f1 = f1(spec, opt).value;
  fs.u1 = u_integral(spec, opt).value;
  return energy_2d_pt2(fs, m, q, lambda);
}

/// Leading coefficients of Delta in E = sqrt(k^2 - sum_n delta_n lambda^n).
/// delta0 and delta1 vanish with the regulator.
struct DeltaCoefficients {
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
};

inline DeltaCoefficients delta_coefficients(const FunctionalSet& fs, double m) {
  if (!(m > 0.0)) throw InvalidArgument("delta_coefficients: m must be > 0");
  DeltaCoefficients d;
  const double fm = fs.fk(m, m);
  d.d2 = fm * fm;
  d.d3 = 2.0 * m * m * m * fs.f1 * fs.f21;
  d.d4 = m * m * m * m * eta4(fs) - m * m * kappa4(fs);
  return d;
}

}  // namespace diracbound
