// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

/// \file functionals.hpp
/// Potential functionals that parameterize the weak-coupling energy:
///
///   F1   = int V
///   F21  = int int V(x) |x-y| V(y)
///   F22  = int int V(x) (x-y)^2 V(y)
///   F31  = int int int |x-y| |y-z| V(x) V(y) V(z)
///   F32  = int int int sign(x-y) sign(x-z) U(x) V(y) V(z)
///   F(k) = 1/2 int [(m+k) V + (m-k) U]
///
/// The multiple integrals are reduced to nested 1D quadratures through
///   T(y) = int |x-y| V(x) dx,   S(x) = int sign(x-y) V(y) dy,
/// giving F21 = int V T, F31 = int V T^2, F32 = int U S^2, and F22 from the
/// first three moments of V. Point atoms enter in closed form; sign(0) = 0.

#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "diracbound/errors.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/quadrature.hpp"

namespace diracbound {

struct FunctionalOptions {
  double tol_1d = 1e-12;      ///< absolute, single integrals
  double tol_nested = 1e-9;   ///< absolute, outer integral of a nested pair
  double tol_inner = 1e-13;   ///< absolute, inner integrals T(y), S(x)
  std::size_t max_intervals = 4000;
};

/// Value with its achieved absolute error bound.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct FunctionalSet {
  double f1 = 0.0;
  double f21 = 0.0;
  double f22 = 0.0;
  double f31 = 0.0;
  double f32 = 0.0;
  double u1 = 0.0;  ///< int U; with f1 it fixes F(k) for every k

  struct Errors {
    double f1 = 0.0, f21 = 0.0, f22 = 0.0, f31 = 0.0, f32 = 0.0, u1 = 0.0;
  } errors;

  /// F(k) = 1/2 [(m+k) F1 + (m-k) int U].
  double fk(double m, double k) const { return 0.5 * ((m + k) * f1 + (m - k) * u1); }
};

namespace detail {

inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Breakpoints of the outer integrals: profile kinks plus atom positions.
inline std::vector<double> outer_breakpoints(const PotentialSpec& spec) {
  std::vector<double> b(spec.breakpoints().begin(), spec.breakpoints().end());
  for (auto c : {Component::V, Component::U})
    for (auto a : spec.atoms(c)) b.push_back(a.position);
  return b;
}

inline QuadratureResult checked(QuadratureResult r, const char* what) {
  if (!r.converged)
    throw ConvergenceError(std::string("quadrature for ") + what + " did not converge (achieved error " +
                               std::to_string(r.error) + ")",
                           r.error);
  return r;
}

/// int_R f(x) x^n dx of the smooth part plus atom sum.
inline Estimate moment(const PotentialSpec& spec, Component which, int n, const FunctionalOptions& opt) {
  Estimate e;
  for (auto a : spec.atoms(which)) e.value += a.weight * std::pow(a.position, n);
  if (spec.has_smooth(which)) {
    const double r = spec.support_radius();
    auto f = [&](double x) { return spec.eval(which, x) * std::pow(x, n); };
    auto res = checked(integrate(f, -r, r, spec.breakpoints(), {opt.tol_1d, 0.0, opt.max_intervals}),
                       "potential moment");
    e.value += res.value;
    e.error += res.error;
  }
  return e;
}

/// Nested-integral kernels for one potential. Tracks the worst inner error.
class Kernels {
 public:
  Kernels(const PotentialSpec& spec, const FunctionalOptions& opt) : spec_(spec), opt_(opt) {}

  /// T(y) = int |x-y| V(x) dx.
  double t(double y) {
    double sum = 0.0;
    for (auto a : spec_.atoms(Component::V)) sum += a.weight * std::abs(a.position - y);
    if (spec_.has_smooth(Component::V)) {
      const double r = spec_.support_radius();
      auto f = [&](double x) { return std::abs(x - y) * spec_.v(x); };
      sum += inner(f, y, r);
    }
    return sum;
  }

  /// S(x) = int sign(x-y) V(y) dy.
  double s(double x) {
    double sum = 0.0;
    for (auto a : spec_.atoms(Component::V)) sum += a.weight * sign0(x - a.position);
    if (spec_.has_smooth(Component::V)) {
      const double r = spec_.support_radius();
      auto f = [&](double y) { return sign0(x - y) * spec_.v(y); };
      sum += inner(f, x, r);
    }
    return sum;
  }

  double worst_inner_error() const { return worst_; }

 private:
  template <class F>
  double inner(F& f, double split, double r) {
    std::vector<double> bp(spec_.breakpoints().begin(), spec_.breakpoints().end());
    bp.push_back(split);
    QuadratureOptions o{opt_.tol_inner, 1e-15, opt_.max_intervals};
    auto res = integrate(f, -r, r, bp, o);
    if (!res.converged && res.error > 1e3 * opt_.tol_inner)
      throw ConvergenceError("inner quadrature did not converge (achieved error " +
                                 std::to_string(res.error) + ")",
                             res.error);
    worst_ = std::max(worst_, res.error);
    return res.value;
  }

  const PotentialSpec& spec_;
  const FunctionalOptions& opt_;
  double worst_ = 0.0;
};

/// int W(y) g(y) over smooth part plus atoms, for weight component W.
template <class G>
Estimate outer(const PotentialSpec& spec, Component weight, G&& g, const FunctionalOptions& opt,
               const char* what) {
  Estimate e;
  for (auto a : spec.atoms(weight)) e.value += a.weight * g(a.position);
  if (spec.has_smooth(weight)) {
    const double r = spec.support_radius();
    auto f = [&](double y) {
      double w = spec.eval(weight, y);
      return w == 0.0 ? 0.0 : w * g(y);
    };
    auto res = checked(integrate(f, -r, r, outer_breakpoints(spec), {opt.tol_nested, 0.0, opt.max_intervals}),
                       what);
    e.value += res.value;
    e.error += res.error;
  }
  return e;
}

inline double abs_mass(const PotentialSpec& spec, Component c) {
  double m = 0.0;
  for (auto a : spec.atoms(c)) m += std::abs(a.weight);
  if (spec.has_smooth(c)) {
    const double r = spec.support_radius();
    m += integrate([&](double x) { return std::abs(spec.eval(c, x)); }, -r, r, spec.breakpoints(),
                   {1e-8, 1e-8, 2000})
             .value;
  }
  return m;
}

}  // namespace detail

/// F1 = int V, atoms included.
inline Estimate f1(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  return detail::moment(spec, Component::V, 0, opt);
}

/// int U, atoms included.
inline Estimate u_integral(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  return detail::moment(spec, Component::U, 0, opt);
}

inline double f_of_k(const PotentialSpec& spec, double m, double k, const FunctionalOptions& opt = {}) {
  if (!(m > 0.0) || !(k >= m)) throw InvalidArgument("f_of_k requires k >= m > 0");
  return 0.5 * ((m + k) * f1(spec, opt).value + (m - k) * u_integral(spec, opt).value);
}

inline Estimate f21(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  detail::Kernels k(spec, opt);
  auto e = detail::outer(spec, Component::V, [&](double y) { return k.t(y); }, opt, "F21");
  e.error += k.worst_inner_error() * detail::abs_mass(spec, Component::V);
  return e;
}

/// F22 = 2 (M0 M2 - M1^2) with Mn = int x^n V.
inline Estimate f22(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  auto m0 = detail::moment(spec, Component::V, 0, opt);
  auto m1 = detail::moment(spec, Component::V, 1, opt);
  auto m2 = detail::moment(spec, Component::V, 2, opt);
  Estimate e;
  e.value = 2.0 * (m0.value * m2.value - m1.value * m1.value);
  e.error = 2.0 * (std::abs(m0.value) * m2.error + std::abs(m2.value) * m0.error +
                   2.0 * std::abs(m1.value) * m1.error);
  return e;
}

inline Estimate f31(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  detail::Kernels k(spec, opt);
  double tmax = 0.0;
  auto e = detail::outer(
      spec, Component::V,
      [&](double y) {
        double t = k.t(y);
        tmax = std::max(tmax, std::abs(t));
        return t * t;
      },
      opt, "F31");
  e.error += 2.0 * tmax * k.worst_inner_error() * detail::abs_mass(spec, Component::V);
  return e;
}

inline Estimate f32(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  detail::Kernels k(spec, opt);
  double smax = 0.0;
  auto e = detail::outer(
      spec, Component::U,
      [&](double x) {
        double s = k.s(x);
        smax = std::max(smax, std::abs(s));
        return s * s;
      },
      opt, "F32");
  e.error += 2.0 * smax * k.worst_inner_error() * detail::abs_mass(spec, Component::U);
  return e;
}

inline FunctionalSet compute_functionals(const PotentialSpec& spec, const FunctionalOptions& opt = {}) {
  FunctionalSet fs;
  auto set = [](double& v, double& err, Estimate e) {
    v = e.value;
    err = e.error;
  };
  set(fs.f1, fs.errors.f1, f1(spec, opt));
  set(fs.u1, fs.errors.u1, u_integral(spec, opt));
  set(fs.f21, fs.errors.f21, f21(spec, opt));
  set(fs.f22, fs.errors.f22, f22(spec, opt));
  set(fs.f31, fs.errors.f31, f31(spec, opt));
  set(fs.f32, fs.errors.f32, f32(spec, opt));
  return fs;
}

/// Table of F(k) values keyed by k rounded to 12 significant digits.
/// Safe for concurrent use.
class FkCache {
 public:
  FkCache(FunctionalSet fs, double m) : fs_(std::move(fs)), m_(m) {}

  double get(double k) {
    const double key = round_key(k);
    std::lock_guard lock(mu_);
    auto [it, inserted] = table_.try_emplace(key, 0.0);
    if (inserted) it->second = fs_.fk(m_, k);
    return it->second;
  }

  std::vector<std::pair<double, double>> entries() const {
    std::lock_guard lock(mu_);
    return {table_.begin(), table_.end()};
  }

  static double round_key(double k) {
    if (k == 0.0 || !std::isfinite(k)) return k;
    const double scale = std::pow(10.0, 11 - static_cast<int>(std::floor(std::log10(std::abs(k)))));
    return std::round(k * scale) / scale;
  }

 private:
  FunctionalSet fs_;
  double m_;
  mutable std::mutex mu_;
  std::map<double, double> table_;
};

}  // namespace diracbound
