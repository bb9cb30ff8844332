// Copyright 2026 The diracbound Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "diracbound/perturbation.hpp"
#include "oracles.hpp"

using namespace diracbound;

namespace {

FunctionalSet random_set(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  FunctionalSet fs;
  fs.f1 = d(rng);
  fs.f21 = d(rng);
  fs.f22 = d(rng);
  fs.f31 = d(rng);
  fs.f32 = d(rng);
  fs.u1 = d(rng);
  return fs;
}

TEST(EnergySeries, DeltaWellIsOneMinusTwoLambdaSquaredPlusTwoLambdaFourth) {
  auto s = energy_series_1d(compute_functionals(delta_pair(1)), 1.0);
  EXPECT_NEAR(s.c2, -2.0, 1e-12);
  EXPECT_NEAR(s.c3, 0.0, 1e-12);
  EXPECT_NEAR(s.c4(), 2.0, 1e-12);
  EXPECT_NEAR(s.kappa4, 8.0, 1e-12);
  EXPECT_NEAR(s.delta_e, 2.0, 1e-12);
  EXPECT_EQ(s.c4_rel, s.delta_e);
}

TEST(EnergySeries, VanishingF1) {
  std::mt19937_64 rng(3);
  auto fs = random_set(rng);
  fs.f1 = 0.0;
  auto s = energy_series_1d(fs, 0.7);
  EXPECT_EQ(s.c2, 0.0);
  EXPECT_EQ(s.c3, 0.0);
  EXPECT_EQ(s.c4_rel, 0.0);
}

TEST(EnergySeries, StableUnderTighterQuadrature) {
  auto spec = gaussian_pair(1, 1);
  FunctionalOptions tight;
  tight.tol_1d = 1e-13;
  tight.tol_nested = 1e-11;
  tight.tol_inner = 1e-15;
  auto a = energy_series_1d(compute_functionals(spec), 0.1);
  auto b = energy_series_1d(compute_functionals(spec, tight), 0.1);
  EXPECT_NEAR(a.c2, b.c2, 1e-8);
  EXPECT_NEAR(a.c3, b.c3, 1e-8);
  EXPECT_NEAR(a.c4_nr, b.c4_nr, 1e-8);
  EXPECT_NEAR(a.c4_rel, b.c4_rel, 1e-8);
  EXPECT_LE(a.c2, 0.0);
}

TEST(EnergySeries, RejectsNonPositiveMass) {
  EXPECT_THROW(energy_series_1d(FunctionalSet{}, 0.0), InvalidArgument);
}

TEST(EvalPt4, Examples) {
  auto s = energy_series_1d(compute_functionals(delta_pair(1)), 1.0);
  EXPECT_EQ(eval_pt4(s, 0.0), 1.0);
  EXPECT_NEAR(eval_pt4(s, 0.1), 0.9802, 1e-14);
  EXPECT_NEAR(eval_pt4(s, 0.1) - 0.99 / 1.01, 0.9802 - 0.980198019801980, 1e-14);
  EXPECT_NEAR(eval_pt4(s, 0.5), 0.625, 1e-14);
  EXPECT_THROW(eval_pt4(s, -0.1), InvalidArgument);
}

TEST(EvalPt4, DeltaErrorIsSixthOrder) {
  auto s = energy_series_1d(compute_functionals(delta_pair(1)), 1.0);
  auto lam = oracle::geomspace(0.01, 0.1, 10);
  std::vector<double> d;
  for (double l : lam) d.push_back(eval_pt4(s, l) - (1 - l * l) / (1 + l * l));
  const double slope = oracle::loglog_slope(lam, d);
  EXPECT_GE(slope, 5.7);
  EXPECT_LE(slope, 6.3);
}

TEST(EnergySeries, NonRelativisticPartIgnoresU) {
  auto gauss = [](double x) { return -1.3 * std::exp(-x * x); };
  PotentialSpec a("a", {gauss, {}}, {[](double x) { return -0.2 * std::exp(-x * x); }, {}}, 6.5);
  PotentialSpec b("b", {gauss, {}}, {[](double x) { return 0.9 * std::exp(-3 * x * x); }, {}}, 6.5);
  auto sa = energy_series_1d(compute_functionals(a), 0.4);
  auto sb = energy_series_1d(compute_functionals(b), 0.4);
  EXPECT_NEAR(sa.c2, sb.c2, 1e-12);
  EXPECT_NEAR(sa.c3, sb.c3, 1e-10);
  EXPECT_NEAR(sa.c4_nr, sb.c4_nr, 1e-10);
  EXPECT_GT(std::abs(sa.c4_rel - sb.c4_rel), 1e-3);
}

TEST(EnergySeries, RelativisticCorrectionLinearInScalarPart) {
  auto base = gaussian_pair(1, 0.2);
  std::vector<double> de, f32;
  for (double c : {0.5, 1.0, 2.0}) {
    auto fs = compute_functionals(base.scaled(1.0, c));
    de.push_back(relativistic_correction(fs, 0.3));
    f32.push_back(fs.f32);
  }
  const double slope = (de[1] - de[0]) / (f32[1] - f32[0]);
  EXPECT_NEAR(de[2], de[1] + slope * (f32[2] - f32[1]), 1e-10);
  EXPECT_NEAR(f32[2], 2 * f32[1], 1e-9);
}

TEST(Energy2D, ReducesToOneDimensionAtZeroMomentum) {
  for (const auto& e : oracle::corpus()) {
    auto fs = compute_functionals(e.spec);
    for (double m : {0.1, 1.0})
      for (double l : {0.0, 0.05, 0.3, 1.0}) {
        auto s = energy_series_1d(fs, m);
        EXPECT_NEAR(energy_2d_pt2(fs, m, 0.0, l), m + s.c2 * l * l, 1e-12) << e.name;
      }
  }
}

TEST(Energy2D, Examples) {
  auto g = gaussian_pair(1, 0);
  const double k = std::sqrt(2.0);
  EXPECT_NEAR(energy_2d_pt2(g, 1.0, 1.0, 0.1), k - 0.005 / k * std::numbers::pi, 1e-12);
  EXPECT_NEAR(energy_2d_pt2(g, 1.0, 1.0, 0.0), k, 1e-15);
  EXPECT_THROW(energy_2d_pt2(g, 1.0, 1.0, -1.0), InvalidArgument);
}

TEST(DeltaCoefficients, DeltaWell) {
  auto d = delta_coefficients(compute_functionals(delta_pair(1)), 1.0);
  EXPECT_NEAR(d.d2, 4.0, 1e-15);
  EXPECT_NEAR(d.d3, 0.0, 1e-15);
  EXPECT_NEAR(d.d4, -8.0, 1e-15);
  auto z = delta_coefficients(FunctionalSet{}, 1.0);
  EXPECT_EQ(z.d2, 0.0);
  EXPECT_EQ(z.d3, 0.0);
  EXPECT_EQ(z.d4, 0.0);
}

TEST(DeltaCoefficients, SquareRootReexpansionMatchesSeries) {
  // sqrt(m^2 - d2 l^2 - d3 l^3 - d4 l^4)
  //   = m - d2/(2m) l^2 - d3/(2m) l^3 - (d4/(2m) + d2^2/(8 m^3)) l^4 + ...
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mass(0.05, 3.0);
  for (int t = 0; t < 200; ++t) {
    auto fs = random_set(rng);
    const double m = mass(rng);
    auto d = delta_coefficients(fs, m);
    auto s = energy_series_1d(fs, m);
    const double tol = 1e-12 * std::max({1.0, std::abs(s.c2), std::abs(s.c3), std::abs(s.c4())});
    EXPECT_NEAR(-d.d2 / (2 * m), s.c2, tol);
    EXPECT_NEAR(-d.d3 / (2 * m), s.c3, tol);
    EXPECT_NEAR(-d.d4 / (2 * m) - d.d2 * d.d2 / (8 * m * m * m), s.c4(), tol);
  }
}

TEST(DeltaCoefficients, SquareRootNumericallyAgrees) {
  auto fs = compute_functionals(gaussian_pair(1, 0.5));
  const double m = 0.8;
  auto d = delta_coefficients(fs, m);
  auto s = energy_series_1d(fs, m);
  for (double l : {1e-3, 2e-3, 4e-3}) {
    const double exact = std::sqrt(m * m - l * l * (d.d2 + l * (d.d3 + l * d.d4)));
    EXPECT_LT(std::abs(exact - eval_pt4(s, l)), 1e4 * std::pow(l, 5));
  }
}

}  // namespace
