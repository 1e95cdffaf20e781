/*
 * Copyright 2026 The threshcert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "threshcert/modulus.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "threshcert/isotonic.h"

namespace threshcert {
namespace {

// Exhaustive oscillation search on a dyadic lattice: scores and eps are
// multiples of 1/8 so window edges are exact, and every candidate window
// [t - eps, t + eps] with t on the 1/16 lattice covering the sample is
// checked directly against the raw counts.
double BruteModulus(const std::vector<double>& s1, const std::vector<double>& s0, double w1,
                    double w0, double eps) {
  double best = 0.0;
  for (int k = -200; k <= 400; ++k) {
    const double t = k / 16.0;
    double m1 = 0.0;
    double m0 = 0.0;
    for (double x : s1) m1 += (x >= t - eps && x <= t + eps);
    for (double x : s0) m0 += (x >= t - eps && x <= t + eps);
    best = std::max(best, w1 * (m1 / s1.size()) + w0 * (m0 / s0.size()));
  }
  return best;
}

TEST(ModulusTest, WorkedExamples) {
  const std::vector<double> one{0.0, 1.0};
  const LeftLimitCdf f1(one);
  const LeftLimitCdf f0(one);
  const std::vector<double> eps{0.0, 0.4, 0.6};
  const auto w = EmpiricalModulus(f1, f0, 1.0, CostSpec(1, 1), eps);
  EXPECT_DOUBLE_EQ(w[0], 0.5);
  EXPECT_DOUBLE_EQ(w[1], 0.5);
  EXPECT_DOUBLE_EQ(w[2], 1.0);
}

TEST(ModulusTest, FullRangeGivesCeiling) {
  const std::vector<double> a{0.3, 1.2, 2.0};
  const std::vector<double> b{0.1, 0.9};
  const double pi = 0.6;
  const CostSpec costs(2, 1);
  const std::vector<double> eps{1.0};
  const auto w = EmpiricalModulus(LeftLimitCdf(a), LeftLimitCdf(b), pi, costs, eps);
  EXPECT_DOUBLE_EQ(w[0], 2 * pi + (1 - pi));
}

TEST(ModulusTest, AtomMassAtZero) {
  const std::vector<double> a{0.5, 0.5, 0.7, 1.0};
  const std::vector<double> b{0.5, 0.2};
  const std::vector<double> eps{0.0};
  const auto w = EmpiricalModulus(LeftLimitCdf(a), LeftLimitCdf(b), 0.5, CostSpec(1, 1), eps);
  // At 0.5: class 1 holds 2/4, class 0 holds 1/2.
  EXPECT_DOUBLE_EQ(w[0], 0.5 * 0.5 + 0.5 * 0.5);
}

TEST(ModulusTest, MatchesExhaustiveSearch) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> lattice(0, 24);
  std::uniform_int_distribution<int> size(1, 6);
  std::vector<double> eps;
  for (int k = 0; k <= 28; ++k) eps.push_back(k / 8.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> s1(size(rng));
    std::vector<double> s0(size(rng));
    for (double& x : s1) x = lattice(rng) / 8.0;
    for (double& x : s0) x = lattice(rng) / 8.0;
    const double pi = static_cast<double>(s1.size()) / (s1.size() + s0.size());
    const CostSpec costs(1.0 + trial % 3, 1.0);
    const auto w = EmpiricalModulus(LeftLimitCdf(s1), LeftLimitCdf(s0), pi, costs, eps);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      EXPECT_EQ(w[k], BruteModulus(s1, s0, costs.c10() * pi, costs.c01() * (1 - pi), eps[k]))
          << "trial " << trial << " eps " << eps[k];
      if (k > 0) {
        EXPECT_GE(w[k], w[k - 1]);
      }
    }
  }
}

TEST(IsotonicTest, PoolsViolators) {
  const auto fit = IsotonicIncreasing(std::vector<double>{0.1, 0.3, 0.2, 0.4});
  ASSERT_EQ(fit.size(), 4u);
  EXPECT_DOUBLE_EQ(fit[0], 0.1);
  EXPECT_DOUBLE_EQ(fit[1], 0.25);
  EXPECT_DOUBLE_EQ(fit[2], 0.25);
  EXPECT_DOUBLE_EQ(fit[3], 0.4);
  const std::vector<double> mono{0.0, 0.0, 1.0, 2.0};
  EXPECT_EQ(IsotonicIncreasing(mono), mono);
}

TEST(BandTest, InflationAndClip) {
  const std::vector<double> raw{0.1, 0.3, 0.2, 0.4};
  const std::vector<double> eps{0.0, 0.1, 0.2, 0.3};
  const ModulusBand band = ConservativeBand(raw, eps, 1000, 1000, 0.5, CostSpec(1, 1), 0.1);
  const double b = std::sqrt(std::log(4.0 / 0.1) / 2000.0);
  EXPECT_NEAR(band.dkw_inflation, 0.5 * 2 * b + 0.5 * 2 * b, 1e-15);
  EXPECT_NEAR(band.upper[1], 0.25 + band.dkw_inflation, 1e-15);
  EXPECT_NEAR(band.upper[2], 0.25 + band.dkw_inflation, 1e-15);

  const ModulusBand small = ConservativeBand(raw, eps, 2, 2, 0.5, CostSpec(1, 1), 0.1);
  for (double v : small.upper) EXPECT_EQ(v, 1.0);
  EXPECT_ANY_THROW(ConservativeBand(raw, eps, 0, 2, 0.5, CostSpec(1, 1), 0.1));
}

TEST(BandTest, LargeSamplesApproachIsotonicFit) {
  const std::vector<double> raw{0.1, 0.2, 0.3};
  const std::vector<double> eps{0.0, 0.5, 1.0};
  const ModulusBand band =
      ConservativeBand(raw, eps, 100000000, 100000000, 0.5, CostSpec(1, 1), 0.1);
  for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(band.upper[i], raw[i], 5e-4);
}

TEST(BandTest, EvalIsConservativeLookup) {
  const std::vector<double> raw{0.1, 0.2, 0.3};
  const std::vector<double> eps{0.0, 0.5, 1.0};
  const ModulusBand band = ConservativeBand(raw, eps, 100, 100, 0.5, CostSpec(1, 1), 0.1);
  EXPECT_EQ(EvalBand(band, 0.5), band.upper[1]);
  EXPECT_EQ(EvalBand(band, 0.2), band.upper[1]);
  EXPECT_EQ(EvalBand(band, 0.0), band.upper[0]);
  EXPECT_EQ(EvalBand(band, 7.0), band.upper.back());
}

TEST(BandTest, DefaultEpsGridShape) {
  const auto g = DefaultEpsGrid(2.0);
  ASSERT_EQ(g.size(), 65u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[1], 2e-4, 1e-18);
  EXPECT_EQ(g.back(), 2.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(BandTest, CsvHeader) {
  const std::vector<double> raw{0.1};
  const std::vector<double> eps{0.0};
  std::ostringstream out;
  WriteBandCsv(ConservativeBand(raw, eps, 10, 10, 0.5, CostSpec(1, 1), 0.1), out);
  EXPECT_EQ(out.str().substr(0, 14), "eps,raw,upper\n");
}

}  // namespace
}  // namespace threshcert
