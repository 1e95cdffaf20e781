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

#include "threshcert/bootstrap.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "test_util.h"
#include "threshcert/parallel.h"
#include "threshcert/selection.h"
#include "threshcert/synth.h"

namespace threshcert {
namespace {

using testing_util::Scores;

const ThresholdRule kErm = MakeRule(SelectorKind::Erm());

std::vector<PatientScore> Repeated(int k) {
  std::vector<std::pair<int, double>> rows;
  for (int i = 0; i < k; ++i) {
    rows.emplace_back(1, 0.8);
    rows.emplace_back(0, 0.2);
  }
  return Scores(rows);
}

TEST(BootstrapTest, DegenerateCohortHasZeroRadius) {
  const auto s = Repeated(20);
  const ThresholdGrid grid = MakeGrid(s, GridMode::Midpoints());
  BootstrapConfig cfg;
  cfg.B = 50;
  cfg.seed = 3;
  const BootstrapSummary b = BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm);
  for (double t : b.t_star) EXPECT_EQ(t, b.t_hat);
  EXPECT_EQ(b.b_hat, 0.0);
  EXPECT_EQ(b.q_radius, 0.0);
  EXPECT_EQ(b.radius, 0.0);
}

TEST(BootstrapTest, SingleReplicateRadius) {
  std::mt19937_64 rng(4);
  const auto s = testing_util::RandomScores(rng, 40);
  const ThresholdGrid grid = MakeGrid(s, GridMode::Midpoints());
  for (double delta : {0.05, 0.5, 0.95}) {
    BootstrapConfig cfg;
    cfg.B = 1;
    cfg.delta_boot = delta;
    cfg.seed = 12;
    const BootstrapSummary b = BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm);
    EXPECT_EQ(b.q_radius, std::abs(b.t_star[0] - b.t_hat));
  }
}

TEST(BootstrapTest, QuantileIsOrderStatistic) {
  BootstrapSummary s;
  s.t_hat = 0.0;
  s.t_star = {0.1, -0.4, 0.3, 0.2, -0.5, 0.0, 0.6, 0.7, -0.8, 0.9};
  SummarizeDeviations(s, 0.1, false);
  // ceil(0.9 * 10) = 9th smallest of |dev|.
  EXPECT_DOUBLE_EQ(s.q_radius, 0.8);
  EXPECT_NEAR(s.b_hat, 0.11, 1e-15);
  EXPECT_NEAR(s.radius, 0.91, 1e-15);
  SummarizeDeviations(s, 0.1, true);
  std::vector<double> dev;
  for (double t : s.t_star) dev.push_back(std::abs(t - 0.11));
  std::sort(dev.begin(), dev.end());
  EXPECT_DOUBLE_EQ(s.q_radius, dev[8]);
}

TEST(BootstrapTest, RadiusNonincreasingInDelta) {
  std::mt19937_64 rng(8);
  const auto s = testing_util::RandomScores(rng, 60, 40);
  const ThresholdGrid grid = MakeGrid(s, GridMode::Midpoints());
  BootstrapConfig cfg;
  cfg.B = 100;
  cfg.seed = 1;
  BootstrapSummary b = BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm);
  double prev = 1e300;
  for (double d = 0.01; d < 1.0; d += 0.07) {
    SummarizeDeviations(b, d, false);
    EXPECT_LE(b.q_radius, prev);
    prev = b.q_radius;
  }
}

TEST(BootstrapTest, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(5);
  const auto s = testing_util::RandomScores(rng, 80, 30);
  const ThresholdGrid grid = MakeGrid(s, GridMode::Midpoints());
  BootstrapConfig cfg;
  cfg.B = 64;
  cfg.seed = 77;
  SetThreadCount(1);
  const BootstrapSummary a = BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm);
  SetThreadCount(7);
  const BootstrapSummary b = BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm);
  SetThreadCount(0);
  EXPECT_EQ(a.t_star, b.t_star);
  EXPECT_EQ(a.radius, b.radius);
}

TEST(BootstrapTest, RedrawsClassDegenerateResamples) {
  // One positive among 3 patients: a third of resamples lose it.
  const auto s = Scores({{1, 1.0}, {0, 0.0}, {0, 0.5}});
  for (std::size_t b = 0; b < 200; ++b) {
    const auto idx = ResampleIndices(s, 9, b);
    bool has1 = false;
    for (auto i : idx) has1 |= s[i].label == 1;
    EXPECT_TRUE(has1);
  }
  const auto single = Scores({{1, 1.0}, {1, 0.0}});
  EXPECT_ANY_THROW(ResampleIndices(single, 1, 0));
}

TEST(BootstrapTest, SharpBasinHasLargerRadius) {
  // Both regimes share a broad basin near 1.5. The sharp regime adds a small
  // tightly separated subgroup at 2.0 whose dip is about as deep, so the ERM
  // cut hops between the two under resampling.
  MixtureSpec flat;
  flat.flat_mu = {0.0, 3.0};
  flat.flat_sd = 1.0;
  flat.noise = {0.0, 0.0, 1.0};
  MixtureSpec sharp = flat;
  sharp.sharp_fraction = 0.05;
  sharp.sharp_mu = {1.95, 2.05};
  sharp.sharp_sd = {0.02, 0.02};
  const HierarchySpec hier{1000, 1, 1};
  BootstrapConfig cfg;
  cfg.B = 100;
  cfg.seed = 1;
  auto radius = [&](const MixtureSpec& m) {
    const auto s = GenerateScores(m, hier, Aggregator::Max());
    const ThresholdGrid grid = MakeGrid(s, GridMode::Midpoints());
    return BootstrapThresholds(s, CostSpec(1, 1), grid, cfg, kErm).q_radius;
  };
  EXPECT_GT(radius(sharp), radius(flat));
}

TEST(GBootTest, LooksUpBand) {
  const std::vector<double> raw{0.05, 0.1, 0.2};
  const std::vector<double> eps{0.0, 0.5, 1.0};
  const ModulusBand band = ConservativeBand(raw, eps, 100, 100, 0.5, CostSpec(1, 1), 0.1);
  BootstrapSummary s;
  s.radius = 0.0;
  EXPECT_EQ(GBoot(s, band), band.upper[0]);
  s.radius = 0.3;
  EXPECT_EQ(GBoot(s, band), EvalBand(band, 0.3));
  s.radius = 10.0;
  EXPECT_EQ(GBoot(s, band), band.upper.back());
  EXPECT_EQ(s.g_boot, band.upper.back());
}

TEST(FlipRateTest, Enumerated) {
  const auto s = Scores({{1, 0.5}, {0, 0.2}});
  const std::vector<double> same{0.3, 0.3};
  EXPECT_EQ(FlipRate(s, 0.3, same), 0.0);
  const std::vector<double> moved{0.6, 0.1};
  // t_hat 0.3: decisions (1, 0). t=0.6: (0, 0) one flip. t=0.1: (1, 1) one flip.
  EXPECT_DOUBLE_EQ(FlipRate(s, 0.3, moved), 0.5);
  const auto one = Scores({{1, 0.5}});
  const std::vector<double> above{0.7, 0.9};
  EXPECT_EQ(FlipRate(one, 0.4, above), 1.0);
}

TEST(InstabilityTest, ZeroVarianceGivesZeroMap) {
  const auto s = Repeated(10);
  const ThresholdGrid grid({0.3, 0.4, 0.5, 0.6, 0.7});
  BootstrapConfig cfg;
  cfg.B = 20;
  const InstabilityMap m = ComputeInstabilityMap(s, CostSpec(1, 1), grid, cfg);
  for (double v : m.values) EXPECT_EQ(v, 0.0);
}

TEST(InstabilityTest, RecipeOnHandCurves) {
  const ThresholdGrid grid({0, 1, 2, 3, 4});
  const std::vector<std::vector<double>> curves{{0, 1, 4, 9, 16}, {0, 1, 2, 3, 4}};
  const InstabilityMap m = InstabilityFromCurves(grid, curves, 1);
  // mean (0,1,3,6,10): second differences 1,1,1 so kappa is 1 everywhere.
  const double r2 = std::sqrt(2.0);
  const std::vector<double> sd{0, 0, 2 / r2, 6 / r2, 12 / r2};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(m.raw[i], sd[i], 1e-12);
  EXPECT_EQ(m.values.front(), 0.0);
  EXPECT_EQ(m.values.back(), 1.0);
  EXPECT_NEAR(m.values[3], 0.5, 1e-12);
}

TEST(InstabilityTest, SmoothingTruncatesAtEdges) {
  const ThresholdGrid grid({0, 1, 2, 3, 4, 5});
  // Only the first point varies across replicates, so the smoothed map
  // decays from the left edge.
  std::vector<std::vector<double>> curves{{0, 1, 4, 9, 16, 25}, {0, 1, 4, 9, 16, 25}};
  curves[1][0] = 1.0;
  const InstabilityMap m = InstabilityFromCurves(grid, curves, 5);
  EXPECT_EQ(m.values[0], 1.0);
  EXPECT_EQ(m.values[5], 0.0);
  for (std::size_t i = 1; i < 6; ++i) EXPECT_LE(m.values[i], m.values[i - 1]);
}

TEST(InstabilityTest, CsvExports) {
  BootstrapSummary s;
  s.t_star = {0.5, 0.25};
  std::ostringstream out;
  WriteReplicatesCsv(s, out);
  EXPECT_EQ(out.str(), "b,t_star\n1,0.5\n2,0.25\n");
}

}  // namespace
}  // namespace threshcert
