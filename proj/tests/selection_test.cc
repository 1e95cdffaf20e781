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

#include "threshcert/selection.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_util.h"
#include "threshcert/error.h"
#include "threshcert/synth.h"

namespace threshcert {
namespace {

using testing_util::DirectRisk;
using testing_util::RandomScores;
using testing_util::Scores;

TEST(SelectTest, SeparatedClassesAgree) {
  const auto s = Scores({{0, 0.1}, {0, 0.2}, {0, 0.3}, {1, 0.7}, {1, 0.8}, {1, 0.9}});
  const RiskCurve c = EmpiricalRiskCurve(s, CostSpec(1, 1), MakeGrid(s, GridMode::Midpoints()));
  for (const SelectorKind& k : {SelectorKind::Erm(), SelectorKind::Youden(),
                                SelectorKind::SensAtLeast(0.95), SelectorKind::SpecAtLeast(0.9)}) {
    const std::size_t i = SelectIndex(c, k);
    EXPECT_GT(c.grid[i], 0.3);
    EXPECT_LT(c.grid[i], 0.7);
    EXPECT_EQ(c.risks[i], 0.0);
  }
}

TEST(SelectTest, ErmMatchesExhaustiveSearch) {
  const auto s = Scores({{1, 0.9}, {1, 0.4}, {0, 0.3}, {0, 0.6}});
  const ThresholdGrid g = MakeGrid(s, GridMode::Midpoints());
  const RiskCurve c = EmpiricalRiskCurve(s, CostSpec(2, 1), g);
  double best_t = g[0];
  double best = DirectRisk(s, 2, 1, g[0]);
  for (double t : g.thresholds()) {
    const double r = DirectRisk(s, 2, 1, t);
    if (r < best) {
      best = r;
      best_t = t;
    }
  }
  EXPECT_EQ(SelectThreshold(c, SelectorKind::Erm()), best_t);
}

TEST(SelectTest, SensitivityConstraintFallsBelowMinimum) {
  // Positives are the lowest scores, so only t below everything keeps
  // sensitivity at 1.
  const auto s = Scores({{1, 0.1}, {1, 0.2}, {0, 0.5}, {0, 0.6}, {1, 0.05}});
  const RiskCurve c = EmpiricalRiskCurve(s, CostSpec(1, 1), MakeGrid(s, GridMode::Midpoints()));
  EXPECT_EQ(SelectIndex(c, SelectorKind::SensAtLeast(0.95)), 0u);
}

TEST(SelectTest, InfeasibleNamesBestValue) {
  const auto s = Scores({{1, 0.9}, {0, 0.1}});
  const RiskCurve c = EmpiricalRiskCurve(s, CostSpec(1, 1), ThresholdGrid({0.95}));
  try {
    SelectIndex(c, SelectorKind::SensAtLeast(0.5));
    FAIL();
  } catch (const InfeasibleConstraint& e) {
    EXPECT_EQ(e.best_achievable(), 0.0);
  }
}

TEST(SelectTest, ParseSelectors) {
  EXPECT_EQ(SelectorKind::Parse("sens:0.95").target, 0.95);
  EXPECT_EQ(SelectorKind::Parse("spec:0.9").kind, SelectorKind::Kind::kSpecAtLeast);
  EXPECT_EQ(SelectorKind::Parse("penalized").ToString(), "penalized");
  EXPECT_ANY_THROW(SelectorKind::Parse("sens:1.5"));
  EXPECT_ANY_THROW(SelectorKind::Parse("auc"));
}

TEST(SelectTest, ErmInvariantToCostScale) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = RandomScores(rng, 30);
    const ThresholdGrid g = MakeGrid(s, GridMode::Midpoints());
    const double a = SelectThreshold(EmpiricalRiskCurve(s, CostSpec(1, 3), g), SelectorKind::Erm());
    const double b = SelectThreshold(EmpiricalRiskCurve(s, CostSpec(4, 12), g), SelectorKind::Erm());
    EXPECT_EQ(a, b);
  }
}

TEST(SelectTest, RankSelectorsCommuteWithMonotoneTransforms) {
  std::mt19937_64 rng(2);
  auto g = [](double x) { return std::exp(x) - 3.0 * std::atan(-x); };
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = RandomScores(rng, 40);
    auto t = s;
    for (auto& p : t) p.s = g(p.s);
    for (const SelectorKind& k : {SelectorKind::Erm(), SelectorKind::Youden()}) {
      const double a = SelectThreshold(
          EmpiricalRiskCurve(s, CostSpec(1, 2), MakeGrid(s, GridMode::Midpoints())), k);
      const double b = SelectThreshold(
          EmpiricalRiskCurve(t, CostSpec(1, 2), MakeGrid(t, GridMode::Midpoints())), k);
      for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s[i].s >= a, t[i].s >= b);
    }
  }
}

TEST(PenalizedSelectTest, SingleCandidateIsErm) {
  std::mt19937_64 rng(3);
  const auto s = RandomScores(rng, 50);
  BootstrapConfig cfg;
  cfg.B = 20;
  const std::vector<CandidateInput> one{{{"m", Aggregator::Max()}, s}};
  const SelectionResult r = PenalizedSelect(one, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1);
  const RiskCurve c = EmpiricalRiskCurve(s, CostSpec(1, 1), MakeGrid(s, GridMode::Midpoints()));
  EXPECT_EQ(r.t_hat, SelectThreshold(c, SelectorKind::Erm()));
  EXPECT_EQ(r.objective_j, r.min_val_risk + r.g_boot);
  std::ostringstream out;
  WriteSelectionCsv(r, out);
  EXPECT_EQ(out.str().substr(0, 38), "method,aggregator,t_hat,val_risk,g_boo");
}

TEST(PenalizedSelectTest, OrderOfCandidatesDoesNotMatter) {
  std::vector<std::pair<int, double>> a;
  for (int i = 0; i < 20; ++i) a.emplace_back(i % 2, i % 2 ? 0.8 : 0.2);
  auto b = a;
  b[0] = {0, 0.9};  // one negative above every positive
  BootstrapConfig cfg;
  cfg.B = 10;
  const std::vector<CandidateInput> ab{{{"a", Aggregator::Max()}, Scores(a)},
                                       {{"b", Aggregator::Max()}, Scores(b)}};
  const std::vector<CandidateInput> ba{ab[1], ab[0]};
  EXPECT_EQ(PenalizedSelect(ab, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1).candidate.method_id,
            "a");
  EXPECT_EQ(PenalizedSelect(ba, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1).candidate.method_id,
            "a");
}

TEST(PenalizedSelectTest, ExactTiesKeepTheEarlierCandidate) {
  std::mt19937_64 rng(6);
  const auto s = RandomScores(rng, 30);
  BootstrapConfig cfg;
  cfg.B = 10;
  const std::vector<CandidateInput> c{{{"first", Aggregator::Max()}, s},
                                      {{"second", Aggregator::Max()}, s}};
  const SelectionResult r = PenalizedSelect(c, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1);
  EXPECT_EQ(r.table[0].objective_j, r.table[1].objective_j);
  EXPECT_EQ(r.candidate.method_id, "first");
}

TEST(PenalizedSelectTest, FailedCandidatesAreDropped) {
  BootstrapConfig cfg;
  cfg.B = 5;
  const std::vector<CandidateInput> c{{{"bad", Aggregator::Max()}, Scores({{1, 0.1}, {1, 0.2}})},
                                      {{"ok", Aggregator::Max()}, Scores({{1, 0.9}, {0, 0.1}})}};
  const SelectionResult r = PenalizedSelect(c, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1);
  EXPECT_EQ(r.candidate.method_id, "ok");
  EXPECT_EQ(r.warnings.size(), 1u);
  const std::vector<CandidateInput> none{c[0]};
  EXPECT_ANY_THROW(PenalizedSelect(none, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1));
}

TEST(PenalizedSelectTest, FlatBasinBeatsSharpBasin) {
  // The sharp candidate has a narrow dip next to the broad basin; its minimum
  // risk is close to the flat one but the selected cut is unstable.
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
  const std::vector<CandidateInput> c{
      {{"sharp", Aggregator::Max()}, GenerateScores(sharp, hier, Aggregator::Max())},
      {{"flat", Aggregator::Max()}, GenerateScores(flat, hier, Aggregator::Max())}};
  const SelectionResult r = PenalizedSelect(c, CostSpec(1, 1), GridMode::Midpoints(), cfg, 0.1);
  EXPECT_NEAR(r.table[0].val_risk, r.table[1].val_risk, 0.05);
  EXPECT_LT(r.table[1].g_boot, r.table[0].g_boot);
  EXPECT_EQ(r.candidate.method_id, "flat");
}

RiskCurve Curve(std::vector<double> risks) {
  std::vector<double> t;
  for (std::size_t i = 0; i < risks.size(); ++i) t.push_back(static_cast<double>(i));
  const auto s = Scores({{1, 0.0}, {0, 1.0}});
  RiskCurve c = EmpiricalRiskCurve(s, CostSpec(1, 1), ThresholdGrid(t));
  c.risks = std::move(risks);
  return c;
}

InstabilityMap Map(const RiskCurve& c, std::vector<double> values) {
  return InstabilityMap{c.grid, values, values};
}

TEST(PerTTest, ZeroLambdaIsErm) {
  const RiskCurve c = Curve({0.5, 0.2, 0.3, 0.2, 0.6});
  const auto m = Map(c, {0, 1, 0.2, 0.1, 0});
  const PerTSelection s = PenalizedSelectPerT(c, m, LambdaMode::Fixed(0.0));
  EXPECT_EQ(s.index, 1u);
}

TEST(PerTTest, ConstantMapKeepsErm) {
  const RiskCurve c = Curve({0.5, 0.2, 0.3, 0.1, 0.6});
  const auto m = Map(c, {0.4, 0.4, 0.4, 0.4, 0.4});
  EXPECT_EQ(PenalizedSelectPerT(c, m, LambdaMode::Fixed(3.0)).index, 3u);
  EXPECT_EQ(PenalizedSelectPerT(c, m, LambdaMode::FigureCalibration()).index, 3u);
}

TEST(PerTTest, CalibrationAndCap) {
  const RiskCurve c = Curve({0.5, 0.2, 0.21, 0.25, 0.6});
  const auto m = Map(c, {0.0, 1.0, 0.5, 0.0, 0.2});
  // ceil(0.58 * 5) = 3rd smallest map value = 0.2.
  EXPECT_NEAR(CalibrateLambda(c, m), 1.15 * 0.4 / 0.2, 1e-15);
  const PerTSelection s =
      PenalizedSelectPerT(c, m, LambdaMode::FigureCalibration(), DirectionCap{1.0, 2.5, true});
  EXPECT_EQ(s.index, 3u);
  const PerTSelection capped =
      PenalizedSelectPerT(c, m, LambdaMode::FigureCalibration(), DirectionCap{1.0, 1.0, true});
  EXPECT_EQ(capped.index, 2u);
  const auto zero = Map(c, {0, 0, 0, 1, 1});
  EXPECT_EQ(CalibrateLambda(c, zero), 0.0);
}

TEST(PerTTest, RejectsMismatchedGrids) {
  const RiskCurve c = Curve({0.5, 0.2, 0.3});
  const RiskCurve d = Curve({0.5, 0.2, 0.3, 0.4});
  EXPECT_ANY_THROW(PenalizedSelectPerT(c, Map(d, {0, 0, 0, 0}), LambdaMode::Fixed(1)));
}

}  // namespace
}  // namespace threshcert
