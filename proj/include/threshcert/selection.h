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

#ifndef THRESHCERT_SELECTION_H_
#define THRESHCERT_SELECTION_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threshcert/bootstrap.h"
#include "threshcert/data_model.h"
#include "threshcert/empirical.h"

namespace threshcert {

struct SelectorKind {
  enum class Kind { kErm, kYouden, kSensAtLeast, kSpecAtLeast, kPenalized };
  Kind kind = Kind::kErm;
  double target = 0.0;  // constrained cuts only

  static SelectorKind Erm() { return {Kind::kErm, 0.0}; }
  static SelectorKind Youden() { return {Kind::kYouden, 0.0}; }
  static SelectorKind SensAtLeast(double target);
  static SelectorKind SpecAtLeast(double target);
  static SelectorKind Penalized() { return {Kind::kPenalized, 0.0}; }

  // Accepts "erm", "youden", "sens:x", "spec:x", "penalized".
  static SelectorKind Parse(std::string_view text);
  std::string ToString() const;
};

// Grid index chosen by a selector. Ties go to the lowest threshold.
//   ERM, Penalized: argmin of the risk (the penalty acts across candidates).
//   Youden: argmax of sensitivity + specificity - 1.
//   SensAtLeast: largest t with sensitivity >= target.
//   SpecAtLeast: smallest t with specificity >= target.
// Throws InfeasibleConstraint when no grid point meets the constraint.
std::size_t SelectIndex(const RiskCurve& curve, const SelectorKind& kind);
double SelectThreshold(const RiskCurve& curve, const SelectorKind& kind);
ThresholdRule MakeRule(const SelectorKind& kind);

struct Candidate {
  std::string method_id;
  Aggregator aggregator = Aggregator::Max();
};

struct CandidateInput {
  Candidate candidate;
  std::vector<PatientScore> scores;
};

struct CandidateRow {
  Candidate candidate;
  bool ok = false;
  std::string error;
  double t_hat = 0.0;
  double val_risk = 0.0;
  double g_boot = 0.0;
  double objective_j = 0.0;
  BootstrapSummary bootstrap;
};

struct SelectionResult {
  Candidate candidate;
  std::size_t winner = 0;  // index into table
  double t_hat = 0.0;
  double min_val_risk = 0.0;
  double g_boot = 0.0;
  double objective_j = 0.0;  // min_val_risk + g_boot
  std::vector<CandidateRow> table;
  std::vector<std::string> warnings;
};

// Per candidate: grid on its scores, threshold by `within` (ERM by default),
// bootstrap radius of the same rule, band from the same scores and
// J = risk at the threshold + band(radius). The winner minimizes J; ties go
// to the smaller risk, then to the earlier candidate. Failing candidates are
// dropped with a warning; throws if none succeed.
SelectionResult PenalizedSelect(std::span<const CandidateInput> candidates,
                                const CostSpec& costs, GridMode grid_mode,
                                const BootstrapConfig& boot, double delta_band,
                                const SelectorKind& within = SelectorKind::Erm());

// `method,aggregator,t_hat,val_risk,g_boot,J` rows for successful candidates.
void WriteSelectionCsv(const SelectionResult& result, std::ostream& out);

struct LambdaMode {
  enum class Kind { kFixed, kFigureCalibration };
  Kind kind = Kind::kFigureCalibration;
  double lambda = 0.0;

  static LambdaMode Fixed(double lambda) { return {Kind::kFixed, lambda}; }
  static LambdaMode FigureCalibration() { return {Kind::kFigureCalibration, 0.0}; }
};

inline constexpr double kFigureRiskScale = 1.15;
inline constexpr double kFigureMapQuantile = 0.58;

// 1.15 * (max - min risk) / (0.58 quantile of the map values), or 0 when
// that quantile is 0.
double CalibrateLambda(const RiskCurve& curve, const InstabilityMap& map);

struct DirectionCap {
  double anchor = 0.0;
  double max_move = 0.0;
  bool rightward = true;  // search [anchor, anchor + max_move], else the mirror
};

struct PerTSelection {
  std::size_t index = 0;
  double t = 0.0;
  double lambda = 0.0;
  double objective = 0.0;
};

// Minimizes R(t) + lambda * map(t) over the grid, optionally restricted to a
// window next to an anchor. Ties go to the lowest threshold. The result is
// illustrative; PenalizedSelect is the canonical rule.
PerTSelection PenalizedSelectPerT(const RiskCurve& curve, const InstabilityMap& map,
                                  const LambdaMode& lambda_mode,
                                  const std::optional<DirectionCap>& cap = std::nullopt);

}  // namespace threshcert

#endif  // THRESHCERT_SELECTION_H_
