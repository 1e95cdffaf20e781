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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "threshcert/error.h"
#include "threshcert/io_util.h"
#include "threshcert/modulus.h"
#include "threshcert/parallel.h"

namespace threshcert {
namespace {

constexpr double kRateTolerance = 1e-12;

void CheckTarget(double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument(fmt::format("target must be in (0,1), got {}", target));
  }
}

std::size_t ArgMinLowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

SelectorKind SelectorKind::SensAtLeast(double target) {
  CheckTarget(target);
  return {Kind::kSensAtLeast, target};
}

SelectorKind SelectorKind::SpecAtLeast(double target) {
  CheckTarget(target);
  return {Kind::kSpecAtLeast, target};
}

SelectorKind SelectorKind::Parse(std::string_view text) {
  text = Trim(text);
  if (text == "erm") return Erm();
  if (text == "youden") return Youden();
  if (text == "penalized") return Penalized();
  for (auto [prefix, kind] : {std::pair{std::string_view("sens:"), Kind::kSensAtLeast},
                              std::pair{std::string_view("spec:"), Kind::kSpecAtLeast}}) {
    if (text.substr(0, prefix.size()) == prefix) {
      const auto x = ParseReal(text.substr(prefix.size()));
      if (x && *x > 0.0 && *x < 1.0) return {kind, *x};
    }
  }
  throw std::invalid_argument(fmt::format(
      "unknown selector '{}' (expected erm|youden|sens:x|spec:x|penalized, 0<x<1)", text));
}

std::string SelectorKind::ToString() const {
  switch (kind) {
    case Kind::kErm: return "erm";
    case Kind::kYouden: return "youden";
    case Kind::kSensAtLeast: return fmt::format("sens:{}", target);
    case Kind::kSpecAtLeast: return fmt::format("spec:{}", target);
    case Kind::kPenalized: return "penalized";
  }
  return "erm";
}

std::size_t SelectIndex(const RiskCurve& curve, const SelectorKind& kind) {
  const std::size_t n = curve.grid.size();
  if (curve.risks.size() != n) throw std::invalid_argument("risk curve off its grid");
  switch (kind.kind) {
    case SelectorKind::Kind::kErm:
    case SelectorKind::Kind::kPenalized:
      return ArgMinLowest(curve.risks);
    case SelectorKind::Kind::kYouden: {
      std::vector<double> neg_j(n);
      for (std::size_t i = 0; i < n; ++i) {
        neg_j[i] = -(curve.Sensitivity(i) + curve.Specificity(i) - 1.0);
      }
      return ArgMinLowest(neg_j);
    }
    case SelectorKind::Kind::kSensAtLeast: {
      double best = 0.0;
      for (std::size_t i = n; i-- > 0;) {
        const double sens = curve.Sensitivity(i);
        if (sens >= kind.target - kRateTolerance) return i;
        best = std::max(best, sens);
      }
      throw InfeasibleConstraint(
          fmt::format("no grid threshold reaches sensitivity {} (best achievable {})",
                      kind.target, best),
          best);
    }
    case SelectorKind::Kind::kSpecAtLeast: {
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double spec = curve.Specificity(i);
        if (spec >= kind.target - kRateTolerance) return i;
        best = std::max(best, spec);
      }
      throw InfeasibleConstraint(
          fmt::format("no grid threshold reaches specificity {} (best achievable {})",
                      kind.target, best),
          best);
    }
  }
  return ArgMinLowest(curve.risks);
}

double SelectThreshold(const RiskCurve& curve, const SelectorKind& kind) {
  return curve.grid[SelectIndex(curve, kind)];
}

ThresholdRule MakeRule(const SelectorKind& kind) {
  return [kind](const RiskCurve& curve) { return SelectThreshold(curve, kind); };
}

SelectionResult PenalizedSelect(std::span<const CandidateInput> candidates,
                                const CostSpec& costs, GridMode grid_mode,
                                const BootstrapConfig& boot, double delta_band,
                                const SelectorKind& within) {
  if (candidates.empty()) throw std::invalid_argument("no selection candidates");
  SelectionResult result;
  result.table.resize(candidates.size());
  const ThresholdRule rule = MakeRule(within);

  // Candidates run one after another; each bootstrap is parallel inside.
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    CandidateRow& row = result.table[c];
    row.candidate = candidates[c].candidate;
    try {
      if (row.candidate.method_id.empty()) {
        throw std::invalid_argument("candidate method id is empty");
      }
      const auto& scores = candidates[c].scores;
      const ThresholdGrid grid = MakeGrid(scores, grid_mode);
      const RiskCurve curve = EmpiricalRiskCurve(scores, costs, grid);
      const std::size_t i = SelectIndex(curve, within);
      row.t_hat = grid[i];
      row.val_risk = curve.risks[i];
      row.bootstrap = BootstrapThresholds(scores, costs, grid, boot, rule);
      const ModulusBand band = BuildBand(curve.stats, costs, delta_band);
      row.g_boot = GBoot(row.bootstrap, band);
      row.objective_j = row.val_risk + row.g_boot;
      row.ok = true;
    } catch (const InfeasibleConstraint&) {
      throw;
    } catch (const std::exception& e) {
      row.error = e.what();
      result.warnings.push_back(fmt::format("candidate {}:{} excluded: {}",
                                            row.candidate.method_id,
                                            row.candidate.aggregator.ToString(),
                                            e.what()));
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t c = 0; c < result.table.size(); ++c) {
    const CandidateRow& row = result.table[c];
    if (!row.ok) continue;
    if (!best || row.objective_j < result.table[*best].objective_j ||
        (row.objective_j == result.table[*best].objective_j &&
         row.val_risk < result.table[*best].val_risk)) {
      best = c;
    }
  }
  if (!best) {
    throw InputError(fmt::format("all selection candidates failed; first error: {}",
                                 result.table.front().error));
  }
  const CandidateRow& win = result.table[*best];
  result.winner = *best;
  result.candidate = win.candidate;
  result.t_hat = win.t_hat;
  result.min_val_risk = win.val_risk;
  result.g_boot = win.g_boot;
  result.objective_j = win.objective_j;
  return result;
}

void WriteSelectionCsv(const SelectionResult& result, std::ostream& out) {
  out << "method,aggregator,t_hat,val_risk,g_boot,J\n";
  for (const CandidateRow& row : result.table) {
    if (!row.ok) continue;
    out << row.candidate.method_id << ',' << row.candidate.aggregator.ToString() << ','
        << FormatReal(row.t_hat) << ',' << FormatReal(row.val_risk) << ','
        << FormatReal(row.g_boot) << ',' << FormatReal(row.objective_j) << '\n';
  }
}

double CalibrateLambda(const RiskCurve& curve, const InstabilityMap& map) {
  const auto [mn, mx] = std::minmax_element(curve.risks.begin(), curve.risks.end());
  std::vector<double> v = map.values;
  std::sort(v.begin(), v.end());
  const double pos = std::ceil(kFigureMapQuantile * static_cast<double>(v.size()) - 1e-9);
  const std::size_t k =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(pos, 1.0)), 1, v.size());
  const double q = v[k - 1];
  if (!(q > 0.0)) return 0.0;
  return kFigureRiskScale * (*mx - *mn) / q;
}

PerTSelection PenalizedSelectPerT(const RiskCurve& curve, const InstabilityMap& map,
                                  const LambdaMode& lambda_mode,
                                  const std::optional<DirectionCap>& cap) {
  if (!(curve.grid == map.grid) || map.values.size() != curve.risks.size()) {
    throw std::invalid_argument("risk curve and instability map use different grids");
  }
  PerTSelection out;
  out.lambda = lambda_mode.kind == LambdaMode::Kind::kFixed
                   ? lambda_mode.lambda
                   : CalibrateLambda(curve, map);
  if (!(out.lambda >= 0.0) || !std::isfinite(out.lambda)) {
    throw std::invalid_argument("lambda must be finite and nonnegative");
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (cap) {
    if (!(cap->max_move >= 0.0)) throw std::invalid_argument("max_move must be >= 0");
    lo = cap->rightward ? cap->anchor : cap->anchor - cap->max_move;
    hi = cap->rightward ? cap->anchor + cap->max_move : cap->anchor;
  }
  bool found = false;
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double t = curve.grid[i];
    if (t < lo || t > hi) continue;
    const double j = curve.risks[i] + out.lambda * map.values[i];
    if (!found || j < out.objective) {
      out.index = i;
      out.objective = j;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("direction cap leaves no grid threshold");
  out.t = curve.grid[out.index];
  return out;
}

}  // namespace threshcert
