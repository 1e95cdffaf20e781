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

#include "threshcert/empirical.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "threshcert/error.h"
#include "threshcert/io_util.h"

namespace threshcert {

LeftLimitCdf::LeftLimitCdf(std::span<const double> values) : n_(values.size()) {
  if (values.empty()) {
    throw std::invalid_argument("empirical CDF needs at least one value");
  }
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite score in CDF");
  }
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] != sorted[i - 1]) {
      values_.push_back(sorted[i]);
      below_.push_back(i);
    }
  }
}

std::size_t LeftLimitCdf::CountBelow(double t) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), t);
  return it == values_.end() ? n_ : below_[it - values_.begin()];
}

std::size_t LeftLimitCdf::CountAtMost(double t) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), t);
  return it == values_.end() ? n_ : below_[it - values_.begin()];
}

double LeftLimitCdf::Eval(double t) const {
  return static_cast<double>(CountBelow(t)) / static_cast<double>(n_);
}

double LeftLimitCdf::EvalRight(double t) const {
  return static_cast<double>(CountAtMost(t)) / static_cast<double>(n_);
}

ThresholdGrid::ThresholdGrid(std::vector<double> thresholds)
    : t_(std::move(thresholds)) {
  if (t_.empty()) throw std::invalid_argument("threshold grid is empty");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i])) {
      throw std::invalid_argument("threshold grid has a non-finite value");
    }
    if (i > 0 && !(t_[i] > t_[i - 1])) {
      throw std::invalid_argument("threshold grid must be strictly ascending");
    }
  }
}

std::optional<std::size_t> ThresholdGrid::IndexOf(double t) const {
  const auto it = std::lower_bound(t_.begin(), t_.end(), t);
  if (it == t_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - t_.begin());
}

GridMode GridMode::Parse(std::string_view text) {
  text = Trim(text);
  if (text == "midpoints") return Midpoints();
  if (text.substr(0, 8) == "uniform:") {
    if (auto n = ParseInteger(text.substr(8)); n && *n >= 2) {
      return Uniform(static_cast<int>(*n));
    }
  }
  throw std::invalid_argument(fmt::format(
      "unknown grid mode '{}' (expected midpoints|uniform:N with N >= 2)", text));
}

std::string GridMode::ToString() const {
  return kind == Kind::kMidpoints ? std::string("midpoints")
                                  : fmt::format("uniform:{}", n_points);
}

ThresholdGrid MakeGrid(std::span<const double> scores, GridMode mode) {
  if (scores.empty()) throw std::invalid_argument("cannot build a grid from no scores");
  std::vector<double> distinct(scores.begin(), scores.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  if (mode.kind == GridMode::Kind::kMidpoints) {
    if (distinct.size() < 2) {
      throw InputError("midpoint grid needs at least 2 distinct scores");
    }
    const std::size_t m = distinct.size();
    std::vector<double> t;
    t.reserve(m + 1);
    t.push_back(distinct[0] - 0.5 * (distinct[1] - distinct[0]));
    for (std::size_t i = 0; i + 1 < m; ++i) {
      t.push_back(distinct[i] + 0.5 * (distinct[i + 1] - distinct[i]));
    }
    t.push_back(distinct[m - 1] + 0.5 * (distinct[m - 1] - distinct[m - 2]));
    // Adjacent doubles can collapse a midpoint onto an endpoint.
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return ThresholdGrid(std::move(t));
  }

  if (mode.n_points < 2) throw std::invalid_argument("uniform grid needs >= 2 points");
  const double lo = distinct.front();
  const double hi = distinct.back();
  const double range = hi - lo;
  const double pad = range > 0.0 ? 1e-9 * range : 1e-9;
  const double a = lo - pad;
  const double b = hi + pad;
  std::vector<double> t(static_cast<std::size_t>(mode.n_points));
  const double step = (b - a) / static_cast<double>(mode.n_points - 1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = a + step * static_cast<double>(i);
  t.back() = b;
  return ThresholdGrid(std::move(t));
}

ThresholdGrid MakeGrid(std::span<const PatientScore> scores, GridMode mode) {
  const std::vector<double> values = ScoreValues(scores);
  return MakeGrid(std::span<const double>(values), mode);
}

DomainStats MakeDomainStats(std::span<const PatientScore> scores) {
  std::vector<double> s0;
  std::vector<double> s1;
  for (const PatientScore& p : scores) (p.label == 1 ? s1 : s0).push_back(p.s);
  if (s1.empty()) throw InputError("class-conditional CDF undefined for label 1");
  if (s0.empty()) throw InputError("class-conditional CDF undefined for label 0");
  const double prevalence =
      static_cast<double>(s1.size()) / static_cast<double>(scores.size());
  return DomainStats{prevalence, LeftLimitCdf(s0), LeftLimitCdf(s1), s0.size(),
                     s1.size()};
}

double RiskCurve::Sensitivity(std::size_t i) const { return 1.0 - cdf1()(grid[i]); }

double RiskCurve::Specificity(std::size_t i) const { return cdf0()(grid[i]); }

double PopulationRisk(double prevalence, const LeftLimitCdf& cdf0,
                      const LeftLimitCdf& cdf1, const CostSpec& costs, double t) {
  return costs.c10() * prevalence * cdf1(t) +
         costs.c01() * (1.0 - prevalence) * (1.0 - cdf0(t));
}

double PopulationRisk(const DomainStats& stats, const CostSpec& costs, double t) {
  return PopulationRisk(stats.prevalence, stats.cdf0, stats.cdf1, costs, t);
}

RiskCurve EmpiricalRiskCurve(DomainStats stats, const CostSpec& costs,
                             const ThresholdGrid& grid) {
  std::vector<double> risks(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    risks[i] = PopulationRisk(stats, costs, grid[i]);
  }
  return RiskCurve{grid, std::move(risks), costs, std::move(stats)};
}

RiskCurve EmpiricalRiskCurve(std::span<const PatientScore> scores,
                             const CostSpec& costs, const ThresholdGrid& grid) {
  if (scores.empty()) throw std::invalid_argument("risk curve needs scores");
  return EmpiricalRiskCurve(MakeDomainStats(scores), costs, grid);
}

void WriteRiskCurveCsv(const RiskCurve& curve, std::ostream& out) {
  out << "threshold,risk\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << FormatReal(curve.grid[i]) << ',' << FormatReal(curve.risks[i]) << '\n';
  }
}

}  // namespace threshcert
