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

#ifndef THRESHCERT_EMPIRICAL_H_
#define THRESHCERT_EMPIRICAL_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threshcert/data_model.h"

namespace threshcert {

// Left-limit empirical CDF F(t) = #{s < t} / n, stored as the distinct sorted
// values with the number of observations strictly below each one.
class LeftLimitCdf {
 public:
  explicit LeftLimitCdf(std::span<const double> values);

  // #{s < t} / n.
  double operator()(double t) const { return Eval(t); }
  double Eval(double t) const;
  // #{s <= t} / n, the right limit at t.
  double EvalRight(double t) const;

  std::size_t CountBelow(double t) const;
  std::size_t CountAtMost(double t) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::size_t>& counts_below() const { return below_; }
  std::size_t n() const { return n_; }

 private:
  std::vector<double> values_;
  std::vector<std::size_t> below_;
  std::size_t n_;
};

class ThresholdGrid {
 public:
  // Thresholds must be nonempty, finite and strictly ascending.
  explicit ThresholdGrid(std::vector<double> thresholds);

  const std::vector<double>& thresholds() const { return t_; }
  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }

  // Index of a threshold that is exactly on the grid.
  std::optional<std::size_t> IndexOf(double t) const;

  bool operator==(const ThresholdGrid&) const = default;

 private:
  std::vector<double> t_;
};

struct GridMode {
  enum class Kind { kMidpoints, kUniform };
  Kind kind = Kind::kMidpoints;
  int n_points = 200;

  static GridMode Midpoints() { return {Kind::kMidpoints, 0}; }
  static GridMode Uniform(int n) { return {Kind::kUniform, n}; }
  // Accepts "midpoints" or "uniform:N".
  static GridMode Parse(std::string_view text);
  std::string ToString() const;
};

// Midpoints: one threshold between every pair of adjacent distinct scores,
// plus one half a gap below the minimum and one half a gap above the maximum.
// Uniform: n points over [min - pad, max + pad], pad = 1e-9 * range.
ThresholdGrid MakeGrid(std::span<const PatientScore> scores, GridMode mode);
ThresholdGrid MakeGrid(std::span<const double> scores, GridMode mode);

// Prevalence plus class-conditional left-limit CDFs of one domain's patient
// scores. Requires both labels.
struct DomainStats {
  double prevalence = 0.0;
  LeftLimitCdf cdf0;
  LeftLimitCdf cdf1;
  std::size_t n0 = 0;
  std::size_t n1 = 0;

  std::size_t n() const { return n0 + n1; }
};

DomainStats MakeDomainStats(std::span<const PatientScore> scores);

struct RiskCurve {
  ThresholdGrid grid;
  std::vector<double> risks;
  CostSpec costs;
  DomainStats stats;

  double prevalence() const { return stats.prevalence; }
  const LeftLimitCdf& cdf0() const { return stats.cdf0; }
  const LeftLimitCdf& cdf1() const { return stats.cdf1; }
  // Sensitivity 1 - F1(t) and specificity F0(t) at grid index i.
  double Sensitivity(std::size_t i) const;
  double Specificity(std::size_t i) const;
};

// R(t) = c10 * pi * F1(t) + c01 * (1 - pi) * (1 - F0(t)).
double PopulationRisk(double prevalence, const LeftLimitCdf& cdf0,
                      const LeftLimitCdf& cdf1, const CostSpec& costs, double t);
double PopulationRisk(const DomainStats& stats, const CostSpec& costs, double t);

RiskCurve EmpiricalRiskCurve(std::span<const PatientScore> scores,
                             const CostSpec& costs, const ThresholdGrid& grid);
RiskCurve EmpiricalRiskCurve(DomainStats stats, const CostSpec& costs,
                             const ThresholdGrid& grid);

// `threshold,risk` rows.
void WriteRiskCurveCsv(const RiskCurve& curve, std::ostream& out);

}  // namespace threshcert

#endif  // THRESHCERT_EMPIRICAL_H_
