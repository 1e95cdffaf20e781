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

#ifndef THRESHCERT_BOOTSTRAP_H_
#define THRESHCERT_BOOTSTRAP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "threshcert/data_model.h"
#include "threshcert/empirical.h"
#include "threshcert/modulus.h"

namespace threshcert {

struct BootstrapConfig {
  int B = 200;
  double delta_boot = 0.10;
  std::uint64_t seed = 0;
  // Quantile of |(t*_b - t_hat) - b_hat| instead of |t*_b - t_hat|.
  bool centered_quantile = false;
};

// Maps a risk curve to one of its grid thresholds.
using ThresholdRule = std::function<double(const RiskCurve&)>;

struct BootstrapSummary {
  double t_hat = 0.0;
  std::vector<double> t_star;
  double b_hat = 0.0;     // mean(t_star) - t_hat
  double q_radius = 0.0;  // (1 - delta_boot) quantile of the deviations
  double radius = 0.0;    // |b_hat| + q_radius
  double g_boot = 0.0;    // filled by GBoot
};

inline constexpr int kMaxResampleAttempts = 100;

// Patient indices of replicate b. Resamples that lose a class are redrawn
// from a fresh derived stream; InputError after kMaxResampleAttempts.
std::vector<std::size_t> ResampleIndices(std::span<const PatientScore> scores,
                                         std::uint64_t seed, std::size_t b);

// Risk curve of replicate b on the fixed grid.
RiskCurve ReplicateCurve(std::span<const PatientScore> scores,
                         const CostSpec& costs, const ThresholdGrid& grid,
                         std::uint64_t seed, std::size_t b);

// Refits `rule` on B patient-block resamples. t_hat is the rule applied to
// the full sample. g_boot is left at 0.
BootstrapSummary BootstrapThresholds(std::span<const PatientScore> scores,
                                     const CostSpec& costs,
                                     const ThresholdGrid& grid,
                                     const BootstrapConfig& cfg,
                                     const ThresholdRule& rule);

// Recomputes b_hat, q_radius and radius from t_hat and t_star.
void SummarizeDeviations(BootstrapSummary& summary, double delta_boot,
                         bool centered_quantile);

// Replicate risk values, one row per replicate.
std::vector<std::vector<double>> BootstrapRiskCurves(
    std::span<const PatientScore> scores, const CostSpec& costs,
    const ThresholdGrid& grid, const BootstrapConfig& cfg);

// Band value at the bootstrap radius. Also stores it in the summary.
double GBoot(BootstrapSummary& summary, const ModulusBand& band);

// Mean over patients and replicates of 1{decision at t*_b != decision at
// t_hat}, deciding positive when S >= t.
double FlipRate(std::span<const PatientScore> test_scores, double t_hat,
                std::span<const double> t_star);

struct InstabilityMap {
  ThresholdGrid grid;
  std::vector<double> raw;     // sd times curvature, before smoothing
  std::vector<double> values;  // smoothed and scaled to [0, 1]
};

// Pointwise sample sd of the replicate risks times the normalized absolute
// second difference of their mean (edge points copy their neighbour, and the
// curvature is 1 everywhere if it vanishes), smoothed with a centered moving
// average truncated at the edges, then min-max scaled. A flat map is all 0.
InstabilityMap InstabilityFromCurves(const ThresholdGrid& grid,
                                     const std::vector<std::vector<double>>& curves,
                                     int smoothing_window = 5);

InstabilityMap ComputeInstabilityMap(std::span<const PatientScore> scores,
                                     const CostSpec& costs,
                                     const ThresholdGrid& grid,
                                     const BootstrapConfig& cfg,
                                     int smoothing_window = 5);

// `b,t_star` rows, b starting at 1.
void WriteReplicatesCsv(const BootstrapSummary& summary, std::ostream& out);
// `threshold,raw,value` rows.
void WriteInstabilityCsv(const InstabilityMap& map, std::ostream& out);

}  // namespace threshcert

#endif  // THRESHCERT_BOOTSTRAP_H_
