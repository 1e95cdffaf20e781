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

#ifndef THRESHCERT_ENSEMBLE_H_
#define THRESHCERT_ENSEMBLE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace threshcert {

struct QuantileMappedThreshold {
  std::string source_id;
  double threshold = 0.0;
  double quantile_u = 0.0;  // #{ref < threshold} / n
  double weight = 1.0;      // inverse variance of quantile_u for Precision
};

// #{s < threshold} / n over the reference scores.
double ToQuantile(double threshold, std::span<const double> ref_scores);

QuantileMappedThreshold MapThreshold(std::string source_id, double threshold,
                                     std::span<const double> ref_scores,
                                     double weight = 1.0);

// Sample variance of the replicate thresholds on the quantile scale; 0 for
// a single replicate.
double QuantileVariance(std::span<const double> t_star,
                        std::span<const double> ref_scores);

// Threshold with floor(u * n) target scores strictly below it: the order
// statistic at 1-based index floor(u * n) + 1, or a value just above the
// maximum when u = 1.
double QuantileToThreshold(double u, std::span<const double> target_scores);

enum class Weighting { kUniform, kPrecision };

Weighting ParseWeighting(std::string_view text);
std::string_view WeightingName(Weighting weighting);

struct EnsembleResult {
  double u_bar = 0.0;
  double threshold = 0.0;
};

// Averages the items on the quantile scale and maps the mean back through
// the target scores. Cross-source correlation is taken to be zero.
EnsembleResult EnsembleThresholds(std::span<const QuantileMappedThreshold> items,
                                  std::span<const double> target_scores,
                                  Weighting weighting);

}  // namespace threshcert

#endif  // THRESHCERT_ENSEMBLE_H_
