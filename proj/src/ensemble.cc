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

#include "threshcert/ensemble.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "threshcert/empirical.h"
#include "threshcert/io_util.h"

namespace threshcert {

double ToQuantile(double threshold, std::span<const double> ref_scores) {
  return LeftLimitCdf(ref_scores).Eval(threshold);
}

QuantileMappedThreshold MapThreshold(std::string source_id, double threshold,
                                     std::span<const double> ref_scores,
                                     double weight) {
  return {std::move(source_id), threshold, ToQuantile(threshold, ref_scores), weight};
}

double QuantileVariance(std::span<const double> t_star,
                        std::span<const double> ref_scores) {
  if (t_star.size() < 2) return 0.0;
  const LeftLimitCdf cdf(ref_scores);
  double mean = 0.0;
  std::vector<double> u(t_star.size());
  for (std::size_t b = 0; b < t_star.size(); ++b) {
    u[b] = cdf.Eval(t_star[b]);
    mean += u[b];
  }
  mean /= static_cast<double>(u.size());
  double ss = 0.0;
  for (double v : u) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(u.size() - 1);
}

double QuantileToThreshold(double u, std::span<const double> target_scores) {
  if (target_scores.empty()) throw std::invalid_argument("no target scores");
  if (!(u >= 0.0 && u <= 1.0)) {
    throw std::invalid_argument(fmt::format("quantile must be in [0,1], got {}", u));
  }
  std::vector<double> sorted(target_scores.begin(), target_scores.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // The tolerance keeps k/n round trips from losing a step to rounding.
  const auto below = static_cast<std::size_t>(
      std::floor(u * static_cast<double>(n) + 1e-9));
  if (below >= n) {
    return std::nextafter(sorted.back(), std::numeric_limits<double>::infinity());
  }
  return sorted[below];
}

Weighting ParseWeighting(std::string_view text) {
  text = Trim(text);
  if (text == "uniform") return Weighting::kUniform;
  if (text == "precision") return Weighting::kPrecision;
  throw std::invalid_argument(
      fmt::format("unknown weighting '{}' (expected uniform|precision)", text));
}

std::string_view WeightingName(Weighting weighting) {
  return weighting == Weighting::kUniform ? "uniform" : "precision";
}

EnsembleResult EnsembleThresholds(std::span<const QuantileMappedThreshold> items,
                                  std::span<const double> target_scores,
                                  Weighting weighting) {
  if (items.empty()) throw std::invalid_argument("ensemble needs at least one item");
  // A zero-variance source (infinite precision) dominates: only such items
  // are averaged, uniformly.
  const bool dominant =
      weighting == Weighting::kPrecision &&
      std::any_of(items.begin(), items.end(),
                  [](const auto& item) { return std::isinf(item.weight) && item.weight > 0; });
  double total_w = 0.0;
  double acc = 0.0;
  for (const auto& item : items) {
    if (!(item.quantile_u >= 0.0 && item.quantile_u <= 1.0)) {
      throw std::invalid_argument("item quantile must be in [0,1]");
    }
    double w = 1.0;
    if (weighting == Weighting::kPrecision) {
      if (!(item.weight >= 0.0)) {
        throw std::invalid_argument("ensemble weights must be nonnegative");
      }
      w = dominant ? (std::isinf(item.weight) ? 1.0 : 0.0) : item.weight;
    }
    total_w += w;
    acc += w * item.quantile_u;
  }
  if (!(total_w > 0.0)) throw std::invalid_argument("all ensemble weights are zero");
  EnsembleResult out;
  out.u_bar = std::clamp(acc / total_w, 0.0, 1.0);
  out.threshold = QuantileToThreshold(out.u_bar, target_scores);
  return out;
}

}  // namespace threshcert
