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

#include "threshcert/generalization.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace threshcert {

double GammaVal(const GammaSpec& spec, std::size_t n1, std::size_t n0,
                double prevalence, const CostSpec& costs) {
  const double delta = spec.delta_val;
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(fmt::format("delta_val must be in (0,1), got {}", delta));
  }
  const std::size_t n_val = n1 + n0;
  if (n_val < 2) throw std::invalid_argument("generalization term needs n_val >= 2");

  if (spec.form == GammaSpec::Form::kHeadline) {
    if (!(spec.headline_c > 0.0)) throw std::invalid_argument("headline C must be > 0");
    return spec.headline_c * std::sqrt(std::log(2.0 / delta) / static_cast<double>(n_val));
  }

  if (n1 == 0 || n0 == 0) {
    throw std::invalid_argument("explicit generalization term needs both classes");
  }
  const double log_term = std::log(6.0 / delta);
  auto width = [log_term](std::size_t n) {
    return std::sqrt(log_term / (2.0 * static_cast<double>(n)));
  };
  return costs.c10() * prevalence * width(n1) +
         costs.c01() * (1.0 - prevalence) * width(n0) +
         (costs.c10() + costs.c01()) * width(n_val);
}

DesignEffect EstimateDesignEffect(const Cohort& cohort) {
  const std::size_t k = cohort.size();
  if (k < 2) throw std::invalid_argument("design effect needs at least 2 patients");

  DesignEffect out;
  out.n_patients = k;
  out.n_raw = cohort.num_instances();
  const double n = static_cast<double>(out.n_raw);
  out.mean_cluster_size = n / static_cast<double>(k);

  double grand = 0.0;
  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& xs = cohort.patients()[i].instances;
    double sum = 0.0;
    for (double x : xs) sum += x;
    means[i] = sum / static_cast<double>(xs.size());
    grand += sum;
  }
  grand /= n;

  double ss_between = 0.0;
  double ss_within = 0.0;
  double sum_m2 = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& xs = cohort.patients()[i].instances;
    const double m = static_cast<double>(xs.size());
    ss_between += m * (means[i] - grand) * (means[i] - grand);
    for (double x : xs) ss_within += (x - means[i]) * (x - means[i]);
    sum_m2 += m * m;
  }

  double icc = 0.0;
  if (out.n_raw > k) {
    const double ms_between = ss_between / static_cast<double>(k - 1);
    const double ms_within = ss_within / (n - static_cast<double>(k));
    const double m0 = (n - sum_m2 / n) / static_cast<double>(k - 1);
    const double denom = ms_between + (m0 - 1.0) * ms_within;
    if (denom > 0.0) icc = (ms_between - ms_within) / denom;
  }
  out.icc = std::clamp(icc, -1.0, 1.0);
  out.deff = 1.0 + (out.mean_cluster_size - 1.0) * std::max(out.icc, 0.0);
  out.n_eff = n / out.deff;
  return out;
}

}  // namespace threshcert
