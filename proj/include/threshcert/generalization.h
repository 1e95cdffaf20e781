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

#ifndef THRESHCERT_GENERALIZATION_H_
#define THRESHCERT_GENERALIZATION_H_

#include <cstddef>

#include "threshcert/data_model.h"

namespace threshcert {

struct GammaSpec {
  enum class Form { kHeadline, kExplicit };

  double delta_val = 0.10;
  Form form = Form::kExplicit;
  // Constant of the headline form C * sqrt(log(2/delta) / n_val).
  double headline_c = 1.0;
};

// Uniform deviation bound on sup_t |R_P(t) - R_val(t)| over validation
// patients. The explicit form splits delta three ways (two class-wise DKW
// events and one Hoeffding event for the prevalence):
//
//   c10 pi sqrt(log(6/d) / 2 n1) + c01 (1 - pi) sqrt(log(6/d) / 2 n0)
//     + (c10 + c01) sqrt(log(6/d) / 2 n_val)
//
// with pi the empirical prevalence.
double GammaVal(const GammaSpec& spec, std::size_t n1, std::size_t n0,
                double prevalence, const CostSpec& costs);

struct DesignEffect {
  std::size_t n_raw = 0;     // total instances N
  std::size_t n_patients = 0;
  double mean_cluster_size = 0.0;
  double icc = 0.0;          // one-way ANOVA estimate, clamped to [-1, 1]
  double deff = 1.0;         // 1 + (m - 1) * max(icc, 0)
  double n_eff = 0.0;        // N / deff
};

// Intra-patient correlation of instance scores and the implied effective
// sample size.
DesignEffect EstimateDesignEffect(const Cohort& cohort);

}  // namespace threshcert

#endif  // THRESHCERT_GENERALIZATION_H_
