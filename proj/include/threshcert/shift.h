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

#ifndef THRESHCERT_SHIFT_H_
#define THRESHCERT_SHIFT_H_

#include "threshcert/data_model.h"
#include "threshcert/empirical.h"

namespace threshcert {

// Operating-point shift between an internal domain P and an external
// domain Q at one threshold. Gaps are Q minus P.
struct ShiftReport {
  double t = 0.0;
  double delta_pi = 0.0;      // |pi_Q - pi_P|
  double signed_gap_1 = 0.0;  // F1_Q(t) - F1_P(t)
  double signed_gap_0 = 0.0;
  double d1 = 0.0;
  double d0 = 0.0;
  // (c10 + c01) delta_pi + c10 pi_P d1 + c01 (1 - pi_P) d0
  double shift_weighted = 0.0;
  double kolmogorov_1 = 0.0;
  double kolmogorov_0 = 0.0;
  double tv_labels = 0.0;
  // Same weights with the Kolmogorov distances in place of d1, d0.
  double global_bound = 0.0;
};

// Exact sup_u |F(u) - G(u)| of two left-limit step CDFs, checked on both
// sides of every atom of either sample.
double KolmogorovDistance(const LeftLimitCdf& f, const LeftLimitCdf& g);

ShiftReport ShiftAt(double t, const DomainStats& p, const DomainStats& q,
                    const CostSpec& costs);

}  // namespace threshcert

#endif  // THRESHCERT_SHIFT_H_
