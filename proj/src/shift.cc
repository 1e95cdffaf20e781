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

#include "threshcert/shift.h"

#include <algorithm>
#include <cmath>

namespace threshcert {
namespace {

double ScanAtoms(const LeftLimitCdf& atoms, const LeftLimitCdf& f,
                 const LeftLimitCdf& g) {
  double best = 0.0;
  for (double u : atoms.values()) {
    best = std::max(best, std::abs(f.Eval(u) - g.Eval(u)));
    best = std::max(best, std::abs(f.EvalRight(u) - g.EvalRight(u)));
  }
  return best;
}

}  // namespace

double KolmogorovDistance(const LeftLimitCdf& f, const LeftLimitCdf& g) {
  return std::max(ScanAtoms(f, f, g), ScanAtoms(g, f, g));
}

ShiftReport ShiftAt(double t, const DomainStats& p, const DomainStats& q,
                    const CostSpec& costs) {
  ShiftReport r;
  r.t = t;
  r.delta_pi = std::abs(q.prevalence - p.prevalence);
  r.tv_labels = r.delta_pi;
  r.signed_gap_1 = q.cdf1.Eval(t) - p.cdf1.Eval(t);
  r.signed_gap_0 = q.cdf0.Eval(t) - p.cdf0.Eval(t);
  r.d1 = std::abs(r.signed_gap_1);
  r.d0 = std::abs(r.signed_gap_0);
  r.kolmogorov_1 = KolmogorovDistance(q.cdf1, p.cdf1);
  r.kolmogorov_0 = KolmogorovDistance(q.cdf0, p.cdf0);

  const double w_pi = costs.c10() + costs.c01();
  const double w1 = costs.c10() * p.prevalence;
  const double w0 = costs.c01() * (1.0 - p.prevalence);
  r.shift_weighted = w_pi * r.delta_pi + w1 * r.d1 + w0 * r.d0;
  r.global_bound = w_pi * r.delta_pi + w1 * r.kolmogorov_1 + w0 * r.kolmogorov_0;
  return r;
}

}  // namespace threshcert
