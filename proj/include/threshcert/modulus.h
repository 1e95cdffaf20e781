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

#ifndef THRESHCERT_MODULUS_H_
#define THRESHCERT_MODULUS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "threshcert/data_model.h"
#include "threshcert/empirical.h"

namespace threshcert {

// Nonnegative ascending perturbation sizes: 0 followed by `points` values
// log-spaced from range / 1e4 to range. A zero range is treated as 1.
std::vector<double> DefaultEpsGrid(double score_range, int points = 64);

// Weighted oscillation modulus of the class-conditional CDFs,
//
//   w(eps) = sup_t { c10 pi osc(F1; t) + c01 (1 - pi) osc(F0; t) },
//
// where osc is taken over the closed window [t - eps, t + eps] of the step
// function including its jump values: the mass of a class in the window.
// At eps = 0 this is the largest weighted atom. Exact; the sup is attained
// with the window's left edge on an atom, which a two-pointer sweep visits.
std::vector<double> EmpiricalModulus(const LeftLimitCdf& cdf1,
                                     const LeftLimitCdf& cdf0, double prevalence,
                                     const CostSpec& costs,
                                     std::span<const double> eps_grid);

struct ModulusBand {
  std::vector<double> eps_grid;
  std::vector<double> raw;
  std::vector<double> isotonic;
  std::vector<double> upper;
  double dkw_inflation = 0.0;
  double ceiling = 0.0;  // c10 pi + c01 (1 - pi)
  double delta_band = 0.0;
};

// Isotonic fit of the raw modulus over eps plus the DKW inflation
// c10 pi 2 b1 + c01 (1 - pi) 2 b0, b_y = sqrt(log(4 / delta) / (2 n_y)),
// clipped at the ceiling.
ModulusBand ConservativeBand(std::span<const double> raw,
                             std::span<const double> eps_grid, std::size_t n1,
                             std::size_t n0, double prevalence,
                             const CostSpec& costs, double delta_band);

// Band value at the smallest grid eps >= eps; the last value past the grid.
double EvalBand(const ModulusBand& band, double eps);

// Band on the default eps grid for one domain sample.
ModulusBand BuildBand(const DomainStats& stats, const CostSpec& costs,
                      double delta_band);

// `eps,raw,upper` rows.
void WriteBandCsv(const ModulusBand& band, std::ostream& out);

}  // namespace threshcert

#endif  // THRESHCERT_MODULUS_H_
