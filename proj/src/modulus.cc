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

#include "threshcert/modulus.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <ostream>
#include <stdexcept>

#include "threshcert/io_util.h"
#include "threshcert/isotonic.h"
#include "threshcert/parallel.h"

namespace threshcert {

std::vector<double> DefaultEpsGrid(double score_range, int points) {
  if (points < 1) throw std::invalid_argument("eps grid needs at least one point");
  const double range = score_range > 0.0 ? score_range : 1.0;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points) + 1);
  grid.push_back(0.0);
  if (points == 1) {
    grid.push_back(range);
    return grid;
  }
  const double lo = std::log(range * 1e-4);
  const double hi = std::log(range);
  for (int i = 0; i < points; ++i) {
    grid.push_back(i + 1 == points ? range
                                   : std::exp(lo + (hi - lo) * i / (points - 1)));
  }
  return grid;
}

std::vector<double> EmpiricalModulus(const LeftLimitCdf& cdf1,
                                     const LeftLimitCdf& cdf0, double prevalence,
                                     const CostSpec& costs,
                                     std::span<const double> eps_grid) {
  const double w1 = costs.c10() * prevalence;
  const double w0 = costs.c01() * (1.0 - prevalence);
  std::vector<double> atoms;
  atoms.reserve(cdf1.values().size() + cdf0.values().size());
  std::merge(cdf1.values().begin(), cdf1.values().end(), cdf0.values().begin(),
             cdf0.values().end(), std::back_inserter(atoms));
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  auto mass = [](const LeftLimitCdf& cdf, double lo, double hi) {
    return static_cast<double>(cdf.CountAtMost(hi) - cdf.CountBelow(lo)) /
           static_cast<double>(cdf.n());
  };

  std::vector<double> out(eps_grid.size(), 0.0);
  ParallelFor(eps_grid.size(), [&](std::size_t k) {
    const double eps = eps_grid[k];
    if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
    double best = 0.0;
    for (double a : atoms) {
      const double b = a + 2.0 * eps;
      best = std::max(best, w1 * mass(cdf1, a, b) + w0 * mass(cdf0, a, b));
    }
    out[k] = best;
  });
  return out;
}

ModulusBand ConservativeBand(std::span<const double> raw,
                             std::span<const double> eps_grid, std::size_t n1,
                             std::size_t n0, double prevalence,
                             const CostSpec& costs, double delta_band) {
  if (raw.size() != eps_grid.size() || raw.empty()) {
    throw std::invalid_argument("modulus values must align with a nonempty eps grid");
  }
  if (n1 == 0 || n0 == 0) throw std::invalid_argument("band needs both classes");
  if (!(delta_band > 0.0 && delta_band < 1.0)) {
    throw std::invalid_argument(fmt::format("delta_band must be in (0,1), got {}", delta_band));
  }
  for (std::size_t i = 1; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > eps_grid[i - 1])) {
      throw std::invalid_argument("eps grid must be strictly ascending");
    }
  }
  auto dkw = [delta_band](std::size_t n) {
    return std::sqrt(std::log(4.0 / delta_band) / (2.0 * static_cast<double>(n)));
  };

  ModulusBand band;
  band.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  band.raw.assign(raw.begin(), raw.end());
  band.isotonic = IsotonicIncreasing(raw);
  band.delta_band = delta_band;
  band.dkw_inflation = costs.c10() * prevalence * 2.0 * dkw(n1) +
                       costs.c01() * (1.0 - prevalence) * 2.0 * dkw(n0);
  band.ceiling = costs.c10() * prevalence + costs.c01() * (1.0 - prevalence);
  band.upper.reserve(raw.size());
  for (double v : band.isotonic) {
    band.upper.push_back(std::min(v + band.dkw_inflation, band.ceiling));
  }
  return band;
}

double EvalBand(const ModulusBand& band, double eps) {
  if (band.upper.empty()) throw std::invalid_argument("empty modulus band");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be nonnegative");
  const auto it = std::lower_bound(band.eps_grid.begin(), band.eps_grid.end(), eps);
  if (it == band.eps_grid.end()) return band.upper.back();
  return band.upper[static_cast<std::size_t>(it - band.eps_grid.begin())];
}

ModulusBand BuildBand(const DomainStats& stats, const CostSpec& costs,
                      double delta_band) {
  const double lo = std::min(stats.cdf0.values().front(), stats.cdf1.values().front());
  const double hi = std::max(stats.cdf0.values().back(), stats.cdf1.values().back());
  const std::vector<double> eps = DefaultEpsGrid(hi - lo);
  const std::vector<double> raw =
      EmpiricalModulus(stats.cdf1, stats.cdf0, stats.prevalence, costs, eps);
  return ConservativeBand(raw, eps, stats.n1, stats.n0, stats.prevalence, costs,
                          delta_band);
}

void WriteBandCsv(const ModulusBand& band, std::ostream& out) {
  out << "eps,raw,upper\n";
  for (std::size_t i = 0; i < band.eps_grid.size(); ++i) {
    out << FormatReal(band.eps_grid[i]) << ',' << FormatReal(band.raw[i]) << ','
        << FormatReal(band.upper[i]) << '\n';
  }
}

}  // namespace threshcert
