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

#include "threshcert/bootstrap.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "threshcert/error.h"
#include "threshcert/io_util.h"
#include "threshcert/parallel.h"
#include "threshcert/random.h"

namespace threshcert {
namespace {

void CheckConfig(const BootstrapConfig& cfg) {
  if (cfg.B < 1) throw std::invalid_argument("bootstrap needs B >= 1");
  if (!(cfg.delta_boot > 0.0 && cfg.delta_boot < 1.0)) {
    throw std::invalid_argument(
        fmt::format("delta_boot must be in (0,1), got {}", cfg.delta_boot));
  }
}

// 1-based order statistic ceil(level * n) of an ascending sample.
double OrderStatistic(std::vector<double> values, double level) {
  std::sort(values.begin(), values.end());
  const double pos = std::ceil(level * static_cast<double>(values.size()) - 1e-9);
  const std::size_t k =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(pos, 1.0)), 1,
                              values.size());
  return values[k - 1];
}

}  // namespace

std::vector<std::size_t> ResampleIndices(std::span<const PatientScore> scores,
                                         std::uint64_t seed, std::size_t b) {
  const std::size_t n = scores.size();
  if (n == 0) throw std::invalid_argument("cannot resample an empty cohort");
  const std::uint64_t replicate_seed = DeriveSeed(seed, b);
  std::vector<std::size_t> idx(n);
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    RandomEngine rng = MakeEngine(replicate_seed, static_cast<std::uint64_t>(attempt));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    bool has0 = false;
    bool has1 = false;
    for (std::size_t& i : idx) {
      i = pick(rng);
      (scores[i].label == 1 ? has1 : has0) = true;
    }
    if (has0 && has1) return idx;
  }
  throw InputError("class-degenerate bootstrap");
}

RiskCurve ReplicateCurve(std::span<const PatientScore> scores,
                         const CostSpec& costs, const ThresholdGrid& grid,
                         std::uint64_t seed, std::size_t b) {
  const std::vector<std::size_t> idx = ResampleIndices(scores, seed, b);
  std::vector<double> s0;
  std::vector<double> s1;
  for (std::size_t i : idx) (scores[i].label == 1 ? s1 : s0).push_back(scores[i].s);
  DomainStats stats{static_cast<double>(s1.size()) / static_cast<double>(idx.size()),
                    LeftLimitCdf(s0), LeftLimitCdf(s1), s0.size(), s1.size()};
  return EmpiricalRiskCurve(std::move(stats), costs, grid);
}

void SummarizeDeviations(BootstrapSummary& summary, double delta_boot,
                         bool centered_quantile) {
  const std::size_t B = summary.t_star.size();
  if (B == 0) throw std::invalid_argument("no bootstrap replicates");
  double total = 0.0;
  for (double t : summary.t_star) total += t - summary.t_hat;
  summary.b_hat = total / static_cast<double>(B);
  std::vector<double> dev(B);
  for (std::size_t b = 0; b < B; ++b) {
    const double d = summary.t_star[b] - summary.t_hat;
    dev[b] = std::abs(centered_quantile ? d - summary.b_hat : d);
  }
  summary.q_radius = OrderStatistic(std::move(dev), 1.0 - delta_boot);
  summary.radius = std::abs(summary.b_hat) + summary.q_radius;
}

BootstrapSummary BootstrapThresholds(std::span<const PatientScore> scores,
                                     const CostSpec& costs,
                                     const ThresholdGrid& grid,
                                     const BootstrapConfig& cfg,
                                     const ThresholdRule& rule) {
  CheckConfig(cfg);
  BootstrapSummary summary;
  summary.t_hat = rule(EmpiricalRiskCurve(scores, costs, grid));
  summary.t_star.assign(static_cast<std::size_t>(cfg.B), 0.0);
  ParallelFor(summary.t_star.size(), [&](std::size_t b) {
    summary.t_star[b] = rule(ReplicateCurve(scores, costs, grid, cfg.seed, b));
  });
  SummarizeDeviations(summary, cfg.delta_boot, cfg.centered_quantile);
  return summary;
}

std::vector<std::vector<double>> BootstrapRiskCurves(
    std::span<const PatientScore> scores, const CostSpec& costs,
    const ThresholdGrid& grid, const BootstrapConfig& cfg) {
  CheckConfig(cfg);
  std::vector<std::vector<double>> curves(static_cast<std::size_t>(cfg.B));
  ParallelFor(curves.size(), [&](std::size_t b) {
    curves[b] = ReplicateCurve(scores, costs, grid, cfg.seed, b).risks;
  });
  return curves;
}

double GBoot(BootstrapSummary& summary, const ModulusBand& band) {
  summary.g_boot = EvalBand(band, summary.radius);
  return summary.g_boot;
}

double FlipRate(std::span<const PatientScore> test_scores, double t_hat,
                std::span<const double> t_star) {
  if (test_scores.empty()) throw std::invalid_argument("flip rate needs test patients");
  if (t_star.empty()) throw std::invalid_argument("flip rate needs replicates");
  std::size_t flips = 0;
  for (const PatientScore& p : test_scores) {
    const bool base = p.s >= t_hat;
    for (double t : t_star) flips += (p.s >= t) != base;
  }
  return static_cast<double>(flips) /
         (static_cast<double>(test_scores.size()) * static_cast<double>(t_star.size()));
}

InstabilityMap InstabilityFromCurves(const ThresholdGrid& grid,
                                     const std::vector<std::vector<double>>& curves,
                                     int smoothing_window) {
  const std::size_t n = grid.size();
  if (n < 3) throw std::invalid_argument("instability map needs >= 3 grid points");
  if (curves.empty()) throw std::invalid_argument("instability map needs replicates");
  if (smoothing_window < 1) throw std::invalid_argument("smoothing window must be >= 1");
  for (const auto& c : curves) {
    if (c.size() != n) throw std::invalid_argument("replicate curve off the grid");
  }
  const double B = static_cast<double>(curves.size());

  std::vector<double> mean(n, 0.0);
  std::vector<double> sd(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[i];
    mean[i] = sum / B;
    if (curves.size() > 1) {
      double ss = 0.0;
      for (const auto& c : curves) ss += (c[i] - mean[i]) * (c[i] - mean[i]);
      sd[i] = std::sqrt(ss / (B - 1.0));
    }
  }

  std::vector<double> kappa(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    kappa[i] = std::abs(mean[i - 1] - 2.0 * mean[i] + mean[i + 1]);
  }
  kappa[0] = kappa[1];
  kappa[n - 1] = kappa[n - 2];
  const double kmax = *std::max_element(kappa.begin(), kappa.end());
  for (double& k : kappa) k = kmax > 0.0 ? k / kmax : 1.0;

  InstabilityMap map{grid, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) map.raw[i] = sd[i] * kappa[i];

  const std::ptrdiff_t half = smoothing_window / 2;
  std::vector<double> smooth(n);
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                       i + half);
    double sum = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) sum += map.raw[static_cast<std::size_t>(j)];
    smooth[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  const auto [mn, mx] = std::minmax_element(smooth.begin(), smooth.end());
  const double lo = *mn;
  const double span = *mx - lo;
  for (std::size_t i = 0; i < n; ++i) {
    map.values[i] = span > 0.0 ? (smooth[i] - lo) / span : 0.0;
  }
  return map;
}

InstabilityMap ComputeInstabilityMap(std::span<const PatientScore> scores,
                                     const CostSpec& costs,
                                     const ThresholdGrid& grid,
                                     const BootstrapConfig& cfg,
                                     int smoothing_window) {
  return InstabilityFromCurves(grid, BootstrapRiskCurves(scores, costs, grid, cfg),
                               smoothing_window);
}

void WriteReplicatesCsv(const BootstrapSummary& summary, std::ostream& out) {
  out << "b,t_star\n";
  for (std::size_t b = 0; b < summary.t_star.size(); ++b) {
    out << b + 1 << ',' << FormatReal(summary.t_star[b]) << '\n';
  }
}

void WriteInstabilityCsv(const InstabilityMap& map, std::ostream& out) {
  out << "threshold,raw,value\n";
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    out << FormatReal(map.grid[i]) << ',' << FormatReal(map.raw[i]) << ','
        << FormatReal(map.values[i]) << '\n';
  }
}

}  // namespace threshcert
