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

#include "threshcert/pipeline.h"

#include <algorithm>
#include <random>

#include "threshcert/error.h"
#include "threshcert/random.h"
#include "threshcert/shift.h"

namespace threshcert {

PipelineResult CertifyScores(std::span<const PatientScore> train,
                             std::span<const PatientScore> val,
                             std::optional<std::span<const PatientScore>> external,
                             const PipelineOptions& options,
                             CertificateInputs extra) {
  const ThresholdGrid grid = MakeGrid(train, options.grid);
  RiskCurve train_curve = EmpiricalRiskCurve(train, options.costs, grid);
  const double t_hat = SelectThreshold(train_curve, options.selector);
  BootstrapSummary boot = BootstrapThresholds(train, options.costs, grid, options.boot,
                                              MakeRule(options.selector));

  RiskCurve val_curve = EmpiricalRiskCurve(val, options.costs, grid);
  const DomainStats& vs = val_curve.stats;
  ModulusBand band = BuildBand(vs, options.costs, options.delta_band);
  GBoot(boot, band);

  extra.t_hat = t_hat;
  extra.gamma_val = GammaVal(options.gamma, vs.n1, vs.n0, vs.prevalence, options.costs);
  extra.g_boot = boot.g_boot;
  extra.flip_rate = FlipRate(val, t_hat, boot.t_star);
  extra.confidence.delta_val = options.gamma.delta_val;
  extra.confidence.delta_boot = options.boot.delta_boot;
  extra.confidence.delta_band = options.delta_band;
  if (external) {
    const DomainStats q = MakeDomainStats(*external);
    extra.external_risk_observed = PopulationRisk(q, options.costs, t_hat);
    if (options.mode == CertificateMode::kPQ) {
      extra.shift = ShiftAt(t_hat, vs, q, options.costs);
    }
  } else if (options.mode == CertificateMode::kPQ) {
    throw InputError("PQ mode needs external scores");
  }
  Certificate cert = BuildCertificate(val_curve, extra);
  return {std::move(cert), std::move(train_curve), std::move(val_curve),
          std::move(boot), std::move(band)};
}

std::pair<Cohort, Cohort> SplitCohort(const Cohort& cohort, std::uint64_t seed) {
  std::vector<Patient> train;
  std::vector<Patient> val;
  for (int label = 0; label <= 1; ++label) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
      if (cohort.patients()[i].label == label) idx.push_back(i);
    }
    RandomEngine rng = MakeEngine(seed, 0x5eed0000ULL + static_cast<unsigned>(label));
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t half = idx.size() / 2;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < half ? train : val).push_back(cohort.patients()[idx[k]]);
    }
  }
  return {Cohort(std::move(train), cohort.domain()), Cohort(std::move(val), cohort.domain())};
}

}  // namespace threshcert
