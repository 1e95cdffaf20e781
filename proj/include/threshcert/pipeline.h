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

#ifndef THRESHCERT_PIPELINE_H_
#define THRESHCERT_PIPELINE_H_

#include <optional>
#include <span>
#include <vector>

#include "threshcert/bootstrap.h"
#include "threshcert/certificate.h"
#include "threshcert/data_model.h"
#include "threshcert/empirical.h"
#include "threshcert/generalization.h"
#include "threshcert/modulus.h"
#include "threshcert/selection.h"

namespace threshcert {

struct PipelineOptions {
  CostSpec costs{1.0, 1.0};
  GridMode grid = GridMode::Midpoints();
  SelectorKind selector = SelectorKind::Erm();
  BootstrapConfig boot;
  GammaSpec gamma;
  double delta_band = 0.10;
  CertificateMode mode = CertificateMode::kPFrozen;
};

struct PipelineResult {
  Certificate certificate;
  RiskCurve train_curve;
  RiskCurve val_curve;
  BootstrapSummary bootstrap;
  ModulusBand band;
};

// Selection-honest certificate: the threshold and its bootstrap come from the
// training scores; the risk, generalization term, band and flip rate come
// from the validation scores on the training grid. External scores, when
// given, add the observed external risk, and in PQ mode the shift term.
PipelineResult CertifyScores(std::span<const PatientScore> train,
                             std::span<const PatientScore> val,
                             std::optional<std::span<const PatientScore>> external,
                             const PipelineOptions& options,
                             CertificateInputs extra = {});

// Label-stratified 50/50 patient split: within each label a seeded shuffle,
// the first half (rounded down) goes to training.
std::pair<Cohort, Cohort> SplitCohort(const Cohort& cohort, std::uint64_t seed);

}  // namespace threshcert

#endif  // THRESHCERT_PIPELINE_H_
