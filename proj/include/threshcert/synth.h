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

#ifndef THRESHCERT_SYNTH_H_
#define THRESHCERT_SYNTH_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "threshcert/data_model.h"
#include "threshcert/empirical.h"

namespace threshcert {

struct NoiseSpec {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
};

// Two-basin patient mixture. Index 0/1 of the pairs is the label.
struct MixtureSpec {
  double sharp_fraction = 0.0;
  std::array<double, 2> sharp_mu{0.0, 0.0};
  std::array<double, 2> sharp_sd{1.0, 1.0};
  std::array<double, 2> flat_mu{0.0, 0.0};
  double flat_sd = 1.0;
  NoiseSpec noise;
  double prevalence = 0.5;

  void Validate() const;
};

struct HierarchySpec {
  int n_patients = 180;
  int cells_per_patient = 800;
  std::uint64_t seed = 0;
};

MixtureSpec Fig1P();
MixtureSpec Fig1Q();
inline constexpr int kFig1TrainPatients = 180;
inline constexpr int kFig1ExternalPatients = 6000;
inline constexpr int kFig1Cells = 800;

struct Preset {
  MixtureSpec mixture;
  HierarchySpec hierarchy;
  Domain domain;
};

// "fig1-P" (180 patients) or "fig1-Q" (6000 patients), 800 cells each.
Preset ParsePreset(std::string_view name, std::uint64_t seed);

// Patient i draws its label (Bernoulli(prevalence)), its basin (sharp with
// probability sharp_fraction) and its cells Normal(mu_label, sd) from its own
// engine. Each cell s then gets Gaussian noise with sd
// amplitude * exp(-(s - center)^2 / (2 width^2)).
Cohort GenerateCohort(const MixtureSpec& mix, const HierarchySpec& hier,
                      Domain domain);

// Aggregated patient scores of the cohort GenerateCohort would produce,
// without keeping the cells.
std::vector<PatientScore> GenerateScores(const MixtureSpec& mix,
                                         const HierarchySpec& hier,
                                         const Aggregator& agg);

struct OracleStats {
  DomainStats stats;
  double t_star = 0.0;     // lowest ERM minimizer on the sample's midpoints
  double min_risk = 0.0;
};

// Large-sample stand-in for the population: n_oracle aggregated patients.
OracleStats ComputeOracle(const MixtureSpec& mix, const Aggregator& agg,
                          const CostSpec& costs, std::size_t n_oracle,
                          int cells_per_patient, std::uint64_t seed);

}  // namespace threshcert

#endif  // THRESHCERT_SYNTH_H_
