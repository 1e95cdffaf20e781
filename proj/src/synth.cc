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

#include "threshcert/synth.h"

#include <fmt/format.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "threshcert/io_util.h"
#include "threshcert/parallel.h"
#include "threshcert/random.h"

namespace threshcert {
namespace {

struct DrawnPatient {
  int label = 0;
  std::vector<double> cells;
};

void DrawPatient(const MixtureSpec& mix, int cells, std::uint64_t seed,
                 std::size_t index, DrawnPatient& out) {
  RandomEngine rng = MakeEngine(seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.label = unit(rng) < mix.prevalence ? 1 : 0;
  const bool sharp = unit(rng) < mix.sharp_fraction;
  const double mu = sharp ? mix.sharp_mu[out.label] : mix.flat_mu[out.label];
  const double sd = sharp ? mix.sharp_sd[out.label] : mix.flat_sd;
  const NoiseSpec& nz = mix.noise;
  const double inv_two_w2 = 1.0 / (2.0 * nz.width * nz.width);
  out.cells.resize(static_cast<std::size_t>(cells));
  for (double& s : out.cells) {
    s = mu + sd * normal(rng);
    const double noise_sd = nz.amplitude * std::exp(-(s - nz.center) * (s - nz.center) * inv_two_w2);
    s += noise_sd * normal(rng);
  }
}

void CheckHierarchy(const HierarchySpec& hier) {
  if (hier.n_patients < 1 || hier.cells_per_patient < 1) {
    throw std::invalid_argument("hierarchy counts must be positive");
  }
}

}  // namespace

void MixtureSpec::Validate() const {
  if (!(sharp_fraction >= 0.0 && sharp_fraction <= 1.0)) {
    throw std::invalid_argument("sharp_fraction must be in [0,1]");
  }
  if (!(sharp_sd[0] > 0.0 && sharp_sd[1] > 0.0 && flat_sd > 0.0)) {
    throw std::invalid_argument("mixture sds must be positive");
  }
  if (!(noise.width > 0.0) || !(noise.amplitude >= 0.0)) {
    throw std::invalid_argument("noise needs width > 0 and amplitude >= 0");
  }
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    throw std::invalid_argument("prevalence must be in (0,1)");
  }
}

MixtureSpec Fig1P() {
  MixtureSpec m;
  m.sharp_fraction = 0.12;
  m.sharp_mu = {1.9, 2.1};
  m.sharp_sd = {0.15, 0.13};
  m.flat_mu = {2.5, 4.5};
  m.flat_sd = 1.0;
  m.noise = {2.0, 0.90, 0.28};
  m.prevalence = 0.5;
  return m;
}

MixtureSpec Fig1Q() {
  MixtureSpec m;
  m.sharp_fraction = 0.12;
  m.sharp_mu = {1.95, 2.05};
  m.sharp_sd = {0.16, 0.14};
  m.flat_mu = {2.55, 4.35};
  m.flat_sd = 1.05;
  m.noise = {1.8, 2.00, 0.32};
  m.prevalence = 0.5;
  return m;
}

Preset ParsePreset(std::string_view name, std::uint64_t seed) {
  name = Trim(name);
  if (name == "fig1-P") {
    return {Fig1P(), {kFig1TrainPatients, kFig1Cells, seed}, Domain::kInternal};
  }
  if (name == "fig1-Q") {
    return {Fig1Q(), {kFig1ExternalPatients, kFig1Cells, seed}, Domain::kExternal};
  }
  throw std::invalid_argument(
      fmt::format("unknown preset '{}' (expected fig1-P|fig1-Q)", name));
}

Cohort GenerateCohort(const MixtureSpec& mix, const HierarchySpec& hier,
                      Domain domain) {
  mix.Validate();
  CheckHierarchy(hier);
  const char tag = domain == Domain::kInternal ? 'P' : 'Q';
  std::vector<Patient> patients(static_cast<std::size_t>(hier.n_patients));
  ParallelFor(patients.size(), [&](std::size_t i) {
    DrawnPatient drawn;
    DrawPatient(mix, hier.cells_per_patient, hier.seed, i, drawn);
    patients[i] = Patient{fmt::format("{}{}-{:06d}", tag, hier.seed, i + 1),
                          drawn.label, std::move(drawn.cells)};
  });
  return Cohort(std::move(patients), domain);
}

std::vector<PatientScore> GenerateScores(const MixtureSpec& mix,
                                         const HierarchySpec& hier,
                                         const Aggregator& agg) {
  mix.Validate();
  CheckHierarchy(hier);
  std::vector<PatientScore> scores(static_cast<std::size_t>(hier.n_patients));
  ParallelFor(scores.size(), [&](std::size_t i) {
    DrawnPatient drawn;
    DrawPatient(mix, hier.cells_per_patient, hier.seed, i, drawn);
    scores[i] = PatientScore{std::string(), drawn.label, agg.Apply(drawn.cells)};
  });
  return scores;
}

OracleStats ComputeOracle(const MixtureSpec& mix, const Aggregator& agg,
                          const CostSpec& costs, std::size_t n_oracle,
                          int cells_per_patient, std::uint64_t seed) {
  mix.Validate();
  if (n_oracle < 2) throw std::invalid_argument("oracle needs at least 2 patients");
  std::vector<int> labels(n_oracle);
  std::vector<double> values(n_oracle);
  ParallelFor(n_oracle, [&](std::size_t i) {
    thread_local DrawnPatient drawn;
    DrawPatient(mix, cells_per_patient, seed, i, drawn);
    labels[i] = drawn.label;
    values[i] = agg.Apply(drawn.cells);
  });
  std::vector<double> s0;
  std::vector<double> s1;
  for (std::size_t i = 0; i < n_oracle; ++i) (labels[i] == 1 ? s1 : s0).push_back(values[i]);
  if (s0.empty() || s1.empty()) throw std::invalid_argument("oracle sample lost a class");

  OracleStats out{DomainStats{static_cast<double>(s1.size()) / static_cast<double>(n_oracle),
                              LeftLimitCdf(s0), LeftLimitCdf(s1), s0.size(), s1.size()},
                  0.0, 0.0};
  const ThresholdGrid grid = MakeGrid(std::span<const double>(values), GridMode::Midpoints());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = PopulationRisk(out.stats, costs, grid[i]);
    if (i == 0 || r < out.min_risk) {
      out.min_risk = r;
      out.t_star = grid[i];
    }
  }
  return out;
}

}  // namespace threshcert
