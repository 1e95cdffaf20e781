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

#ifndef THRESHCERT_TESTS_TEST_UTIL_H_
#define THRESHCERT_TESTS_TEST_UTIL_H_

#include <random>
#include <string>
#include <vector>

#include "threshcert/data_model.h"

namespace threshcert::testing_util {

inline std::vector<PatientScore> Scores(const std::vector<std::pair<int, double>>& rows) {
  std::vector<PatientScore> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back({"p" + std::to_string(i), rows[i].first, rows[i].second});
  }
  return out;
}

// Two-class cohort of k patients with scores on a coarse lattice so ties
// occur. Both labels are always present.
inline std::vector<PatientScore> RandomScores(std::mt19937_64& rng, int k, int levels = 20) {
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::pair<int, double>> rows;
  for (int i = 0; i < k; ++i) {
    const int y = i == 0 ? 0 : (i == 1 ? 1 : static_cast<int>(coin(rng)));
    rows.emplace_back(y, level(rng) * 0.25 + (y == 1 ? 0.5 : 0.0));
  }
  return Scores(rows);
}

// Direct patient-loss average at threshold t (positive when s >= t).
inline double DirectRisk(const std::vector<PatientScore>& scores, double c10, double c01,
                         double t) {
  double loss = 0.0;
  for (const auto& p : scores) {
    const bool positive = p.s >= t;
    if (p.label == 1 && !positive) loss += c10;
    if (p.label == 0 && positive) loss += c01;
  }
  return loss / static_cast<double>(scores.size());
}

}  // namespace threshcert::testing_util

#endif  // THRESHCERT_TESTS_TEST_UTIL_H_
