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

#ifndef THRESHCERT_CERTIFICATE_H_
#define THRESHCERT_CERTIFICATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "threshcert/data_model.h"
#include "threshcert/empirical.h"
#include "threshcert/generalization.h"
#include "threshcert/shift.h"

namespace threshcert {

enum class CertificateMode { kPFrozen, kPQ };

std::string_view ModeName(CertificateMode mode);  // "P-frozen" or "PQ"
// Accepts "p-frozen" or "pq" in any case.
CertificateMode ParseMode(std::string_view text);

struct Contribution {
  std::string name;
  double value = 0.0;
  double percent = 0.0;  // of the augmented bound
};

struct ConfidenceLevels {
  double delta_val = 0.10;
  double delta_boot = 0.10;
  double delta_band = 0.10;
  // Union bound over the three events.
  double total() const { return delta_val + delta_boot + delta_band; }
};

struct Provenance {
  std::uint64_t seed = 0;
  int B = 0;
  std::string grid;
  std::string aggregator;
  std::string costs;
  std::string selector;
  std::string split;
};

struct CertificateInputs {
  double t_hat = 0.0;
  double gamma_val = 0.0;
  std::optional<ShiftReport> shift;  // absent in P-frozen mode
  double g_boot = 0.0;
  std::optional<double> external_risk_observed;
  std::optional<double> flip_rate;
  std::optional<DesignEffect> design_effect;
  ConfidenceLevels confidence;
  Provenance provenance;
};

struct Certificate {
  CertificateMode mode = CertificateMode::kPFrozen;
  double t_hat = 0.0;
  double val_risk = 0.0;
  double gamma_val = 0.0;
  double shift_term = 0.0;
  std::optional<ShiftReport> shift;
  double g_boot = 0.0;
  double base_bound = 0.0;       // val_risk + gamma_val + shift_term
  double augmented_bound = 0.0;  // base_bound + g_boot
  std::optional<double> external_risk_observed;
  std::optional<bool> holds;
  std::optional<double> flip_rate;
  std::optional<DesignEffect> design_effect;
  std::vector<Contribution> contributions;
  ConfidenceLevels confidence;
  Provenance provenance;
};

// Reads the validation risk at t_hat from the curve; t_hat must be one of its
// grid points. Mode is PQ exactly when a shift report is supplied.
Certificate BuildCertificate(const RiskCurve& val_curve,
                             const CertificateInputs& inputs);

struct CertificateCheck {
  double observed = 0.0;
  bool holds = false;
  double slack = 0.0;  // augmented bound minus observed
};

// Empirical external risk at t_hat against the augmented bound.
CertificateCheck ValidateCertificate(const Certificate& cert,
                                     std::span<const PatientScore> q_scores,
                                     const CostSpec& costs);

nlohmann::ordered_json ToJson(const ShiftReport& report);
nlohmann::ordered_json ToJson(const DesignEffect& effect);
nlohmann::ordered_json ToJson(const Certificate& cert);

// Pretty JSON with every floating-point value at 17 significant digits and
// non-finite values as null. Ends with a newline.
std::string DumpJson(const nlohmann::ordered_json& value);

}  // namespace threshcert

#endif  // THRESHCERT_CERTIFICATE_H_
