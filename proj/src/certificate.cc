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

#include "threshcert/certificate.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "threshcert/io_util.h"

namespace threshcert {

using nlohmann::ordered_json;

std::string_view ModeName(CertificateMode mode) {
  return mode == CertificateMode::kPFrozen ? "P-frozen" : "PQ";
}

CertificateMode ParseMode(std::string_view text) {
  std::string lower(Trim(text));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "p-frozen") return CertificateMode::kPFrozen;
  if (lower == "pq") return CertificateMode::kPQ;
  throw std::invalid_argument(
      fmt::format("unknown mode '{}' (expected p-frozen|pq)", text));
}

Certificate BuildCertificate(const RiskCurve& val_curve,
                             const CertificateInputs& inputs) {
  const auto index = val_curve.grid.IndexOf(inputs.t_hat);
  if (!index) {
    throw std::invalid_argument(
        fmt::format("t_hat {} is not on the validation grid", FormatReal(inputs.t_hat)));
  }
  if (!(inputs.gamma_val >= 0.0) || !(inputs.g_boot >= 0.0)) {
    throw std::invalid_argument("certificate components must be nonnegative");
  }
  Certificate cert;
  cert.mode = inputs.shift ? CertificateMode::kPQ : CertificateMode::kPFrozen;
  cert.t_hat = inputs.t_hat;
  cert.val_risk = val_curve.risks[*index];
  cert.gamma_val = inputs.gamma_val;
  cert.shift = inputs.shift;
  cert.shift_term = inputs.shift ? inputs.shift->shift_weighted : 0.0;
  cert.g_boot = inputs.g_boot;
  cert.base_bound = cert.val_risk + cert.gamma_val + cert.shift_term;
  cert.augmented_bound = cert.base_bound + cert.g_boot;
  cert.external_risk_observed = inputs.external_risk_observed;
  if (cert.external_risk_observed) {
    cert.holds = *cert.external_risk_observed <= cert.augmented_bound;
  }
  cert.flip_rate = inputs.flip_rate;
  cert.design_effect = inputs.design_effect;
  cert.confidence = inputs.confidence;
  cert.provenance = inputs.provenance;

  const std::pair<const char*, double> parts[] = {{"val_risk", cert.val_risk},
                                                  {"gamma_val", cert.gamma_val},
                                                  {"shift", cert.shift_term},
                                                  {"g_boot", cert.g_boot}};
  for (const auto& [name, value] : parts) {
    const double pct =
        cert.augmented_bound > 0.0 ? 100.0 * value / cert.augmented_bound : 0.0;
    cert.contributions.push_back({name, value, pct});
  }
  return cert;
}

CertificateCheck ValidateCertificate(const Certificate& cert,
                                     std::span<const PatientScore> q_scores,
                                     const CostSpec& costs) {
  const DomainStats q = MakeDomainStats(q_scores);
  CertificateCheck check;
  check.observed = PopulationRisk(q, costs, cert.t_hat);
  check.holds = check.observed <= cert.augmented_bound;
  check.slack = cert.augmented_bound - check.observed;
  return check;
}

ordered_json ToJson(const ShiftReport& r) {
  return ordered_json{{"t", r.t},
                      {"delta_pi", r.delta_pi},
                      {"signed_gap_1", r.signed_gap_1},
                      {"signed_gap_0", r.signed_gap_0},
                      {"d1", r.d1},
                      {"d0", r.d0},
                      {"shift_weighted", r.shift_weighted},
                      {"kolmogorov_1", r.kolmogorov_1},
                      {"kolmogorov_0", r.kolmogorov_0},
                      {"tv_labels", r.tv_labels},
                      {"global_bound", r.global_bound}};
}

ordered_json ToJson(const DesignEffect& d) {
  return ordered_json{{"n_raw", d.n_raw},
                      {"n_patients", d.n_patients},
                      {"mean_cluster_size", d.mean_cluster_size},
                      {"icc", d.icc},
                      {"deff", d.deff},
                      {"n_eff", d.n_eff}};
}

ordered_json ToJson(const Certificate& c) {
  ordered_json j;
  j["t_hat"] = c.t_hat;
  j["components"] = ordered_json{{"val_risk", c.val_risk},
                                 {"gamma_val", c.gamma_val},
                                 {"shift", c.shift_term},
                                 {"g_boot", c.g_boot}};
  j["bounds"] = ordered_json{{"base", c.base_bound}, {"augmented", c.augmented_bound}};
  ordered_json contrib = ordered_json::array();
  for (const auto& part : c.contributions) {
    contrib.push_back({{"name", part.name}, {"value", part.value}, {"percent", part.percent}});
  }
  j["contributions"] = std::move(contrib);

  ordered_json diag;
  diag["flip_rate"] = c.flip_rate ? ordered_json(*c.flip_rate) : ordered_json(nullptr);
  diag["shift_report"] = c.shift ? ToJson(*c.shift) : ordered_json(nullptr);
  diag["design_effect"] =
      c.design_effect ? ToJson(*c.design_effect) : ordered_json(nullptr);
  j["diagnostics"] = std::move(diag);

  if (c.external_risk_observed) {
    j["external"] = ordered_json{{"observed_risk", *c.external_risk_observed},
                                 {"holds", *c.holds},
                                 {"slack", c.augmented_bound - *c.external_risk_observed}};
  }
  j["confidence"] = ordered_json{{"delta_val", c.confidence.delta_val},
                                 {"delta_boot", c.confidence.delta_boot},
                                 {"delta_band", c.confidence.delta_band},
                                 {"union_total", c.confidence.total()}};
  j["mode"] = ModeName(c.mode);
  j["provenance"] = ordered_json{{"seed", c.provenance.seed},
                                 {"B", c.provenance.B},
                                 {"grid", c.provenance.grid},
                                 {"aggregator", c.provenance.aggregator},
                                 {"costs", c.provenance.costs},
                                 {"selector", c.provenance.selector},
                                 {"split", c.provenance.split}};
  return j;
}

namespace {

void Dump(const ordered_json& v, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case ordered_json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, child] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + ordered_json(key).dump() + ": ";
        Dump(child, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",\n";
        out += inner;
        Dump(v[i], indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? FormatReal(x) : std::string("null");
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string DumpJson(const ordered_json& value) {
  std::string out;
  Dump(value, 0, out);
  out += '\n';
  return out;
}

}  // namespace threshcert
