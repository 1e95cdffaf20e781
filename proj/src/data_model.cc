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

#include "threshcert/data_model.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "threshcert/error.h"
#include "threshcert/io_util.h"

namespace threshcert {

std::string_view DomainName(Domain domain) {
  return domain == Domain::kInternal ? "internal" : "external";
}

Cohort::Cohort(std::vector<Patient> patients, Domain domain)
    : patients_(std::move(patients)), domain_(domain) {
  std::unordered_set<std::string> seen;
  seen.reserve(patients_.size());
  for (const Patient& p : patients_) {
    if (!seen.insert(p.id).second) {
      throw InputError(fmt::format("duplicate patient id '{}'", p.id));
    }
    if (p.label != 0 && p.label != 1) {
      throw InputError(fmt::format("non-binary label {} for patient '{}'",
                                   p.label, p.id));
    }
    if (p.instances.empty()) {
      throw InputError(fmt::format("patient '{}' has no instances", p.id));
    }
    for (double v : p.instances) {
      if (!std::isfinite(v)) {
        throw InputError(
            fmt::format("non-finite instance score for patient '{}'", p.id));
      }
    }
  }
}

std::size_t Cohort::num_instances() const {
  std::size_t total = 0;
  for (const Patient& p : patients_) total += p.instances.size();
  return total;
}

std::size_t Cohort::CountLabel(int label) const {
  return static_cast<std::size_t>(
      std::count_if(patients_.begin(), patients_.end(),
                    [label](const Patient& p) { return p.label == label; }));
}

Aggregator Aggregator::Quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument(
        fmt::format("quantile aggregator needs q in (0,1), got {}", q));
  }
  return Aggregator(Kind::kQuantile, q, 0);
}

Aggregator Aggregator::TopKMean(int k) {
  if (k < 1) {
    throw std::invalid_argument(
        fmt::format("top-k aggregator needs k >= 1, got {}", k));
  }
  return Aggregator(Kind::kTopKMean, 0.0, k);
}

Aggregator Aggregator::Parse(std::string_view text) {
  text = Trim(text);
  if (text == "mean") return Mean();
  if (text == "max") return Max();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    if (head == "quantile") {
      if (auto q = ParseReal(arg)) return Quantile(*q);
    } else if (head == "topk") {
      if (auto k = ParseInteger(arg)) return TopKMean(static_cast<int>(*k));
    }
  }
  throw std::invalid_argument(fmt::format(
      "unknown aggregator '{}' (expected mean|max|quantile:q|topk:k)", text));
}

std::string Aggregator::ToString() const {
  switch (kind_) {
    case Kind::kMean:
      return "mean";
    case Kind::kMax:
      return "max";
    case Kind::kQuantile:
      return fmt::format("quantile:{}", q_);
    case Kind::kTopKMean:
      return fmt::format("topk:{}", k_);
  }
  return "unknown";
}

double Aggregator::Apply(std::span<const double> values) const {
  if (values.empty()) {
    throw std::invalid_argument("cannot aggregate an empty instance list");
  }
  const std::size_t m = values.size();
  switch (kind_) {
    case Kind::kMean: {
      // Summed in sorted order so the result does not depend on how the
      // instances were listed.
      std::vector<double> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      return std::accumulate(sorted.begin(), sorted.end(), 0.0) /
             static_cast<double>(m);
    }
    case Kind::kMax:
      return *std::max_element(values.begin(), values.end());
    case Kind::kQuantile: {
      std::vector<double> sorted(values.begin(), values.end());
      auto rank = static_cast<std::size_t>(std::ceil(q_ * static_cast<double>(m)));
      rank = std::clamp<std::size_t>(rank, 1, m);
      std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
      return sorted[rank - 1];
    }
    case Kind::kTopKMean: {
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), m);
      std::vector<double> sorted(values.begin(), values.end());
      std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end(),
                        std::greater<>());
      // Summing the top-k in descending order keeps the result independent
      // of the input ordering.
      return std::accumulate(sorted.begin(), sorted.begin() + k, 0.0) /
             static_cast<double>(k);
    }
  }
  return 0.0;
}

CostSpec::CostSpec(double c10, double c01) : c10_(c10), c01_(c01) {
  if (!(c10 >= 0.0) || !(c01 >= 0.0) || !std::isfinite(c10) ||
      !std::isfinite(c01) || !(c10 + c01 > 0.0)) {
    throw std::invalid_argument(fmt::format(
        "costs must be finite, nonnegative and not both zero (c10={}, c01={})",
        c10, c01));
  }
}

CostSpec CostSpec::Parse(std::string_view text) {
  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    auto c10 = ParseReal(text.substr(0, comma));
    auto c01 = ParseReal(text.substr(comma + 1));
    if (c10 && c01) return CostSpec(*c10, *c01);
  }
  throw std::invalid_argument(
      fmt::format("costs must be given as c10,c01 (got '{}')", text));
}

Cohort ParseCohort(std::istream& in, Domain domain) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (view.empty()) continue;
    if (view != "patient_id,label,instance_score") {
      throw InputError(fmt::format(
          "row {}: expected header 'patient_id,label,instance_score', got '{}'",
          line_no, view));
    }
    have_header = true;
  }
  if (!have_header) throw InputError("empty file: no header row");

  std::vector<Patient> patients;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = Trim(line);
    if (view.empty()) continue;
    const auto c1 = view.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c2 == std::string_view::npos ||
        view.find(',', c2 + 1) != std::string_view::npos) {
      throw InputError(fmt::format("malformed row at row {}: '{}'", line_no, view));
    }
    const std::string id(Trim(view.substr(0, c1)));
    const std::string_view label_text = Trim(view.substr(c1 + 1, c2 - c1 - 1));
    const auto score = ParseReal(view.substr(c2 + 1));
    if (id.empty()) throw InputError(fmt::format("empty patient_id at row {}", line_no));
    if (label_text != "0" && label_text != "1") {
      throw InputError(fmt::format("non-binary label at row {}: '{}'", line_no,
                                   label_text));
    }
    if (!score || !std::isfinite(*score)) {
      throw InputError(fmt::format("malformed instance_score at row {}", line_no));
    }
    const int label = label_text == "1" ? 1 : 0;
    auto [it, inserted] = index.try_emplace(id, patients.size());
    if (inserted) {
      patients.push_back(Patient{id, label, {}});
    } else if (patients[it->second].label != label) {
      throw InputError(fmt::format(
          "conflicting labels for patient '{}' at row {}", id, line_no));
    }
    patients[it->second].instances.push_back(*score);
  }
  if (patients.empty()) throw InputError("empty file: no data rows");
  return Cohort(std::move(patients), domain);
}

Cohort IngestCohort(const std::filesystem::path& path, Domain domain) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot read '{}'", path.string()));
  return ParseCohort(in, domain);
}

void WriteCohortCsv(const Cohort& cohort, std::ostream& out) {
  out << "patient_id,label,instance_score\n";
  for (const Patient& p : cohort.patients()) {
    for (double v : p.instances) {
      out << p.id << ',' << p.label << ',' << FormatReal(v) << '\n';
    }
  }
}

std::vector<PatientScore> Aggregate(const Cohort& cohort, const Aggregator& agg) {
  std::vector<PatientScore> out;
  out.reserve(cohort.size());
  for (const Patient& p : cohort.patients()) {
    out.push_back(PatientScore{p.id, p.label, agg.Apply(p.instances)});
  }
  return out;
}

std::vector<double> ScoreValues(std::span<const PatientScore> scores) {
  std::vector<double> out;
  out.reserve(scores.size());
  for (const PatientScore& p : scores) out.push_back(p.s);
  return out;
}

}  // namespace threshcert
