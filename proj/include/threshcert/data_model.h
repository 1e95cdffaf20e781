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

#ifndef THRESHCERT_DATA_MODEL_H_
#define THRESHCERT_DATA_MODEL_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace threshcert {

enum class Domain { kInternal, kExternal };

std::string_view DomainName(Domain domain);

struct InstanceScore {
  std::string patient_id;
  double value = 0.0;
};

struct Patient {
  std::string id;
  int label = 0;  // 0 or 1
  std::vector<double> instances;
};

// A set of labelled patients from one domain. Validated on construction:
// unique ids, binary labels, nonempty finite instance lists. Immutable.
class Cohort {
 public:
  Cohort(std::vector<Patient> patients, Domain domain);

  const std::vector<Patient>& patients() const { return patients_; }
  Domain domain() const { return domain_; }
  std::size_t size() const { return patients_.size(); }
  std::size_t num_instances() const;
  std::size_t CountLabel(int label) const;

 private:
  std::vector<Patient> patients_;
  Domain domain_;
};

// Map from a patient's instance scores to one patient score.
class Aggregator {
 public:
  enum class Kind { kMean, kQuantile, kMax, kTopKMean };

  static Aggregator Mean() { return Aggregator(Kind::kMean, 0.0, 0); }
  static Aggregator Max() { return Aggregator(Kind::kMax, 0.0, 0); }
  static Aggregator Quantile(double q);
  static Aggregator TopKMean(int k);

  // Accepts "mean", "max", "quantile:<q>", "topk:<k>".
  static Aggregator Parse(std::string_view text);

  Kind kind() const { return kind_; }
  double q() const { return q_; }
  int k() const { return k_; }

  // Inverse of Parse.
  std::string ToString() const;

  // Aggregates a nonempty list of values. Quantile uses the order statistic
  // at 1-based index ceil(q * m); TopKMean with k > m averages everything.
  double Apply(std::span<const double> values) const;

  bool operator==(const Aggregator&) const = default;

 private:
  Aggregator(Kind kind, double q, int k) : kind_(kind), q_(q), k_(k) {}

  Kind kind_;
  double q_;
  int k_;
};

// Misclassification costs: c10 for a false negative, c01 for a false positive.
class CostSpec {
 public:
  CostSpec(double c10, double c01);

  // Accepts "c10,c01".
  static CostSpec Parse(std::string_view text);

  double c10() const { return c10_; }
  double c01() const { return c01_; }

 private:
  double c10_;
  double c01_;
};

struct PatientScore {
  std::string patient_id;
  int label = 0;
  double s = 0.0;
};

// Reads `patient_id,label,instance_score` rows (header required). Errors are
// reported as InputError with the 1-based file line number.
Cohort IngestCohort(const std::filesystem::path& path, Domain domain);
Cohort ParseCohort(std::istream& in, Domain domain);

void WriteCohortCsv(const Cohort& cohort, std::ostream& out);

std::vector<PatientScore> Aggregate(const Cohort& cohort, const Aggregator& agg);

std::vector<double> ScoreValues(std::span<const PatientScore> scores);

}  // namespace threshcert

#endif  // THRESHCERT_DATA_MODEL_H_
