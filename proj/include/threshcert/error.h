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

#ifndef THRESHCERT_ERROR_H_
#define THRESHCERT_ERROR_H_

#include <stdexcept>
#include <string>

namespace threshcert {

// Malformed or inconsistent input data (CSV schema, labels, degenerate
// cohorts). The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A constrained threshold rule has no feasible point on the grid. The CLI
// maps this to exit code 3.
class InfeasibleConstraint : public std::runtime_error {
 public:
  InfeasibleConstraint(const std::string& what, double best_achievable)
      : std::runtime_error(what), best_achievable_(best_achievable) {}

  double best_achievable() const { return best_achievable_; }

 private:
  double best_achievable_;
};

}  // namespace threshcert

#endif  // THRESHCERT_ERROR_H_
