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

#ifndef THRESHCERT_ISOTONIC_H_
#define THRESHCERT_ISOTONIC_H_

#include <span>
#include <vector>

namespace threshcert {

// Least-squares nondecreasing fit by pool-adjacent-violators. Weights default
// to 1 and must be positive when given.
std::vector<double> IsotonicIncreasing(std::span<const double> y,
                                       std::span<const double> weights = {});

}  // namespace threshcert

#endif  // THRESHCERT_ISOTONIC_H_
