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

#include "threshcert/isotonic.h"

#include <stdexcept>

namespace threshcert {

std::vector<double> IsotonicIncreasing(std::span<const double> y,
                                       std::span<const double> weights) {
  if (!weights.empty() && weights.size() != y.size()) {
    throw std::invalid_argument("isotonic weights must match the values");
  }
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> stack;
  stack.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0)) throw std::invalid_argument("isotonic weights must be positive");
    stack.push_back({y[i], w, 1});
    while (stack.size() > 1 && stack[stack.size() - 2].mean > stack.back().mean) {
      const Block top = stack.back();
      stack.pop_back();
      Block& below = stack.back();
      const double total = below.weight + top.weight;
      below.mean = (below.mean * below.weight + top.mean * top.weight) / total;
      below.weight = total;
      below.count += top.count;
    }
  }
  std::vector<double> fit;
  fit.reserve(y.size());
  for (const Block& b : stack) fit.insert(fit.end(), b.count, b.mean);
  return fit;
}

}  // namespace threshcert
