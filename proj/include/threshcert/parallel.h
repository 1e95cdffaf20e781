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

#ifndef THRESHCERT_PARALLEL_H_
#define THRESHCERT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace threshcert {

// Number of worker threads used by ParallelFor. Defaults to the value of the
// THRESHCERT_THREADS environment variable, or the hardware concurrency.
int ThreadCount();

// Overrides the worker count; 0 restores the default.
void SetThreadCount(int threads);

// Calls fn(i) for every i in [0, n). Work is split into contiguous chunks;
// callers write results into index-addressed slots so the output does not
// depend on scheduling. If any call throws, the exception from the lowest
// failing index is rethrown after all workers join.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace threshcert

#endif  // THRESHCERT_PARALLEL_H_
