/*
 * Copyright 2026 The mid Authors.
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

#ifndef MID_PARALLEL_H_
#define MID_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace mid {

// Worker count: hardware concurrency, capped by the MIDR_THREADS
// environment variable when it holds a positive integer.
std::size_t thread_count();

// Runs fn(i) for i in [0, n). Each index writes only its own outputs, so
// results do not depend on the number of threads. The first exception thrown
// by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mid

#endif  // MID_PARALLEL_H_
