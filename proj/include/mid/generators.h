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

// Deterministic synthetic scenarios and the analytic functions behind them.
//
// All generators draw from std::mt19937_64 seeded with the caller's seed and
// use the standard library's uniform_real_distribution and
// normal_distribution. Output is bit-identical for a given (n, seed,
// parameters) on one standard library implementation.

#ifndef MID_GENERATORS_H_
#define MID_GENERATORS_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "mid/dataset.h"
#include "mid/predictor.h"

namespace mid {

inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 + std::uniform_real_distribution/std::normal_distribution";

// Ten independent Uniform[0,1] features x1..x10. Predictions are
// 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 plus N(0, noise_sd^2).
LabeledData gen_friedman1(std::size_t n, std::uint64_t seed, double noise_sd = 0.0);

// Two strongly correlated features (x1, x2) = (U + Z1, U + Z2) with
// U ~ Uniform[0,1] and Z1, Z2 ~ N(0, 0.05^2).
Dataset gen_correlated_pair(std::size_t n, std::uint64_t seed);

// Points uniform in [-1,1]^d labelled 1 inside the centred ball whose volume
// is half the cube's and 2 outside. Features are x1..xd. From d = 4 on the
// radius exceeds 1 and the cube clips the ball, so class 1 holds less than
// half of the points.
LabeledData gen_circle(std::size_t n, std::size_t d, std::uint64_t seed);

enum class BuiltinFunction { kFriedman1, kStabilityA, kStabilityB };

BuiltinFunction parse_builtin(std::string_view name);
std::string_view builtin_name(BuiltinFunction fn);

// Evaluates a builtin function on the leading numeric columns of `rows`.
//   friedman1:   first five columns
//   stability_a: x1 + x2^2
//   stability_b: stability_a + 10 (x1 - x2)^3
PredictionVector eval_builtin(BuiltinFunction fn, const Dataset& rows);

class BuiltinPredictor final : public Predictor {
 public:
  explicit BuiltinPredictor(BuiltinFunction fn) : fn_(fn) {}
  PredictionVector predict(const Dataset& rows) const override {
    return eval_builtin(fn_, rows);
  }

 private:
  BuiltinFunction fn_;
};

}  // namespace mid

#endif  // MID_GENERATORS_H_
