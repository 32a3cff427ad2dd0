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

#ifndef MID_PREDICTOR_H_
#define MID_PREDICTOR_H_

#include <functional>
#include <utility>

#include "mid/dataset.h"

namespace mid {

// Anything that maps rows to real predictions. Implementations must be pure
// and deterministic.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictionVector predict(const Dataset& rows) const = 0;
};

// Adapts a callable to the Predictor interface.
class FunctionPredictor final : public Predictor {
 public:
  using Fn = std::function<PredictionVector(const Dataset&)>;
  explicit FunctionPredictor(Fn fn) : fn_(std::move(fn)) {}
  PredictionVector predict(const Dataset& rows) const override { return fn_(rows); }

 private:
  Fn fn_;
};

}  // namespace mid

#endif  // MID_PREDICTOR_H_
