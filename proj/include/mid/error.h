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

#ifndef MID_ERROR_H_
#define MID_ERROR_H_

#include <stdexcept>
#include <string>

namespace mid {

// Base class of every error raised by the library. The subclasses map onto
// the command-line exit codes (usage 2, data 3, numerical 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or configuration supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed, missing or incompatible input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not produce a result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mid

#endif  // MID_ERROR_H_
