/*
 * Copyright 2026 The OPA Authors
 *
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

#ifndef OPA_ERROR_HPP_
#define OPA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace opa {

// Base class of every exception thrown by the library. Protocol aborts are
// reported as values (see protocol/roles.hpp), never as exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent parameters, mismatched moduli, wrong dimensions.
class ParamError : public Error {
 public:
  using Error::Error;
};

// Arithmetic failure such as inverting a non-unit.
class MathError : public Error {
 public:
  using Error::Error;
};

// A value outside its admissible range (input budgets, secret lengths).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Fewer shares than the reconstruction threshold.
class ThresholdError : public Error {
 public:
  using Error::Error;
};

// Malformed wire data.
class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace opa

#endif  // OPA_ERROR_HPP_
