// Copyright 2026 The FedLoRA Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDLORA_COMMON_ERROR_H_
#define FEDLORA_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace fedlora {

// Base of every error thrown by this project. Callers that only care about
// "something went wrong" catch this; the subclasses exist so tests and the
// CLI can distinguish precondition failures from I/O and data problems.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A scalar or configuration parameter is outside its legal range.
class ParamError : public Error {
 public:
  using Error::Error;
};

// A computation produced NaN or Inf.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (corpus lines, CSV, checkpoints).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedlora

#endif  // FEDLORA_COMMON_ERROR_H_
