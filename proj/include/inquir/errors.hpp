// Copyright 2026 The InQuIR Toolchain Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace inquir {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected,
              std::string found);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
  std::string found_;
};

#define INQUIR_DEFINE_ERROR(Name)    \
  class Name : public Error {        \
   public:                           \
    using Error::Error;              \
  }

INQUIR_DEFINE_ERROR(DuplicateProcessHeader);
INQUIR_DEFINE_ERROR(ConfigMismatch);
INQUIR_DEFINE_ERROR(IllegalChoice);
INQUIR_DEFINE_ERROR(NotStuck);
INQUIR_DEFINE_ERROR(AlreadyAllocated);
INQUIR_DEFINE_ERROR(UnknownQubit);
INQUIR_DEFINE_ERROR(ArityMismatch);
INQUIR_DEFINE_ERROR(DimensionMismatch);
INQUIR_DEFINE_ERROR(CapacityExceeded);
INQUIR_DEFINE_ERROR(UnsupportedGate);
INQUIR_DEFINE_ERROR(DisconnectedTopology);
INQUIR_DEFINE_ERROR(StuckDuringSimulation);
INQUIR_DEFINE_ERROR(OracleExhausted);
INQUIR_DEFINE_ERROR(ImpossibleOutcome);
INQUIR_DEFINE_ERROR(EvaluationError);

#undef INQUIR_DEFINE_ERROR

}  // namespace inquir
