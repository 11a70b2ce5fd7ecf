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

#include <string>
#include <vector>

#include <json.hpp>

#include "inquir/ast.hpp"

namespace inquir {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceLoc loc;
  std::size_t process = 0;

  bool operator==(const Diagnostic& o) const {
    return severity == o.severity && code == o.code && message == o.message &&
           loc.line == o.loc.line && loc.column == o.loc.column && process == o.process;
  }
};

// DOUBLE_FREE, USE_AFTER_FREE, UNBOUND_VARIABLE (errors) and QUBIT_LEAK
// (warning). Every path through the if-branches is followed.
std::vector<Diagnostic> lint_linear(const System& sys);

// UNPAIRED_GENENT, AMBIGUOUS_LABEL, OPEN_MISMATCH (errors); UNMATCHED_SEND,
// UNMATCHED_RECV, LINK_CONTENTION (warnings).
std::vector<Diagnostic> lint_sessions(const System& sys);

// Both lint passes, sorted by location then code.
std::vector<Diagnostic> lint(const System& sys);

bool has_errors(const std::vector<Diagnostic>& diags);
std::string_view severity_name(Severity s);
nlohmann::json diagnostics_json(const std::vector<Diagnostic>& diags);
std::string diagnostics_text(const std::vector<Diagnostic>& diags, bool color = false);

}  // namespace inquir
