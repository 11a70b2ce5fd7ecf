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
#include <string_view>

#include <json.hpp>

#include "inquir/ast.hpp"

namespace inquir {

// Concrete text syntax (.inq).
System parse_program(std::string_view text);
std::string print_program(const System& sys);

std::string print_expr(const Expr& e);
std::string print_instr(const Instr& instr);  // single line, nested blocks inline
std::string format_double(double v);

// Stable JSON form, one object per instruction tagged by "op".
nlohmann::json to_json(const System& sys);
nlohmann::json to_json(const Instr& instr);
nlohmann::json to_json(const Expr& e);
System system_from_json(const nlohmann::json& j);

}  // namespace inquir
