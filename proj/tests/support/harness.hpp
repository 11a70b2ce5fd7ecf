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

// Helpers for running programs and reading back named qubits.

#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"

#ifndef INQUIR_SOURCE_DIR
#define INQUIR_SOURCE_DIR "."
#endif

namespace inquir::testing {

inline std::string source_path(const std::string& rel) { return std::string(INQUIR_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
  std::ifstream in(source_path(rel), std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + rel);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The qubit bound to `var` in any process of the final state.
inline QubitRef qubit_of(const RuntimeState& s, const std::string& var, std::optional<ParticipantId> at = {}) {
  for (const auto& p : s.processes) {
    if (at && p.location != *at) continue;
    auto it = p.env.find(var);
    if (it != p.env.end())
      if (auto* q = std::get_if<QubitRef>(&it->second)) return *q;
  }
  throw std::runtime_error("no qubit bound to " + var);
}

// Reduced pure state of the named qubits, first name most significant.
inline std::vector<Amplitude> named_state(const RuntimeState& s, const std::vector<std::string>& vars) {
  std::vector<QubitRef> order;
  for (const auto& v : vars) order.push_back(qubit_of(s, v));
  const auto* sv = s.rho.statevector();
  if (!sv) throw std::runtime_error("not a statevector backend");
  return sv->subsystem(order);
}

inline RunResult run_text(const std::string& text, const ArchConfig& arch, RunOptions opts = {}) {
  return run(parse_program(text), arch, opts);
}

}  // namespace inquir::testing
