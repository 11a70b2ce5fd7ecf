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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "inquir/arch.hpp"
#include "inquir/ast.hpp"

namespace inquir {

struct CircuitOp {
  enum class Kind { Gate, Measure, Barrier };
  Kind kind = Kind::Gate;
  Gate gate;
  std::vector<std::uint32_t> qubits;

  bool operator==(const CircuitOp&) const = default;
};

struct Circuit {
  std::uint32_t num_qubits = 0;
  std::vector<CircuitOp> ops;

  std::size_t remote_candidates() const;  // number of two-qubit gates
};

// OpenQASM 2.0 subset. ccx is expanded on the fly (6 CX, 7 T/Tdg).
Circuit parse_qasm(std::string_view text);

struct QubitSlot {
  ParticipantId processor = 0;
  std::uint32_t slot = 0;

  bool operator==(const QubitSlot&) const = default;
};

using QubitMap = std::vector<QubitSlot>;  // indexed by logical qubit

// Fills processors in arch enumeration order. Throws CapacityExceeded.
QubitMap partition(const Circuit& circ, const ArchConfig& arch);

struct LowerOptions {
  std::string session = "s";
  bool free_data = false;  // free every data qubit at the end of its process
  bool close_session = true;
};

// One process per processor. Throws DisconnectedTopology.
System lower(const Circuit& circ, const QubitMap& map, const ArchConfig& arch,
             const LowerOptions& options = {});

System compile(const Circuit& circ, const ArchConfig& arch, const LowerOptions& options = {});

}  // namespace inquir
