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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "inquir/ast.hpp"

namespace inquir {

struct ProcessorSpec {
  ParticipantId id = 0;
  std::uint32_t data_qubits = 0;
};

// Undirected link. comm_a / comm_b are the communication qubits on the a and b
// sides of the link.
struct LinkSpec {
  ParticipantId a = 0;
  ParticipantId b = 0;
  std::uint32_t comm_a = 0;
  std::uint32_t comm_b = 0;

  std::uint32_t comm_at(ParticipantId p) const { return p == a ? comm_a : comm_b; }
};

class ArchConfig {
 public:
  std::string name;
  std::vector<ProcessorSpec> processors;
  std::vector<LinkSpec> links;

  bool has_processor(ParticipantId p) const;
  const ProcessorSpec& processor(ParticipantId p) const;
  const LinkSpec* link(ParticipantId p, ParticipantId q) const;
  std::vector<ParticipantId> neighbors(ParticipantId p) const;  // ascending
  // BFS shortest path, ties broken towards lower processor ids. Empty if
  // unreachable.
  std::vector<ParticipantId> shortest_path(ParticipantId from, ParticipantId to) const;
  std::uint32_t total_data_qubits() const;
  void validate() const;
};

// Presets. E is the number of communication qubits per processor; it is split
// evenly over the processor's links (lower-id neighbours take any remainder).
ArchConfig linear(std::uint32_t m, std::uint32_t q, std::uint32_t e);
ArchConfig cube(std::uint32_t q, std::uint32_t e);      // 8 nodes, Gray-code labelled
ArchConfig torus3x3(std::uint32_t q, std::uint32_t e);  // 9 nodes, row-major

// Parses "linear:8x2,2", "linear(8,2,2)", "cube:2,3", "cube(2,3)",
// "torus:2,4", "torus3x3(2,4)". Returns nullopt for anything else.
std::optional<ArchConfig> parse_arch_preset(std::string_view spec);

ArchConfig arch_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ArchConfig& arch);

struct OpCosts {
  std::int64_t single_qubit_ns = 30;
  std::int64_t two_qubit_ns = 60;
  std::int64_t measure_ns = 240;
  std::int64_t classical_send_ns = 30;
  std::int64_t ent_gen_ns = 1000;

  bool operator==(const OpCosts&) const = default;
};

struct CostModel {
  OpCosts defaults;
  std::map<ParticipantId, OpCosts> per_processor;

  const OpCosts& at(ParticipantId p) const;
  void validate() const;
};

CostModel cost_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CostModel& c);

}  // namespace inquir
