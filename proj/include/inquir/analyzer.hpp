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
#include <vector>

#include <json.hpp>

#include "inquir/arch.hpp"
#include "inquir/ast.hpp"
#include "inquir/frontend.hpp"

namespace inquir {

enum class IssuePolicy { DependencyResolved, InOrder };

struct AnalyzerOptions {
  IssuePolicy policy = IssuePolicy::DependencyResolved;
  std::uint64_t seed = 0;  // measurement outcomes feeding branch conditions
  // One instruction at a time per processor. Off by default, so gates on
  // disjoint qubits of one processor may overlap.
  bool serialize_units = false;
};

enum class DepKind { ProgramOrder, Message, Rendezvous, QubitReuse };

std::string_view dep_kind_name(DepKind k);

struct Dep {
  std::size_t node = 0;
  DepKind kind = DepKind::ProgramOrder;

  bool operator==(const Dep&) const = default;
};

struct Event {
  std::size_t id = 0;
  std::size_t process = 0;
  ParticipantId processor = 0;
  std::string op;    // op_name of the instruction
  std::string text;  // printed instruction
  std::int64_t start_ns = 0;
  std::int64_t end_ns = 0;
  bool uses_unit = false;  // occupies the processor's execution unit
  std::optional<std::size_t> partner;  // the other half of a genEnt pair
  std::vector<Dep> deps;
  std::size_t completion_order = 0;
};

struct EventTrace {
  std::vector<ParticipantId> processors;  // arch enumeration order
  std::vector<Event> events;              // indexed by id

  nlohmann::json to_json() const;
};

// Runs derived-op expansion, then a discrete-event simulation. Throws
// StuckDuringSimulation when no instruction can make progress.
EventTrace simulate_cost(const System& sys, const ArchConfig& arch, const CostModel& costs,
                         const AnalyzerOptions& options = {});

struct MetricsReport {
  std::size_t e_count = 0;     // genEnt instructions
  std::size_t epr_pairs = 0;   // e_count / 2
  std::size_t c_count = 0;     // send + recv instructions
  std::size_t messages = 0;    // send instructions
  std::size_t e_depth = 0;
  std::size_t c_depth = 0;
  std::int64_t total_cost_ns = 0;
  std::map<ParticipantId, std::size_t> ops_per_processor;

  nlohmann::json to_json() const;
};

MetricsReport metrics(const EventTrace& trace);

struct TimelineRow {
  std::int64_t time_ns = 0;
  ParticipantId processor = 0;
  std::size_t remaining_ops = 0;

  bool operator==(const TimelineRow&) const = default;
};

std::vector<TimelineRow> timeline(const EventTrace& trace);
std::string timeline_csv(const std::vector<TimelineRow>& rows);

struct NamedCircuit {
  std::string name;
  Circuit circuit;
};

struct SweepCell {
  std::string circuit;
  std::string arch;
  std::optional<MetricsReport> report;
  std::optional<std::string> error;
};

// One cell per (circuit, arch), row-major by circuit. Cells run on up to
// `threads` workers (0 = hardware concurrency); errors are captured per cell.
std::vector<SweepCell> sweep(const std::vector<NamedCircuit>& circuits,
                             const std::vector<ArchConfig>& archs, const CostModel& costs,
                             const AnalyzerOptions& options = {}, unsigned threads = 0);

nlohmann::json sweep_json(const std::vector<SweepCell>& cells);
std::string sweep_csv(const std::vector<SweepCell>& cells);

}  // namespace inquir
