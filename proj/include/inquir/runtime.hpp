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
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "inquir/arch.hpp"
#include "inquir/ast.hpp"
#include "inquir/qstate.hpp"

namespace inquir {

using Datum = std::variant<Bit, QubitRef>;

std::string to_string(const Datum& d);

// Q: free data qubits per participant, oldest first.
struct DataStore {
  std::map<ParticipantId, std::deque<QubitRef>> free;

  std::size_t size(ParticipantId p) const;
};

// E: free comm qubits per directed link endpoint (owner, peer), oldest first.
struct EprStore {
  std::map<std::pair<ParticipantId, ParticipantId>, std::deque<QubitRef>> free;

  std::size_t size(ParticipantId owner, ParticipantId peer) const;
};

struct HeapEntry {
  std::string label;
  Datum value;
  std::size_t pushed_at = 0;  // step number of the push
};

// H: one ordered buffer per (session, participant).
class Heap {
 public:
  using Key = std::pair<std::string, ParticipantId>;

  bool has(const Key& k) const { return buffers_.count(k) > 0; }
  void open(const Key& k);
  void close(const Key& k);
  void push(const Key& k, HeapEntry e);
  std::size_t count(const Key& k, const std::string& label) const;
  // Removes and returns the first entry carrying the label.
  std::optional<HeapEntry> pop(const Key& k, const std::string& label);
  const std::map<Key, std::vector<HeapEntry>>& buffers() const { return buffers_; }

 private:
  std::map<Key, std::vector<HeapEntry>> buffers_;
};

struct Frame {
  const Block* block = nullptr;
  std::size_t index = 0;
};

struct ProcessState {
  ParticipantId location = 0;
  std::string name;
  std::vector<Frame> frames;  // innermost last
  std::map<std::string, Datum> env;
  std::optional<std::size_t> last_step;
  std::size_t ready_since = 0;

  bool finished() const { return frames.empty(); }
  const Instr* head() const;
};

struct QubitHome {
  ParticipantId owner = 0;
  std::optional<ParticipantId> peer;  // set for comm qubits
};

enum class Rule : std::uint8_t {
  Open, Close, Init, Free, Assign, Gate, Measure, Branch, GenEnt, EntSwap, QSend, QRecv, RemoteCx,
  Send, Recv
};

std::string_view rule_name(Rule r);

struct Transition {
  Rule rule = Rule::Assign;
  std::vector<std::size_t> processes;  // indices into RuntimeState::processes

  auto operator<=>(const Transition&) const = default;
};

struct TraceEvent {
  std::size_t step = 0;
  Rule rule = Rule::Assign;
  std::vector<std::size_t> processes;
  std::vector<ParticipantId> participants;
  std::vector<std::string> operands;  // instruction text per process
  std::vector<std::size_t> deps;      // logical dependencies (earlier step numbers)
  std::vector<int> outcome;

  nlohmann::json to_json() const;
};

class RuntimeState {
 public:
  std::shared_ptr<const System> program;
  QuantumState rho;
  DataStore data;
  EprStore epr;
  std::vector<ProcessState> processes;
  Heap heap;
  OutcomeOracle oracle = OutcomeOracle::born_rule(0);

  std::map<QubitRef, QubitHome> homes;
  std::map<QubitRef, std::size_t> freed_at;  // last step that returned the qubit to a pool
  std::size_t steps = 0;
  std::vector<std::string> warnings;

  bool terminated() const;
  bool in_use(QubitRef q) const;
  std::size_t in_use_data(ParticipantId p) const;
  std::size_t total_free_comm() const;
};

RuntimeState initial_state(std::shared_ptr<const System> program, const ArchConfig& arch,
                           BackendKind backend, OutcomeOracle oracle);

std::vector<Transition> enabled_transitions(const RuntimeState& state);
// Applies the rule in place. Throws IllegalChoice if not enabled.
TraceEvent apply_transition(RuntimeState& state, const Transition& t);
RuntimeState step(const RuntimeState& state, const Transition& t);

struct SchedulerPolicy {
  enum class Kind { RoundRobin, SeededRandom, InOrderPerProcess, DependencyResolved };
  Kind kind = Kind::RoundRobin;
  std::uint64_t seed = 0;

  static SchedulerPolicy round_robin() { return {Kind::RoundRobin, 0}; }
  static SchedulerPolicy random(std::uint64_t seed) { return {Kind::SeededRandom, seed}; }
  static SchedulerPolicy in_order() { return {Kind::InOrderPerProcess, 0}; }
  static SchedulerPolicy dependency_resolved() { return {Kind::DependencyResolved, 0}; }
};

std::optional<SchedulerPolicy> parse_policy(std::string_view name, std::uint64_t seed);

class Scheduler {
 public:
  explicit Scheduler(SchedulerPolicy p) : policy_(p), rng_(p.seed) {}
  std::size_t choose(const RuntimeState& state, const std::vector<Transition>& enabled);

 private:
  SchedulerPolicy policy_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
};

struct WaitEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string resource;
};

struct BlockedProcess {
  std::size_t process = 0;
  ParticipantId location = 0;
  std::string name;
  std::string instruction;
  std::string reason;
};

struct StuckReport {
  enum class Kind { Deadlock, QubitExhaustion, MessageStarvation, MixedOrUnknown };
  Kind kind = Kind::MixedOrUnknown;
  std::vector<WaitEdge> cycle;
  std::optional<ParticipantId> participant;
  std::optional<std::string> session;
  std::optional<std::string> label;
  std::vector<BlockedProcess> blocked;

  nlohmann::json to_json() const;
  std::string summary() const;
};

std::string_view stuck_kind_name(StuckReport::Kind k);

StuckReport classify_stuck(const RuntimeState& state);

struct RunOptions {
  BackendKind backend = BackendKind::Statevector;
  SchedulerPolicy policy = SchedulerPolicy::round_robin();
  std::optional<OutcomeOracle> oracle;  // default BornRule(policy seed)
  std::optional<std::size_t> fuel;      // default 10 x instruction count
};

struct RunResult {
  enum class Outcome { Completed, Stuck, FuelExhausted };
  Outcome outcome = Outcome::Completed;
  RuntimeState final_state;
  std::vector<TraceEvent> trace;
  std::optional<StuckReport> stuck;

  int exit_code() const;
};

std::string_view outcome_name(RunResult::Outcome o);

// Throws ConfigMismatch when the program references unknown participants.
void validate_against(const System& sys, const ArchConfig& arch);

RunResult run(const System& sys, const ArchConfig& arch, const RunOptions& options = {});
RunResult run_state(RuntimeState state, const RunOptions& options);

std::string trace_jsonl(const std::vector<TraceEvent>& trace);

// Replaces qsend/qrecv/rcxc/rcxt by their primitive sequences.
Process expand_derived(const Process& proc);
System expand_derived(const System& sys);

struct ExplorationResult {
  std::size_t states = 0;
  std::size_t completed = 0;  // distinct terminal states reached
  std::size_t stuck = 0;
  std::size_t deadlocks = 0;
  bool truncated = false;
  std::optional<std::vector<Transition>> deadlock_schedule;
  std::optional<StuckReport> deadlock_report;
};

// Exhaustive DFS over interleavings with state memoisation. Outcomes are fixed
// to 0, so use the abstract backend or programs without measurements that
// could be impossible.
ExplorationResult explore_schedules(const RuntimeState& initial, std::size_t max_states = 1000000);

}  // namespace inquir
