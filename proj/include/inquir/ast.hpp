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

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace inquir {

using ParticipantId = std::uint32_t;

enum class QubitKind : std::uint8_t { Data, Comm };

struct QubitRef {
  QubitKind kind = QubitKind::Data;
  std::uint32_t uid = 0;

  auto operator<=>(const QubitRef&) const = default;
};

std::string to_string(const QubitRef& q);

struct Bit {
  bool value = false;
  auto operator<=>(const Bit&) const = default;
};

struct Var {
  std::string name;
  auto operator<=>(const Var&) const = default;
};

// Syntactic values. Runtime values never contain Var.
using Value = std::variant<Bit, QubitRef, Var>;

class Expr {
 public:
  enum class Kind : std::uint8_t { Value, And, Xor, Not };

  Expr() : Expr(Bit{false}) {}
  Expr(Value v) : kind_(Kind::Value), value_(std::move(v)) {}  // NOLINT: implicit by design

  static Expr bit(bool b) { return Expr(Bit{b}); }
  static Expr var(std::string name) { return Expr(Var{std::move(name)}); }
  static Expr qubit(QubitRef q) { return Expr(q); }
  static Expr conj(Expr a, Expr b);
  static Expr exclusive(Expr a, Expr b);
  static Expr negate(Expr a);

  Kind kind() const { return kind_; }
  const Value& value() const { return value_; }
  const Expr& lhs() const { return *lhs_; }
  const Expr& rhs() const { return *rhs_; }

  bool is_var() const { return kind_ == Kind::Value && std::holds_alternative<Var>(value_); }
  const std::string* var_name() const;
  void collect_vars(std::vector<std::string>& out) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  Kind kind_;
  Value value_;
  std::shared_ptr<const Expr> lhs_;
  std::shared_ptr<const Expr> rhs_;
};

enum class GateKind : std::uint8_t { X, Y, Z, H, S, Sdg, T, Tdg, RZ, RX, RY, U1, U2, U3, CX };

std::string_view gate_name(GateKind k);
std::optional<GateKind> gate_from_name(std::string_view name);
std::size_t gate_arity(GateKind k);
std::size_t gate_param_count(GateKind k);

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<double> params;

  bool operator==(const Gate&) const = default;
};

struct SourceLoc {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Instr;
using Block = std::vector<Instr>;

struct Stop {
  bool operator==(const Stop&) const = default;
};
struct Open {
  std::string session;
  std::vector<ParticipantId> participants;
  bool operator==(const Open&) const = default;
};
struct Close {
  std::string session;
  bool operator==(const Close&) const = default;
};
struct Init {
  std::string var;
  bool operator==(const Init&) const = default;
};
struct Free {
  Expr target;
  bool operator==(const Free&) const = default;
};
struct Assign {
  std::string var;
  Expr value;
  bool operator==(const Assign&) const = default;
};
struct ApplyGate {
  Gate gate;
  std::vector<Expr> operands;
  std::optional<Expr> condition;  // U^e(...): applied only when e evaluates to 1
  bool operator==(const ApplyGate&) const = default;
};
struct Measure {
  std::string var;
  std::vector<Expr> operands;
  bool operator==(const Measure&) const = default;
};
struct GenEnt {
  std::string var;
  ParticipantId partner = 0;
  std::string label;
  bool operator==(const GenEnt&) const = default;
};
struct EntSwap {
  std::string out1;
  std::string out2;
  Expr first;
  Expr second;
  bool operator==(const EntSwap&) const = default;
};
struct If {
  Expr condition;
  Block then_block;
  Block else_block;
  bool operator==(const If&) const;
};
struct QSend {
  ParticipantId partner = 0;
  std::string session;
  std::string label;
  Expr data;
  Expr comm;
  bool operator==(const QSend&) const = default;
};
struct QRecv {
  std::string var;
  std::string session;
  std::string label;
  Expr comm;
  bool operator==(const QRecv&) const = default;
};
enum class CxRole : std::uint8_t { Control, Target };
struct RemoteCx {
  CxRole role = CxRole::Control;
  ParticipantId partner = 0;
  std::string session;
  std::string label;
  Expr data;
  Expr comm;
  bool operator==(const RemoteCx&) const = default;
};
struct Send {
  std::string session;
  ParticipantId partner = 0;
  std::string label;
  Expr payload;
  bool operator==(const Send&) const = default;
};
struct Recv {
  std::string session;
  std::string label;
  std::string var;
  bool operator==(const Recv&) const = default;
};

using InstrBody = std::variant<Stop, Open, Close, Init, Free, Assign, ApplyGate, Measure, GenEnt,
                               EntSwap, If, QSend, QRecv, RemoteCx, Send, Recv>;

struct Instr {
  InstrBody body;
  SourceLoc loc;

  Instr() = default;
  template <typename T>
  Instr(T b, SourceLoc l = {}) : body(std::move(b)), loc(l) {}  // NOLINT

  // Source locations do not take part in equality.
  bool operator==(const Instr& o) const { return body == o.body; }
};

std::string_view op_name(const InstrBody& body);

struct Process {
  ParticipantId location = 0;
  std::string name;  // optional, empty when absent
  Block body;
  SourceLoc loc;

  bool operator==(const Process& o) const {
    return location == o.location && name == o.name && body == o.body;
  }
};

struct System {
  std::vector<Process> processes;

  bool operator==(const System&) const = default;
  std::size_t instruction_count() const;
  ParticipantId max_participant() const;
};

std::size_t instruction_count(const Block& b);

// [v/x]P. Stops at the first instruction that rebinds x.
Block substitute(const Block& block, const std::string& var, const Value& v);
Expr substitute(const Expr& e, const std::string& var, const Value& v);

// Variables bound by an instruction (not counting nested blocks).
std::vector<std::string> bound_vars(const InstrBody& body);

}  // namespace inquir
