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

#include "inquir/ast.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "inquir/errors.hpp"

namespace inquir {

namespace {

std::string join_expected(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += xs[i];
  }
  return out;
}

std::string syntax_message(std::size_t line, std::size_t column,
                           const std::vector<std::string>& expected, const std::string& found) {
  std::ostringstream os;
  os << line << ":" << column << ": expected ";
  if (expected.size() == 1)
    os << expected.front();
  else
    os << "one of {" << join_expected(expected) << "}";
  os << ", found " << found;
  return os.str();
}

struct GateInfo {
  GateKind kind;
  std::string_view name;
  std::size_t arity;
  std::size_t params;
};

constexpr std::array<GateInfo, 15> kGates{{
    {GateKind::X, "X", 1, 0},    {GateKind::Y, "Y", 1, 0},     {GateKind::Z, "Z", 1, 0},
    {GateKind::H, "H", 1, 0},    {GateKind::S, "S", 1, 0},     {GateKind::Sdg, "Sdg", 1, 0},
    {GateKind::T, "T", 1, 0},    {GateKind::Tdg, "Tdg", 1, 0}, {GateKind::RZ, "RZ", 1, 1},
    {GateKind::RX, "RX", 1, 1},  {GateKind::RY, "RY", 1, 1},   {GateKind::U1, "U1", 1, 1},
    {GateKind::U2, "U2", 1, 2},  {GateKind::U3, "U3", 1, 3},   {GateKind::CX, "CX", 2, 0},
}};

const GateInfo& info(GateKind k) { return kGates[static_cast<std::size_t>(k)]; }

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                         std::string found)
    : Error(syntax_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

std::string to_string(const QubitRef& q) {
  return (q.kind == QubitKind::Data ? "$d" : "$c") + std::to_string(q.uid);
}

Expr Expr::conj(Expr a, Expr b) {
  Expr e;
  e.kind_ = Kind::And;
  e.lhs_ = std::make_shared<const Expr>(std::move(a));
  e.rhs_ = std::make_shared<const Expr>(std::move(b));
  return e;
}

Expr Expr::exclusive(Expr a, Expr b) {
  Expr e;
  e.kind_ = Kind::Xor;
  e.lhs_ = std::make_shared<const Expr>(std::move(a));
  e.rhs_ = std::make_shared<const Expr>(std::move(b));
  return e;
}

Expr Expr::negate(Expr a) {
  Expr e;
  e.kind_ = Kind::Not;
  e.lhs_ = std::make_shared<const Expr>(std::move(a));
  return e;
}

const std::string* Expr::var_name() const {
  if (!is_var()) return nullptr;
  return &std::get<Var>(value_).name;
}

void Expr::collect_vars(std::vector<std::string>& out) const {
  switch (kind_) {
    case Kind::Value:
      if (auto* n = var_name()) out.push_back(*n);
      break;
    case Kind::Not:
      lhs_->collect_vars(out);
      break;
    case Kind::And:
    case Kind::Xor:
      lhs_->collect_vars(out);
      rhs_->collect_vars(out);
      break;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Expr::Kind::Value:
      return a.value_ == b.value_;
    case Expr::Kind::Not:
      return *a.lhs_ == *b.lhs_;
    case Expr::Kind::And:
    case Expr::Kind::Xor:
      return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
  }
  return false;
}

std::string_view gate_name(GateKind k) { return info(k).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (const auto& g : kGates)
    if (g.name == name) return g.kind;
  return std::nullopt;
}

std::size_t gate_arity(GateKind k) { return info(k).arity; }
std::size_t gate_param_count(GateKind k) { return info(k).params; }

bool If::operator==(const If& o) const {
  return condition == o.condition && then_block == o.then_block && else_block == o.else_block;
}

std::string_view op_name(const InstrBody& body) {
  static constexpr std::array<std::string_view, std::variant_size_v<InstrBody>> names{
      "stop", "open",  "close", "init",  "free", "assign", "gate",  "measure",
      "genEnt", "entSwap", "if", "qsend", "qrecv", "rcx", "send", "recv"};
  if (auto* r = std::get_if<RemoteCx>(&body)) return r->role == CxRole::Control ? "rcxc" : "rcxt";
  return names[body.index()];
}

std::size_t instruction_count(const Block& b) {
  std::size_t n = 0;
  for (const auto& i : b) {
    ++n;
    if (auto* br = std::get_if<If>(&i.body))
      n += instruction_count(br->then_block) + instruction_count(br->else_block);
  }
  return n;
}

std::size_t System::instruction_count() const {
  std::size_t n = 0;
  for (const auto& p : processes) n += inquir::instruction_count(p.body);
  return n;
}

namespace {

void max_in_block(const Block& b, ParticipantId& m) {
  for (const auto& i : b) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Open>) {
            for (auto p : x.participants) m = std::max(m, p);
          } else if constexpr (std::is_same_v<T, GenEnt> || std::is_same_v<T, QSend> ||
                               std::is_same_v<T, RemoteCx> || std::is_same_v<T, Send>) {
            m = std::max(m, x.partner);
          } else if constexpr (std::is_same_v<T, If>) {
            max_in_block(x.then_block, m);
            max_in_block(x.else_block, m);
          }
        },
        i.body);
  }
}

}  // namespace

ParticipantId System::max_participant() const {
  ParticipantId m = 0;
  for (const auto& p : processes) {
    m = std::max(m, p.location);
    max_in_block(p.body, m);
  }
  return m;
}

Expr substitute(const Expr& e, const std::string& var, const Value& v) {
  switch (e.kind()) {
    case Expr::Kind::Value:
      if (auto* n = e.var_name(); n && *n == var) return Expr(v);
      return e;
    case Expr::Kind::Not:
      return Expr::negate(substitute(e.lhs(), var, v));
    case Expr::Kind::And:
      return Expr::conj(substitute(e.lhs(), var, v), substitute(e.rhs(), var, v));
    case Expr::Kind::Xor:
      return Expr::exclusive(substitute(e.lhs(), var, v), substitute(e.rhs(), var, v));
  }
  return e;
}

std::vector<std::string> bound_vars(const InstrBody& body) {
  return std::visit(
      [](const auto& x) -> std::vector<std::string> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Init> || std::is_same_v<T, Assign> ||
                      std::is_same_v<T, Measure> || std::is_same_v<T, GenEnt> ||
                      std::is_same_v<T, QRecv> || std::is_same_v<T, Recv>) {
          return {x.var};
        } else if constexpr (std::is_same_v<T, EntSwap>) {
          return {x.out1, x.out2};
        } else if constexpr (std::is_same_v<T, Open>) {
          return {x.session};
        } else {
          return {};
        }
      },
      body);
}

namespace {

InstrBody substitute_body(const InstrBody& body, const std::string& var, const Value& v) {
  auto sub = [&](const Expr& e) { return substitute(e, var, v); };
  return std::visit(
      [&](const auto& x) -> InstrBody {
        using T = std::decay_t<decltype(x)>;
        T y = x;
        if constexpr (std::is_same_v<T, Free>) {
          y.target = sub(x.target);
        } else if constexpr (std::is_same_v<T, Assign>) {
          y.value = sub(x.value);
        } else if constexpr (std::is_same_v<T, ApplyGate>) {
          for (auto& o : y.operands) o = sub(o);
          if (y.condition) y.condition = sub(*y.condition);
        } else if constexpr (std::is_same_v<T, Measure>) {
          for (auto& o : y.operands) o = sub(o);
        } else if constexpr (std::is_same_v<T, EntSwap>) {
          y.first = sub(x.first);
          y.second = sub(x.second);
        } else if constexpr (std::is_same_v<T, If>) {
          y.condition = sub(x.condition);
          y.then_block = substitute(x.then_block, var, v);
          y.else_block = substitute(x.else_block, var, v);
        } else if constexpr (std::is_same_v<T, QSend> || std::is_same_v<T, RemoteCx>) {
          y.data = sub(x.data);
          y.comm = sub(x.comm);
        } else if constexpr (std::is_same_v<T, QRecv>) {
          y.comm = sub(x.comm);
        } else if constexpr (std::is_same_v<T, Send>) {
          y.payload = sub(x.payload);
        }
        return y;
      },
      body);
}

}  // namespace

Block substitute(const Block& block, const std::string& var, const Value& v) {
  Block out;
  out.reserve(block.size());
  bool shadowed = false;
  for (const auto& instr : block) {
    if (shadowed) {
      out.push_back(instr);
      continue;
    }
    Instr copy = instr;
    copy.body = substitute_body(instr.body, var, v);
    out.push_back(std::move(copy));
    auto bv = bound_vars(instr.body);
    if (std::find(bv.begin(), bv.end(), var) != bv.end()) shadowed = true;
  }
  return out;
}

}  // namespace inquir
