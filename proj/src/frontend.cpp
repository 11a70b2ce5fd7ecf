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

#include "inquir/frontend.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include "inquir/errors.hpp"

namespace inquir {

std::size_t Circuit::remote_candidates() const {
  std::size_t n = 0;
  for (const auto& op : ops)
    if (op.kind == CircuitOp::Kind::Gate && op.qubits.size() == 2) ++n;
  return n;
}

namespace {

struct Tok {
  enum class Kind { Ident, Number, String, Punct, Arrow, End } kind = Kind::End;
  std::string text;
  std::size_t line = 1, column = 1;
};

class QasmLexer {
 public:
  explicit QasmLexer(std::string_view src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip();
      Tok t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Kind::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += bump();
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.kind = Tok::Kind::Number;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
          t.text += bump();
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          t.text += bump();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) t.text += bump();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            t.text += bump();
        }
      } else if (c == '"') {
        t.kind = Tok::Kind::String;
        bump();
        while (pos_ < src_.size() && src_[pos_] != '"') t.text += bump();
        if (pos_ >= src_.size()) throw SyntaxError(t.line, t.column, {"'\"'"}, "end of input");
        bump();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Tok::Kind::Arrow;
        t.text = "->";
        bump();
        bump();
      } else if (std::string_view("()[]{};,+-*/^").find(c) != std::string_view::npos) {
        t.kind = Tok::Kind::Punct;
        t.text = std::string(1, bump());
      } else {
        throw SyntaxError(t.line, t.column, {"token"}, std::string(1, c));
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char bump() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        bump();
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

struct Register {
  std::uint32_t offset = 0;
  std::uint32_t size = 0;
};

class QasmParser {
 public:
  explicit QasmParser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    expect_ident("OPENQASM");
    const Tok& ver = expect(Tok::Kind::Number, "version");
    if (ver.text.rfind("2", 0) != 0)
      throw SyntaxError(ver.line, ver.column, {"2.0"}, ver.text);
    expect_punct(";");
    while (peek().kind != Tok::Kind::End) statement();
    return std::move(circ_);
  }

 private:
  const Tok& peek() const { return toks_[pos_]; }
  const Tok& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Tok& t = peek();
    throw SyntaxError(t.line, t.column, std::move(expected),
                      t.kind == Tok::Kind::End ? "end of input" : t.text);
  }

  const Tok& expect(Tok::Kind k, const std::string& what) {
    if (peek().kind != k) fail({what});
    return next();
  }
  void expect_punct(const std::string& p) {
    if (peek().kind != Tok::Kind::Punct || peek().text != p) fail({"'" + p + "'"});
    next();
  }
  void expect_ident(const std::string& s) {
    if (peek().kind != Tok::Kind::Ident || peek().text != s) fail({s});
    next();
  }
  bool accept_punct(const std::string& p) {
    if (peek().kind == Tok::Kind::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }

  std::uint32_t integer() {
    const Tok& t = expect(Tok::Kind::Number, "integer");
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size())
      throw SyntaxError(t.line, t.column, {"integer"}, t.text);
    return v;
  }

  // Parameter expressions: + - * / ^, unary minus, pi, numbers, parentheses
  // and the usual unary functions.
  double expr() {
    double v = term();
    while (true) {
      if (accept_punct("+")) v += term();
      else if (accept_punct("-")) v -= term();
      else return v;
    }
  }
  double term() {
    double v = power();
    while (true) {
      if (accept_punct("*")) v *= power();
      else if (accept_punct("/")) v /= power();
      else return v;
    }
  }
  double power() {
    double v = unary();
    if (accept_punct("^")) v = std::pow(v, power());
    return v;
  }
  double unary() {
    if (accept_punct("-")) return -unary();
    if (accept_punct("+")) return unary();
    return atom();
  }
  double atom() {
    if (accept_punct("(")) {
      double v = expr();
      expect_punct(")");
      return v;
    }
    if (peek().kind == Tok::Kind::Number) {
      const Tok& t = next();
      double v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{} || p != t.text.data() + t.text.size())
        throw SyntaxError(t.line, t.column, {"number"}, t.text);
      return v;
    }
    if (peek().kind == Tok::Kind::Ident) {
      const Tok& t = next();
      if (t.text == "pi") return std::numbers::pi;
      static const std::map<std::string, double (*)(double)> fns = {
          {"sin", [](double x) { return std::sin(x); }},  {"cos", [](double x) { return std::cos(x); }},
          {"tan", [](double x) { return std::tan(x); }},  {"exp", [](double x) { return std::exp(x); }},
          {"ln", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }}};
      auto it = fns.find(t.text);
      if (it == fns.end()) throw SyntaxError(t.line, t.column, {"parameter expression"}, t.text);
      expect_punct("(");
      double v = expr();
      expect_punct(")");
      return it->second(v);
    }
    fail({"parameter expression"});
  }

  // A qubit argument: either reg[i] or a whole register.
  std::vector<std::uint32_t> qarg() {
    const Tok& name = expect(Tok::Kind::Ident, "register");
    auto it = qregs_.find(name.text);
    if (it == qregs_.end()) throw SyntaxError(name.line, name.column, {"quantum register"}, name.text);
    if (accept_punct("[")) {
      const Tok& at = peek();
      std::uint32_t i = integer();
      expect_punct("]");
      if (i >= it->second.size)
        throw SyntaxError(at.line, at.column, {"index < " + std::to_string(it->second.size)},
                          std::to_string(i));
      return {it->second.offset + i};
    }
    std::vector<std::uint32_t> all;
    for (std::uint32_t i = 0; i < it->second.size; ++i) all.push_back(it->second.offset + i);
    return all;
  }

  void carg() {
    const Tok& name = expect(Tok::Kind::Ident, "register");
    if (!cregs_.count(name.text))
      throw SyntaxError(name.line, name.column, {"classical register"}, name.text);
    if (accept_punct("[")) {
      integer();
      expect_punct("]");
    }
  }

  void emit(GateKind k, std::vector<double> params, std::vector<std::uint32_t> qs) {
    circ_.ops.push_back({CircuitOp::Kind::Gate, Gate{k, std::move(params)}, std::move(qs)});
  }

  void ccx(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    emit(GateKind::H, {}, {c});
    emit(GateKind::CX, {}, {b, c});
    emit(GateKind::Tdg, {}, {c});
    emit(GateKind::CX, {}, {a, c});
    emit(GateKind::T, {}, {c});
    emit(GateKind::CX, {}, {b, c});
    emit(GateKind::Tdg, {}, {c});
    emit(GateKind::CX, {}, {a, c});
    emit(GateKind::T, {}, {b});
    emit(GateKind::T, {}, {c});
    emit(GateKind::H, {}, {c});
    emit(GateKind::CX, {}, {a, b});
    emit(GateKind::T, {}, {a});
    emit(GateKind::Tdg, {}, {b});
    emit(GateKind::CX, {}, {a, b});
  }

  void statement() {
    const Tok& head = expect(Tok::Kind::Ident, "statement");
    const std::string kw = head.text;
    if (kw == "include") {
      expect(Tok::Kind::String, "file name");
      expect_punct(";");
      return;
    }
    if (kw == "qreg" || kw == "creg") {
      const Tok& name = expect(Tok::Kind::Ident, "register name");
      expect_punct("[");
      std::uint32_t n = integer();
      expect_punct("]");
      expect_punct(";");
      if (qregs_.count(name.text) || cregs_.count(name.text))
        throw SyntaxError(name.line, name.column, {"fresh register name"}, name.text);
      if (kw == "qreg") {
        qregs_[name.text] = {circ_.num_qubits, n};
        circ_.num_qubits += n;
      } else {
        cregs_[name.text] = n;
      }
      return;
    }
    if (kw == "measure") {
      auto qs = qarg();
      if (peek().kind != Tok::Kind::Arrow) fail({"'->'"});
      next();
      carg();
      expect_punct(";");
      for (auto q : qs) circ_.ops.push_back({CircuitOp::Kind::Measure, Gate{}, {q}});
      return;
    }
    if (kw == "barrier") {
      std::vector<std::uint32_t> qs;
      do {
        auto more = qarg();
        qs.insert(qs.end(), more.begin(), more.end());
      } while (accept_punct(","));
      expect_punct(";");
      circ_.ops.push_back({CircuitOp::Kind::Barrier, Gate{}, std::move(qs)});
      return;
    }

    static const std::map<std::string, GateKind> table = {
        {"x", GateKind::X},   {"y", GateKind::Y},     {"z", GateKind::Z},   {"h", GateKind::H},
        {"s", GateKind::S},   {"sdg", GateKind::Sdg}, {"t", GateKind::T},   {"tdg", GateKind::Tdg},
        {"rx", GateKind::RX}, {"ry", GateKind::RY},   {"rz", GateKind::RZ}, {"u1", GateKind::U1},
        {"u2", GateKind::U2}, {"u3", GateKind::U3},   {"U", GateKind::U3},  {"cx", GateKind::CX},
        {"CX", GateKind::CX}};
    const bool is_ccx = kw == "ccx";
    auto it = table.find(kw);
    if (!is_ccx && it == table.end()) throw UnsupportedGate(kw);

    std::vector<double> params;
    if (accept_punct("(")) {
      if (!accept_punct(")")) {
        do params.push_back(expr());
        while (accept_punct(","));
        expect_punct(")");
      }
    }
    std::vector<std::vector<std::uint32_t>> args;
    do args.push_back(qarg());
    while (accept_punct(","));
    expect_punct(";");

    const std::size_t arity = is_ccx ? 3 : gate_arity(it->second);
    const std::size_t nparams = is_ccx ? 0 : gate_param_count(it->second);
    if (params.size() != nparams)
      throw SyntaxError(head.line, head.column, {std::to_string(nparams) + " parameter(s)"},
                        std::to_string(params.size()));
    if (args.size() != arity)
      throw SyntaxError(head.line, head.column, {std::to_string(arity) + " argument(s)"},
                        std::to_string(args.size()));

    // Register broadcast: whole-register arguments must agree in size.
    std::size_t width = 1;
    for (const auto& a : args)
      if (a.size() != 1) {
        if (width != 1 && a.size() != width)
          throw SyntaxError(head.line, head.column, {"registers of equal size"}, kw);
        width = a.size();
      }
    for (std::size_t k = 0; k < width; ++k) {
      std::vector<std::uint32_t> qs;
      for (const auto& a : args) qs.push_back(a.size() == 1 ? a[0] : a[k]);
      for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = i + 1; j < qs.size(); ++j)
          if (qs[i] == qs[j])
            throw SyntaxError(head.line, head.column, {"distinct qubit arguments"}, kw);
      if (is_ccx) ccx(qs[0], qs[1], qs[2]);
      else emit(it->second, params, std::move(qs));
    }
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
  Circuit circ_;
  std::map<std::string, Register> qregs_;
  std::map<std::string, std::uint32_t> cregs_;
};

}  // namespace

Circuit parse_qasm(std::string_view text) { return QasmParser(QasmLexer(text).run()).run(); }

QubitMap partition(const Circuit& circ, const ArchConfig& arch) {
  QubitMap map;
  for (const auto& p : arch.processors)
    for (std::uint32_t s = 0; s < p.data_qubits && map.size() < circ.num_qubits; ++s)
      map.push_back({p.id, s});
  if (map.size() < circ.num_qubits)
    throw CapacityExceeded("circuit needs " + std::to_string(circ.num_qubits) +
                           " data qubits, architecture provides " +
                           std::to_string(arch.total_data_qubits()));
  return map;
}

namespace {

class Lowering {
 public:
  Lowering(const Circuit& circ, const QubitMap& map, const ArchConfig& arch, const LowerOptions& opt)
      : circ_(circ), map_(map), arch_(arch), opt_(opt) {
    std::vector<ParticipantId> all;
    for (const auto& p : arch.processors) {
      index_[p.id] = sys_.processes.size();
      Process proc;
      proc.location = p.id;
      sys_.processes.push_back(std::move(proc));
      all.push_back(p.id);
    }
    for (auto& proc : sys_.processes) proc.body.push_back(Open{opt_.session, all});
    for (std::uint32_t i = 0; i < circ.num_qubits; ++i) body(map_[i].processor).push_back(Init{qvar(i)});
  }

  System run() {
    for (const auto& op : circ_.ops) {
      switch (op.kind) {
        case CircuitOp::Kind::Barrier:
          break;
        case CircuitOp::Kind::Measure: {
          const auto q = op.qubits[0];
          body(map_[q].processor)
              .push_back(Measure{"m" + std::to_string(measures_++), {Expr::var(qvar(q))}});
          break;
        }
        case CircuitOp::Kind::Gate:
          if (op.qubits.size() == 1) {
            body(map_[op.qubits[0]].processor)
                .push_back(ApplyGate{op.gate, {Expr::var(qvar(op.qubits[0]))}, std::nullopt});
          } else {
            two_qubit(op);
          }
          break;
      }
    }
    for (auto& proc : sys_.processes) {
      if (opt_.free_data)
        for (std::uint32_t i = 0; i < circ_.num_qubits; ++i)
          if (map_[i].processor == proc.location) proc.body.push_back(Free{Expr::var(qvar(i))});
      if (opt_.close_session) proc.body.push_back(Close{opt_.session});
    }
    return std::move(sys_);
  }

 private:
  static std::string qvar(std::uint32_t i) { return "q" + std::to_string(i); }

  Block& body(ParticipantId p) { return sys_.processes[index_.at(p)].body; }

  void two_qubit(const CircuitOp& op) {
    const auto c = op.qubits[0], t = op.qubits[1];
    const ParticipantId pc = map_[c].processor, pt = map_[t].processor;
    if (pc == pt) {
      body(pc).push_back(ApplyGate{op.gate, {Expr::var(qvar(c)), Expr::var(qvar(t))}, std::nullopt});
      return;
    }
    const auto path = arch_.shortest_path(pc, pt);
    if (path.empty())
      throw DisconnectedTopology("no path between processors " + std::to_string(pc) + " and " +
                                 std::to_string(pt));
    const std::string r = std::to_string(remote_++);
    const std::size_t k = path.size() - 1;
    auto a_var = [&](std::size_t j) { return "a" + r + "_" + std::to_string(j); };
    auto b_var = [&](std::size_t j) { return "b" + r + "_" + std::to_string(j); };
    auto link = [&](std::size_t j) { return "g" + r + "_" + std::to_string(j); };

    // Endpoint n0: the left end of link 0.
    body(path[0]).push_back(GenEnt{a_var(0), path[1], link(0)});
    // Intermediate nodes swap their two halves and report the outcomes.
    for (std::size_t j = 1; j < k; ++j) {
      Block& b = body(path[j]);
      const std::string w = "w" + r + "_" + std::to_string(j);
      b.push_back(GenEnt{b_var(j - 1), path[j - 1], link(j - 1)});
      b.push_back(GenEnt{a_var(j), path[j + 1], link(j)});
      b.push_back(EntSwap{w + "z", w + "x", Expr::var(b_var(j - 1)), Expr::var(a_var(j))});
      b.push_back(Send{opt_.session, path[0], "z" + r + "_" + std::to_string(j), Expr::var(w + "z")});
      b.push_back(Send{opt_.session, path[k], "x" + r + "_" + std::to_string(j), Expr::var(w + "x")});
    }
    body(path[k]).push_back(GenEnt{b_var(k - 1), path[k - 1], link(k - 1)});
    for (std::size_t j = 1; j < k; ++j) {
      const std::string v = "v" + r + "_" + std::to_string(j);
      body(path[0]).push_back(Recv{opt_.session, "z" + r + "_" + std::to_string(j), v + "z"});
      body(path[0]).push_back(
          ApplyGate{{GateKind::Z, {}}, {Expr::var(a_var(0))}, Expr::var(v + "z")});
      body(path[k]).push_back(Recv{opt_.session, "x" + r + "_" + std::to_string(j), v + "x"});
      body(path[k]).push_back(
          ApplyGate{{GateKind::X, {}}, {Expr::var(b_var(k - 1))}, Expr::var(v + "x")});
    }
    body(path[0]).push_back(RemoteCx{CxRole::Control, path[k], opt_.session, "r" + r,
                                     Expr::var(qvar(c)), Expr::var(a_var(0))});
    body(path[k]).push_back(RemoteCx{CxRole::Target, path[0], opt_.session, "r" + r,
                                     Expr::var(qvar(t)), Expr::var(b_var(k - 1))});
  }

  const Circuit& circ_;
  const QubitMap& map_;
  const ArchConfig& arch_;
  const LowerOptions& opt_;
  System sys_;
  std::map<ParticipantId, std::size_t> index_;
  std::size_t remote_ = 0;
  std::size_t measures_ = 0;
};

}  // namespace

System lower(const Circuit& circ, const QubitMap& map, const ArchConfig& arch,
             const LowerOptions& options) {
  if (map.size() < circ.num_qubits) throw CapacityExceeded("qubit map does not cover the circuit");
  for (const auto& op : circ.ops)
    if (op.kind == CircuitOp::Kind::Gate && op.gate.kind != GateKind::CX && op.qubits.size() != 1)
      throw UnsupportedGate(std::string(gate_name(op.gate.kind)));
  return Lowering(circ, map, arch, options).run();
}

System compile(const Circuit& circ, const ArchConfig& arch, const LowerOptions& options) {
  return lower(circ, partition(circ, arch), arch, options);
}

}  // namespace inquir
