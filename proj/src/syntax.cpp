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

#include "inquir/syntax.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "inquir/errors.hpp"

namespace inquir {

namespace {

enum class Tok { Ident, Int, Number, Qubit, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const std::set<std::string, std::less<>> kKeywords{
    "process", "stop",  "free",  "close", "if",   "else",    "qsend",  "qrecv",
    "rcxc",    "rcxt",  "entSwap", "open", "init", "measure", "genEnt"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    std::size_t l = line, cl = col, start = i;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      advance(j - i);
      out.push_back({Tok::Ident, std::string(src.substr(start, j - start)), l, cl});
      continue;
    }
    if (c == '$' && i + 2 < src.size() + 1 && i + 1 < src.size() &&
        (src[i + 1] == 'd' || src[i + 1] == 'c')) {
      std::size_t j = i + 2;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j == i + 2) throw SyntaxError(l, cl, {"qubit literal"}, "'$'");
      advance(j - i);
      out.push_back({Tok::Qubit, std::string(src.substr(start, j - start)), l, cl});
      continue;
    }
    if (is_digit(c) || ((c == '-' || c == '+' || c == '.') && i + 1 < src.size() &&
                        (is_digit(src[i + 1]) || src[i + 1] == '.'))) {
      std::size_t j = i;
      if (src[j] == '-' || src[j] == '+') ++j;
      bool real = false;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j < src.size() && src[j] == '.') {
        real = true;
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '-' || src[k] == '+')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          real = true;
          j = k;
          while (j < src.size() && is_digit(src[j])) ++j;
        }
      }
      if (c == '-' || c == '+') real = true;
      advance(j - i);
      out.push_back({real ? Tok::Number : Tok::Int, std::string(src.substr(start, j - start)), l,
                     cl});
      continue;
    }
    static constexpr std::string_view kPunct = "{}()[]<>;,=!?:^&";
    if (kPunct.find(c) != std::string_view::npos) {
      advance(1);
      out.push_back({Tok::Punct, std::string(1, c), l, cl});
      continue;
    }
    throw SyntaxError(l, cl, {"token"}, std::string("'") + c + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  System program() {
    System sys;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      const Token& head = peek();
      expect_keyword("process");
      Process p;
      p.loc = {head.line, head.column};
      p.location = participant();
      if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
        const Token& n = next();
        if (!names.insert(n.text).second)
          throw DuplicateProcessHeader(std::to_string(n.line) + ":" + std::to_string(n.column) +
                                       ": duplicate process name '" + n.text + "'");
        p.name = n.text;
      }
      p.body = block();
      sys.processes.push_back(std::move(p));
    }
    return sys;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.line, t.column, std::move(expected), std::move(found));
  }

  bool at_punct(char c) const { return peek().kind == Tok::Punct && peek().text[0] == c; }
  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  void expect_punct(char c) {
    if (!at_punct(c)) fail({std::string("'") + c + "'"});
    next();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    next();
  }

  std::string ident() {
    if (peek().kind != Tok::Ident || kKeywords.count(peek().text)) fail({"identifier"});
    return next().text;
  }

  ParticipantId participant() {
    if (peek().kind != Tok::Int || peek().text[0] == '+') fail({"participant id"});
    const std::string& t = next().text;
    ParticipantId v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail({"participant id"});
    return v;
  }

  double number() {
    if (peek().kind != Tok::Int && peek().kind != Tok::Number) fail({"number"});
    std::string t = next().text;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) fail({"number"});
    return v;
  }

  Block block() {
    expect_punct('{');
    Block b;
    while (!at_punct('}')) {
      if (peek().kind == Tok::End) fail({"statement", "'}'"});
      b.push_back(statement());
    }
    next();
    return b;
  }

  Expr expr() {
    Expr e = conj();
    while (at_punct('^')) {
      next();
      e = Expr::exclusive(std::move(e), conj());
    }
    return e;
  }
  Expr conj() {
    Expr e = unary();
    while (at_punct('&')) {
      next();
      e = Expr::conj(std::move(e), unary());
    }
    return e;
  }
  Expr unary() {
    if (at_punct('!')) {
      next();
      return Expr::negate(unary());
    }
    return atom();
  }
  Expr atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int && (t.text == "0" || t.text == "1")) {
      next();
      return Expr::bit(t.text == "1");
    }
    if (t.kind == Tok::Qubit) {
      next();
      QubitRef q{t.text[1] == 'd' ? QubitKind::Data : QubitKind::Comm, 0};
      auto [ptr, ec] = std::from_chars(t.text.data() + 2, t.text.data() + t.text.size(), q.uid);
      if (ec != std::errc()) throw SyntaxError(t.line, t.column, {"qubit literal"}, t.text);
      return Expr::qubit(q);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      return Expr::var(t.text);
    }
    if (at_punct('(')) {
      next();
      Expr e = expr();
      expect_punct(')');
      return e;
    }
    fail({"expression"});
  }

  std::vector<Expr> expr_list() {
    std::vector<Expr> xs{expr()};
    while (at_punct(',')) {
      next();
      xs.push_back(expr());
    }
    return xs;
  }

  void end_statement() { expect_punct(';'); }

  Instr statement() {
    const Token& t = peek();
    SourceLoc loc{t.line, t.column};
    if (t.kind == Tok::Punct && t.text == "(") return entswap(loc);
    if (t.kind != Tok::Ident) fail({"statement"});
    const std::string& w = t.text;
    if (w == "stop") {
      next();
      end_statement();
      return {Stop{}, loc};
    }
    if (w == "free") {
      next();
      Free f{expr()};
      end_statement();
      return {std::move(f), loc};
    }
    if (w == "close") {
      next();
      expect_punct('(');
      Close c{ident()};
      expect_punct(')');
      end_statement();
      return {std::move(c), loc};
    }
    if (w == "if") {
      next();
      If br;
      br.condition = expr();
      br.then_block = block();
      if (at_keyword("else")) {
        next();
        br.else_block = block();
      }
      return {std::move(br), loc};
    }
    if (w == "qsend") {
      next();
      QSend q;
      q.partner = bracket_participant();
      expect_punct('(');
      q.session = ident();
      expect_punct(',');
      q.label = ident();
      expect_punct(',');
      q.data = expr();
      expect_punct(',');
      q.comm = expr();
      expect_punct(')');
      end_statement();
      return {std::move(q), loc};
    }
    if (w == "rcxc" || w == "rcxt") {
      next();
      RemoteCx r;
      r.role = w == "rcxc" ? CxRole::Control : CxRole::Target;
      r.partner = bracket_participant();
      expect_punct('(');
      r.session = ident();
      expect_punct(',');
      r.label = ident();
      expect_punct(',');
      r.data = expr();
      expect_punct(',');
      r.comm = expr();
      expect_punct(')');
      end_statement();
      return {std::move(r), loc};
    }
    if (kKeywords.count(w)) fail({"statement"});

    // Identifier-led statements: dispatch on the following token.
    const Token& after = peek(1);
    if (after.kind == Tok::Punct) {
      switch (after.text[0]) {
        case '=':
          return binding(loc);
        case '[':
          return send(loc);
        case '?':
          return recv(loc);
        case '(':
        case '<':
        case '^':
          return gate(loc);
        default:
          break;
      }
    }
    next();
    fail({"'='", "'['", "'?'", "'('"});
  }

  ParticipantId bracket_participant() {
    expect_punct('[');
    ParticipantId p = participant();
    expect_punct(']');
    return p;
  }

  Instr entswap(SourceLoc loc) {
    expect_punct('(');
    EntSwap e;
    e.out1 = ident();
    expect_punct(',');
    e.out2 = ident();
    expect_punct(')');
    expect_punct('=');
    expect_keyword("entSwap");
    expect_punct('(');
    e.first = expr();
    expect_punct(',');
    e.second = expr();
    expect_punct(')');
    end_statement();
    return {std::move(e), loc};
  }

  Instr binding(SourceLoc loc) {
    std::string var = ident();
    expect_punct('=');
    if (at_keyword("open")) {
      next();
      Open o;
      o.session = std::move(var);
      expect_punct('[');
      o.participants.push_back(participant());
      while (at_punct(',')) {
        next();
        o.participants.push_back(participant());
      }
      expect_punct(']');
      end_statement();
      return {std::move(o), loc};
    }
    if (at_keyword("init")) {
      next();
      expect_punct('(');
      expect_punct(')');
      end_statement();
      return {Init{std::move(var)}, loc};
    }
    if (at_keyword("measure")) {
      next();
      expect_punct('(');
      Measure m{std::move(var), expr_list()};
      expect_punct(')');
      end_statement();
      return {std::move(m), loc};
    }
    if (at_keyword("genEnt")) {
      next();
      GenEnt g;
      g.var = std::move(var);
      g.partner = bracket_participant();
      expect_punct('(');
      g.label = ident();
      expect_punct(')');
      end_statement();
      return {std::move(g), loc};
    }
    if (at_keyword("qrecv")) {
      next();
      QRecv q;
      q.var = std::move(var);
      expect_punct('(');
      q.session = ident();
      expect_punct(',');
      q.label = ident();
      expect_punct(',');
      q.comm = expr();
      expect_punct(')');
      end_statement();
      return {std::move(q), loc};
    }
    Assign a{std::move(var), expr()};
    end_statement();
    return {std::move(a), loc};
  }

  Instr send(SourceLoc loc) {
    Send s;
    s.session = ident();
    s.partner = bracket_participant();
    expect_punct('!');
    expect_punct('(');
    s.label = ident();
    expect_punct(':');
    s.payload = expr();
    expect_punct(')');
    end_statement();
    return {std::move(s), loc};
  }

  Instr recv(SourceLoc loc) {
    Recv r;
    r.session = ident();
    expect_punct('?');
    expect_punct('(');
    r.label = ident();
    expect_punct(':');
    r.var = ident();
    expect_punct(')');
    end_statement();
    return {std::move(r), loc};
  }

  Instr gate(SourceLoc loc) {
    const Token& name = peek();
    auto kind = gate_from_name(name.text);
    if (!kind) fail({"gate name"});
    next();
    ApplyGate g;
    g.gate.kind = *kind;
    if (at_punct('<')) {
      next();
      g.gate.params.push_back(number());
      while (at_punct(',')) {
        next();
        g.gate.params.push_back(number());
      }
      expect_punct('>');
    }
    if (g.gate.params.size() != gate_param_count(*kind))
      throw SyntaxError(name.line, name.column,
                        {std::to_string(gate_param_count(*kind)) + " gate parameter(s)"},
                        std::to_string(g.gate.params.size()));
    if (at_punct('^')) {
      next();
      g.condition = atom();
    }
    expect_punct('(');
    g.operands = expr_list();
    expect_punct(')');
    if (g.operands.size() != gate_arity(*kind))
      throw SyntaxError(name.line, name.column,
                        {std::to_string(gate_arity(*kind)) + " operand(s)"},
                        std::to_string(g.operands.size()));
    end_statement();
    return {std::move(g), loc};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool is_binary(const Expr& e) {
  return e.kind() == Expr::Kind::And || e.kind() == Expr::Kind::Xor;
}

void print_expr_to(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& e) {
  if (is_binary(e)) {
    os << '(';
    print_expr_to(os, e);
    os << ')';
  } else {
    print_expr_to(os, e);
  }
}

void print_value(std::ostream& os, const Value& v) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bit>)
          os << (x.value ? '1' : '0');
        else if constexpr (std::is_same_v<T, Var>)
          os << x.name;
        else
          os << to_string(x);
      },
      v);
}

void print_expr_to(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Value:
      print_value(os, e.value());
      break;
    case Expr::Kind::Not:
      os << '!';
      if (e.lhs().kind() == Expr::Kind::Value || e.lhs().kind() == Expr::Kind::Not)
        print_expr_to(os, e.lhs());
      else
        print_operand(os, e.lhs());
      break;
    case Expr::Kind::And:
    case Expr::Kind::Xor:
      print_operand(os, e.lhs());
      os << (e.kind() == Expr::Kind::And ? " & " : " ^ ");
      print_operand(os, e.rhs());
      break;
  }
}

template <typename Seq>
void print_list(std::ostream& os, const Seq& xs) {
  bool first = true;
  for (const auto& x : xs) {
    if (!first) os << ", ";
    first = false;
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Expr>)
      print_expr_to(os, x);
    else
      os << x;
  }
}

void print_block(std::ostream& os, const Block& b, int indent);

void print_instr_to(std::ostream& os, const Instr& instr, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stop>) {
          os << "stop;";
        } else if constexpr (std::is_same_v<T, Open>) {
          os << x.session << " = open[";
          print_list(os, x.participants);
          os << "];";
        } else if constexpr (std::is_same_v<T, Close>) {
          os << "close(" << x.session << ");";
        } else if constexpr (std::is_same_v<T, Init>) {
          os << x.var << " = init();";
        } else if constexpr (std::is_same_v<T, Free>) {
          os << "free ";
          print_expr_to(os, x.target);
          os << ';';
        } else if constexpr (std::is_same_v<T, Assign>) {
          os << x.var << " = ";
          print_expr_to(os, x.value);
          os << ';';
        } else if constexpr (std::is_same_v<T, ApplyGate>) {
          os << gate_name(x.gate.kind);
          if (!x.gate.params.empty()) {
            os << '<';
            for (std::size_t i = 0; i < x.gate.params.size(); ++i)
              os << (i ? ", " : "") << format_double(x.gate.params[i]);
            os << '>';
          }
          if (x.condition) {
            os << '^';
            if (x.condition->kind() == Expr::Kind::Value) {
              print_expr_to(os, *x.condition);
            } else {
              os << '(';
              print_expr_to(os, *x.condition);
              os << ')';
            }
          }
          os << '(';
          print_list(os, x.operands);
          os << ");";
        } else if constexpr (std::is_same_v<T, Measure>) {
          os << x.var << " = measure(";
          print_list(os, x.operands);
          os << ");";
        } else if constexpr (std::is_same_v<T, GenEnt>) {
          os << x.var << " = genEnt[" << x.partner << "](" << x.label << ");";
        } else if constexpr (std::is_same_v<T, EntSwap>) {
          os << '(' << x.out1 << ", " << x.out2 << ") = entSwap(";
          print_expr_to(os, x.first);
          os << ", ";
          print_expr_to(os, x.second);
          os << ");";
        } else if constexpr (std::is_same_v<T, If>) {
          os << "if ";
          print_expr_to(os, x.condition);
          os << " {\n";
          print_block(os, x.then_block, indent + 1);
          os << pad << '}';
          if (!x.else_block.empty()) {
            os << " else {\n";
            print_block(os, x.else_block, indent + 1);
            os << pad << '}';
          }
        } else if constexpr (std::is_same_v<T, QSend>) {
          os << "qsend[" << x.partner << "](" << x.session << ", " << x.label << ", ";
          print_expr_to(os, x.data);
          os << ", ";
          print_expr_to(os, x.comm);
          os << ");";
        } else if constexpr (std::is_same_v<T, QRecv>) {
          os << x.var << " = qrecv(" << x.session << ", " << x.label << ", ";
          print_expr_to(os, x.comm);
          os << ");";
        } else if constexpr (std::is_same_v<T, RemoteCx>) {
          os << (x.role == CxRole::Control ? "rcxc[" : "rcxt[") << x.partner << "](" << x.session
             << ", " << x.label << ", ";
          print_expr_to(os, x.data);
          os << ", ";
          print_expr_to(os, x.comm);
          os << ");";
        } else if constexpr (std::is_same_v<T, Send>) {
          os << x.session << '[' << x.partner << "]!(" << x.label << ": ";
          print_expr_to(os, x.payload);
          os << ");";
        } else if constexpr (std::is_same_v<T, Recv>) {
          os << x.session << "?(" << x.label << ": " << x.var << ");";
        }
      },
      instr.body);
}

void print_block(std::ostream& os, const Block& b, int indent) {
  for (const auto& i : b) {
    print_instr_to(os, i, indent);
    os << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

System parse_program(std::string_view text) { return Parser(lex(text)).program(); }

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_to(os, e);
  return os.str();
}

std::string print_instr(const Instr& instr) {
  std::ostringstream os;
  print_instr_to(os, instr, 0);
  std::string s = os.str();
  for (auto& c : s)
    if (c == '\n') c = ' ';
  return s;
}

std::string print_program(const System& sys) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sys.processes.size(); ++i) {
    const auto& p = sys.processes[i];
    if (i) os << '\n';
    os << "process " << p.location;
    if (!p.name.empty()) os << ' ' << p.name;
    os << " {\n";
    print_block(os, p.body, 1);
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

json to_json(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Value:
      return std::visit(
          [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Bit>)
              return {{"bit", x.value ? 1 : 0}};
            else if constexpr (std::is_same_v<T, Var>)
              return {{"var", x.name}};
            else
              return {{"qubit",
                       {{"kind", x.kind == QubitKind::Data ? "data" : "comm"}, {"uid", x.uid}}}};
          },
          e.value());
    case Expr::Kind::Not:
      return {{"not", to_json(e.lhs())}};
    case Expr::Kind::And:
      return {{"and", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
    case Expr::Kind::Xor:
      return {{"xor", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
  }
  return nullptr;
}

namespace {

json exprs_to_json(const std::vector<Expr>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

json block_to_json(const Block& b) {
  json a = json::array();
  for (const auto& i : b) a.push_back(to_json(i));
  return a;
}

Expr expr_from_json(const json& j) {
  if (j.contains("bit")) return Expr::bit(j.at("bit").get<int>() != 0);
  if (j.contains("var")) return Expr::var(j.at("var").get<std::string>());
  if (j.contains("qubit")) {
    const auto& q = j.at("qubit");
    return Expr::qubit({q.at("kind").get<std::string>() == "data" ? QubitKind::Data
                                                                  : QubitKind::Comm,
                        q.at("uid").get<std::uint32_t>()});
  }
  if (j.contains("not")) return Expr::negate(expr_from_json(j.at("not")));
  if (j.contains("and"))
    return Expr::conj(expr_from_json(j.at("and").at(0)), expr_from_json(j.at("and").at(1)));
  if (j.contains("xor"))
    return Expr::exclusive(expr_from_json(j.at("xor").at(0)), expr_from_json(j.at("xor").at(1)));
  throw Error("malformed expression JSON: " + j.dump());
}

std::vector<Expr> exprs_from_json(const json& j) {
  std::vector<Expr> xs;
  for (const auto& x : j) xs.push_back(expr_from_json(x));
  return xs;
}

Instr instr_from_json(const json& j);

Block block_from_json(const json& j) {
  Block b;
  for (const auto& x : j) b.push_back(instr_from_json(x));
  return b;
}

Instr instr_from_json(const json& j) {
  const std::string op = j.at("op").get<std::string>();
  auto str = [&](const char* k) { return j.at(k).get<std::string>(); };
  auto pid = [&](const char* k) { return j.at(k).get<ParticipantId>(); };
  if (op == "stop") return Stop{};
  if (op == "open") return Open{str("session"), j.at("participants").get<std::vector<ParticipantId>>()};
  if (op == "close") return Close{str("session")};
  if (op == "init") return Init{str("var")};
  if (op == "free") return Free{expr_from_json(j.at("target"))};
  if (op == "assign") return Assign{str("var"), expr_from_json(j.at("value"))};
  if (op == "gate") {
    ApplyGate g;
    auto k = gate_from_name(str("gate"));
    if (!k) throw UnsupportedGate(str("gate"));
    g.gate.kind = *k;
    g.gate.params = j.value("params", std::vector<double>{});
    g.operands = exprs_from_json(j.at("operands"));
    if (j.contains("condition")) g.condition = expr_from_json(j.at("condition"));
    return g;
  }
  if (op == "measure") return Measure{str("var"), exprs_from_json(j.at("operands"))};
  if (op == "genEnt") return GenEnt{str("var"), pid("partner"), str("label")};
  if (op == "entSwap")
    return EntSwap{j.at("out").at(0).get<std::string>(), j.at("out").at(1).get<std::string>(),
                   expr_from_json(j.at("operands").at(0)), expr_from_json(j.at("operands").at(1))};
  if (op == "if")
    return If{expr_from_json(j.at("condition")), block_from_json(j.at("then")),
              block_from_json(j.at("else"))};
  if (op == "qsend")
    return QSend{pid("partner"), str("session"), str("label"), expr_from_json(j.at("data")),
                 expr_from_json(j.at("comm"))};
  if (op == "qrecv") return QRecv{str("var"), str("session"), str("label"), expr_from_json(j.at("comm"))};
  if (op == "rcxc" || op == "rcxt")
    return RemoteCx{op == "rcxc" ? CxRole::Control : CxRole::Target, pid("partner"),
                    str("session"), str("label"), expr_from_json(j.at("data")),
                    expr_from_json(j.at("comm"))};
  if (op == "send")
    return Send{str("session"), pid("partner"), str("label"), expr_from_json(j.at("payload"))};
  if (op == "recv") return Recv{str("session"), str("label"), str("var")};
  throw Error("unknown op in JSON: " + op);
}

}  // namespace

json to_json(const Instr& instr) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Stop>) {
          return {{"op", "stop"}};
        } else if constexpr (std::is_same_v<T, Open>) {
          return {{"op", "open"}, {"session", x.session}, {"participants", x.participants}};
        } else if constexpr (std::is_same_v<T, Close>) {
          return {{"op", "close"}, {"session", x.session}};
        } else if constexpr (std::is_same_v<T, Init>) {
          return {{"op", "init"}, {"var", x.var}};
        } else if constexpr (std::is_same_v<T, Free>) {
          return {{"op", "free"}, {"target", to_json(x.target)}};
        } else if constexpr (std::is_same_v<T, Assign>) {
          return {{"op", "assign"}, {"var", x.var}, {"value", to_json(x.value)}};
        } else if constexpr (std::is_same_v<T, ApplyGate>) {
          json o = {{"op", "gate"},
                    {"gate", std::string(gate_name(x.gate.kind))},
                    {"operands", exprs_to_json(x.operands)}};
          if (!x.gate.params.empty()) o["params"] = x.gate.params;
          if (x.condition) o["condition"] = to_json(*x.condition);
          return o;
        } else if constexpr (std::is_same_v<T, Measure>) {
          return {{"op", "measure"}, {"var", x.var}, {"operands", exprs_to_json(x.operands)}};
        } else if constexpr (std::is_same_v<T, GenEnt>) {
          return {{"op", "genEnt"}, {"var", x.var}, {"partner", x.partner}, {"label", x.label}};
        } else if constexpr (std::is_same_v<T, EntSwap>) {
          return {{"op", "entSwap"},
                  {"out", {x.out1, x.out2}},
                  {"operands", {to_json(x.first), to_json(x.second)}}};
        } else if constexpr (std::is_same_v<T, If>) {
          return {{"op", "if"},
                  {"condition", to_json(x.condition)},
                  {"then", block_to_json(x.then_block)},
                  {"else", block_to_json(x.else_block)}};
        } else if constexpr (std::is_same_v<T, QSend>) {
          return {{"op", "qsend"},     {"partner", x.partner},      {"session", x.session},
                  {"label", x.label},  {"data", to_json(x.data)}, {"comm", to_json(x.comm)}};
        } else if constexpr (std::is_same_v<T, QRecv>) {
          return {{"op", "qrecv"},
                  {"var", x.var},
                  {"session", x.session},
                  {"label", x.label},
                  {"comm", to_json(x.comm)}};
        } else if constexpr (std::is_same_v<T, RemoteCx>) {
          return {{"op", x.role == CxRole::Control ? "rcxc" : "rcxt"},
                  {"partner", x.partner},
                  {"session", x.session},
                  {"label", x.label},
                  {"data", to_json(x.data)},
                  {"comm", to_json(x.comm)}};
        } else if constexpr (std::is_same_v<T, Send>) {
          return {{"op", "send"},
                  {"session", x.session},
                  {"partner", x.partner},
                  {"label", x.label},
                  {"payload", to_json(x.payload)}};
        } else {
          return {{"op", "recv"}, {"session", x.session}, {"label", x.label}, {"var", x.var}};
        }
      },
      instr.body);
}

json to_json(const System& sys) {
  json procs = json::array();
  for (const auto& p : sys.processes) {
    json o = {{"location", p.location}, {"body", block_to_json(p.body)}};
    if (!p.name.empty()) o["name"] = p.name;
    procs.push_back(std::move(o));
  }
  return {{"processes", procs}};
}

System system_from_json(const json& j) {
  System sys;
  for (const auto& p : j.at("processes")) {
    Process proc;
    proc.location = p.at("location").get<ParticipantId>();
    proc.name = p.value("name", std::string{});
    proc.body = block_from_json(p.at("body"));
    sys.processes.push_back(std::move(proc));
  }
  return sys;
}

}  // namespace inquir
