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

#include "inquir/checker.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace inquir {

namespace {

std::string loc_string(const SourceLoc& l) {
  return std::to_string(l.line) + ":" + std::to_string(l.column);
}

void sort_unique(std::vector<Diagnostic>& d) {
  auto key = [](const Diagnostic& x) {
    return std::tie(x.loc.line, x.loc.column, x.code, x.process, x.message);
  };
  std::sort(d.begin(), d.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  d.erase(std::unique(d.begin(), d.end()), d.end());
}

// ---- linearity --------------------------------------------------------------

struct Token {
  bool qubit = false;
  bool live = true;
  SourceLoc bound_at;
  std::string name;
};

struct PathState {
  std::map<std::string, std::size_t> env;  // var -> token
  std::vector<Token> tokens;
};

class LinearLint {
 public:
  LinearLint(const Process& p, std::size_t index) : proc_(p), index_(index) {}

  std::vector<Diagnostic> run() {
    PathState s;
    walk(proc_.body, 0, s, {});
    return std::move(out_);
  }

 private:
  static constexpr std::size_t kMaxPaths = 4096;

  void report(Severity sev, std::string code, std::string msg, SourceLoc loc) {
    out_.push_back({sev, std::move(code), std::move(msg), loc, index_});
  }

  // Continuation frames: the rest of enclosing blocks after an if.
  struct Cont {
    const Block* block;
    std::size_t index;
  };

  void walk(const Block& b, std::size_t from, PathState s, std::vector<Cont> rest) {
    for (std::size_t i = from; i < b.size(); ++i) {
      const Instr& in = b[i];
      if (std::holds_alternative<Stop>(in.body)) {
        finish(s, in.loc);
        return;
      }
      if (auto* br = std::get_if<If>(&in.body)) {
        read(s, br->condition, in.loc);
        rest.push_back({&b, i + 1});
        if (++paths_ > kMaxPaths) return;
        walk(br->then_block, 0, s, rest);
        walk(br->else_block, 0, s, rest);
        return;
      }
      step(s, in);
    }
    if (!rest.empty()) {
      Cont c = rest.back();
      rest.pop_back();
      walk(*c.block, c.index, std::move(s), std::move(rest));
      return;
    }
    finish(s, proc_.loc);
  }

  void finish(const PathState& s, SourceLoc) {
    std::set<std::size_t> seen;
    for (const auto& [name, t] : s.env) {
      const Token& tok = s.tokens[t];
      if (tok.qubit && tok.live && seen.insert(t).second)
        report(Severity::Warning, "QUBIT_LEAK",
               "qubit '" + tok.name + "' is never freed on some path", tok.bound_at);
    }
  }

  std::optional<std::size_t> lookup(const PathState& s, const std::string& v, SourceLoc loc) {
    auto it = s.env.find(v);
    if (it == s.env.end()) {
      report(Severity::Error, "UNBOUND_VARIABLE", "variable '" + v + "' is used before it is bound", loc);
      return std::nullopt;
    }
    return it->second;
  }

  void read(PathState& s, const Expr& e, SourceLoc loc) {
    std::vector<std::string> vars;
    e.collect_vars(vars);
    for (const auto& v : vars) {
      auto t = lookup(s, v, loc);
      if (t && s.tokens[*t].qubit && !s.tokens[*t].live)
        report(Severity::Error, "USE_AFTER_FREE", "qubit '" + v + "' is used after it was freed", loc);
    }
  }

  // A qubit operand; consume marks it released.
  void use(PathState& s, const Expr& e, SourceLoc loc, bool consume) {
    const std::string* v = e.var_name();
    if (!v) {
      read(s, e, loc);
      return;
    }
    auto t = lookup(s, *v, loc);
    if (!t) return;
    Token& tok = s.tokens[*t];
    if (!tok.qubit) return;
    if (!tok.live) {
      if (consume)
        report(Severity::Error, "DOUBLE_FREE", "qubit '" + *v + "' is released twice", loc);
      else
        report(Severity::Error, "USE_AFTER_FREE", "qubit '" + *v + "' is used after it was freed", loc);
      return;
    }
    if (consume) tok.live = false;
  }

  void bind(PathState& s, const std::string& v, bool qubit, SourceLoc loc,
            std::optional<std::size_t> alias = std::nullopt) {
    if (auto it = s.env.find(v); it != s.env.end()) {
      const Token& old = s.tokens[it->second];
      bool still_named = false;
      for (const auto& [n, t] : s.env)
        if (n != v && t == it->second) still_named = true;
      if (old.qubit && old.live && !still_named && (!alias || *alias != it->second))
        report(Severity::Warning, "QUBIT_LEAK",
               "qubit '" + v + "' is rebound while still allocated", old.bound_at);
    }
    if (alias) {
      s.env[v] = *alias;
      return;
    }
    s.tokens.push_back({qubit, true, loc, v});
    s.env[v] = s.tokens.size() - 1;
  }

  void step(PathState& s, const Instr& in) {
    const SourceLoc loc = in.loc;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Open>) {
            bind(s, x.session, false, loc);
          } else if constexpr (std::is_same_v<T, Init>) {
            bind(s, x.var, true, loc);
          } else if constexpr (std::is_same_v<T, Free>) {
            use(s, x.target, loc, true);
          } else if constexpr (std::is_same_v<T, Assign>) {
            read(s, x.value, loc);
            std::optional<std::size_t> alias;
            if (const std::string* v = x.value.var_name())
              if (auto it = s.env.find(*v); it != s.env.end() && s.tokens[it->second].qubit)
                alias = it->second;
            bind(s, x.var, false, loc, alias);
          } else if constexpr (std::is_same_v<T, ApplyGate>) {
            if (x.condition) read(s, *x.condition, loc);
            for (const auto& o : x.operands) use(s, o, loc, false);
          } else if constexpr (std::is_same_v<T, Measure>) {
            for (const auto& o : x.operands) use(s, o, loc, false);
            bind(s, x.var, false, loc);
          } else if constexpr (std::is_same_v<T, GenEnt>) {
            bind(s, x.var, true, loc);
          } else if constexpr (std::is_same_v<T, EntSwap>) {
            use(s, x.first, loc, true);
            use(s, x.second, loc, true);
            bind(s, x.out1, false, loc);
            bind(s, x.out2, false, loc);
          } else if constexpr (std::is_same_v<T, QSend>) {
            use(s, x.data, loc, true);
            use(s, x.comm, loc, true);
          } else if constexpr (std::is_same_v<T, QRecv>) {
            use(s, x.comm, loc, true);
            bind(s, x.var, true, loc);
          } else if constexpr (std::is_same_v<T, RemoteCx>) {
            use(s, x.data, loc, false);
            use(s, x.comm, loc, true);
          } else if constexpr (std::is_same_v<T, Send>) {
            read(s, x.payload, loc);
          } else if constexpr (std::is_same_v<T, Recv>) {
            bind(s, x.var, false, loc);
          }
        },
        in.body);
  }

  const Process& proc_;
  std::size_t index_;
  std::size_t paths_ = 0;
  std::vector<Diagnostic> out_;
};

// ---- sessions and labels ----------------------------------------------------

struct Located {
  const Instr* instr;
  std::size_t process;
  ParticipantId location;
};

void collect(const Block& b, std::size_t process, ParticipantId loc, std::vector<Located>& out) {
  for (const auto& in : b) {
    out.push_back({&in, process, loc});
    if (auto* br = std::get_if<If>(&in.body)) {
      collect(br->then_block, process, loc, out);
      collect(br->else_block, process, loc, out);
    }
  }
}

// Messages an instruction puts on the wire: (session, receiver, label).
std::vector<std::tuple<std::string, ParticipantId, std::string>> sends_of(const InstrBody& b) {
  if (auto* s = std::get_if<Send>(&b)) return {{s->session, s->partner, s->label}};
  if (auto* q = std::get_if<QSend>(&b)) return {{q->session, q->partner, q->label}};
  if (auto* r = std::get_if<RemoteCx>(&b)) return {{r->session, r->partner, r->label}};
  return {};
}

// Messages an instruction consumes at its own location: (session, label).
std::vector<std::pair<std::string, std::string>> recvs_of(const InstrBody& b) {
  if (auto* r = std::get_if<Recv>(&b)) return {{r->session, r->label}};
  if (auto* q = std::get_if<QRecv>(&b)) return {{q->session, q->label}};
  if (auto* r = std::get_if<RemoteCx>(&b)) return {{r->session, r->label}};
  return {};
}

}  // namespace

std::vector<Diagnostic> lint_linear(const System& sys) {
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < sys.processes.size(); ++i) {
    auto d = LinearLint(sys.processes[i], i).run();
    out.insert(out.end(), d.begin(), d.end());
  }
  sort_unique(out);
  return out;
}

std::vector<Diagnostic> lint_sessions(const System& sys) {
  std::vector<Located> all;
  for (std::size_t i = 0; i < sys.processes.size(); ++i)
    collect(sys.processes[i].body, i, sys.processes[i].location, all);

  std::vector<Diagnostic> out;
  auto report = [&](Severity sev, std::string code, std::string msg, const Located& at) {
    out.push_back({sev, std::move(code), std::move(msg), at.instr->loc, at.process});
  };

  // genEnt pairing, ambiguity and link contention.
  std::map<std::tuple<ParticipantId, ParticipantId, std::string>, std::set<std::size_t>> gen;
  std::map<std::pair<ParticipantId, ParticipantId>, std::set<std::size_t>> toward;
  for (const auto& x : all)
    if (auto* g = std::get_if<GenEnt>(&x.instr->body)) {
      gen[{x.location, g->partner, g->label}].insert(x.process);
      toward[{x.location, g->partner}].insert(x.process);
    }
  for (const auto& x : all) {
    auto* g = std::get_if<GenEnt>(&x.instr->body);
    if (!g) continue;
    if (!gen.count({g->partner, x.location, g->label}))
      report(Severity::Error, "UNPAIRED_GENENT",
             "genEnt[" + std::to_string(g->partner) + "](" + g->label + ") at participant " +
                 std::to_string(x.location) + " has no counterpart genEnt[" +
                 std::to_string(x.location) + "](" + g->label + ") at participant " +
                 std::to_string(g->partner),
             x);
    if (gen.at({x.location, g->partner, g->label}).size() > 1)
      report(Severity::Error, "AMBIGUOUS_LABEL",
             "label '" + g->label + "' is used by several processes at participant " +
                 std::to_string(x.location) + " for entanglement with participant " +
                 std::to_string(g->partner),
             x);
    else if (toward.at({x.location, g->partner}).size() > 1)
      report(Severity::Warning, "LINK_CONTENTION",
             "several processes at participant " + std::to_string(x.location) +
                 " generate entanglement with participant " + std::to_string(g->partner) +
                 "; the link's communication qubits are shared",
             x);
  }

  // Classical messages.
  std::set<std::tuple<std::string, ParticipantId, std::string>> sent, received;
  for (const auto& x : all) {
    for (auto& s : sends_of(x.instr->body)) sent.insert(s);
    for (auto& [s, l] : recvs_of(x.instr->body)) received.insert({s, x.location, l});
  }
  for (const auto& x : all) {
    for (const auto& [s, to, l] : sends_of(x.instr->body))
      if (!received.count({s, to, l}))
        report(Severity::Warning, "UNMATCHED_SEND",
               "message " + s + "/" + l + " to participant " + std::to_string(to) +
                   " is never received",
               x);
    for (const auto& [s, l] : recvs_of(x.instr->body))
      if (!sent.count({s, x.location, l}))
        report(Severity::Warning, "UNMATCHED_RECV",
               "no process sends " + s + "/" + l + " to participant " + std::to_string(x.location), x);
  }

  // Session openings must agree across the listed participants.
  std::map<std::pair<std::string, ParticipantId>, std::vector<std::vector<ParticipantId>>> opens;
  for (const auto& x : all)
    if (auto* o = std::get_if<Open>(&x.instr->body)) opens[{o->session, x.location}].push_back(o->participants);
  for (const auto& x : all) {
    auto* o = std::get_if<Open>(&x.instr->body);
    if (!o) continue;
    if (std::find(o->participants.begin(), o->participants.end(), x.location) == o->participants.end()) {
      report(Severity::Error, "OPEN_MISMATCH",
             "open of " + o->session + " at participant " + std::to_string(x.location) +
                 " does not list its own participant",
             x);
      continue;
    }
    for (auto q : o->participants) {
      auto it = opens.find({o->session, q});
      const bool ok = it != opens.end() &&
                      std::find(it->second.begin(), it->second.end(), o->participants) != it->second.end();
      if (!ok)
        report(Severity::Error, "OPEN_MISMATCH",
               "participant " + std::to_string(q) + " never opens " + o->session +
                   " with the same participant list",
               x);
    }
  }
  sort_unique(out);
  return out;
}

std::vector<Diagnostic> lint(const System& sys) {
  auto a = lint_linear(sys);
  auto b = lint_sessions(sys);
  a.insert(a.end(), b.begin(), b.end());
  sort_unique(a);
  return a;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const auto& d) { return d.severity == Severity::Error; });
}

std::string_view severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

nlohmann::json diagnostics_json(const std::vector<Diagnostic>& diags) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : diags)
    out.push_back({{"severity", severity_name(d.severity)},
                   {"code", d.code},
                   {"message", d.message},
                   {"line", d.loc.line},
                   {"column", d.loc.column},
                   {"process", d.process}});
  return out;
}

std::string diagnostics_text(const std::vector<Diagnostic>& diags, bool color) {
  std::ostringstream os;
  for (const auto& d : diags) {
    const char* on = !color ? "" : d.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m";
    const char* off = color ? "\x1b[0m" : "";
    // Generated programs carry no source positions; name the process instead.
    if (d.loc.line == 0) os << "process #" << d.process;
    else os << loc_string(d.loc);
    os << ": " << on << severity_name(d.severity) << off << " [" << d.code
       << "] " << d.message << "\n";
  }
  return os.str();
}

}  // namespace inquir
