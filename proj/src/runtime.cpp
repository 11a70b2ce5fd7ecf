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

#include "inquir/runtime.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "inquir/errors.hpp"
#include "inquir/syntax.hpp"

namespace inquir {

std::string to_string(const Datum& d) {
  if (auto* b = std::get_if<Bit>(&d)) return b->value ? "1" : "0";
  return to_string(std::get<QubitRef>(d));
}

std::size_t DataStore::size(ParticipantId p) const {
  auto it = free.find(p);
  return it == free.end() ? 0 : it->second.size();
}

std::size_t EprStore::size(ParticipantId owner, ParticipantId peer) const {
  auto it = free.find({owner, peer});
  return it == free.end() ? 0 : it->second.size();
}

void Heap::open(const Key& k) { buffers_.emplace(k, std::vector<HeapEntry>{}); }
void Heap::close(const Key& k) { buffers_.erase(k); }
void Heap::push(const Key& k, HeapEntry e) { buffers_.at(k).push_back(std::move(e)); }

std::size_t Heap::count(const Key& k, const std::string& label) const {
  auto it = buffers_.find(k);
  if (it == buffers_.end()) return 0;
  return static_cast<std::size_t>(std::count_if(
      it->second.begin(), it->second.end(), [&](const auto& e) { return e.label == label; }));
}

std::optional<HeapEntry> Heap::pop(const Key& k, const std::string& label) {
  auto it = buffers_.find(k);
  if (it == buffers_.end()) return std::nullopt;
  auto& buf = it->second;
  auto e = std::find_if(buf.begin(), buf.end(), [&](const auto& x) { return x.label == label; });
  if (e == buf.end()) return std::nullopt;
  HeapEntry out = std::move(*e);
  buf.erase(e);
  return out;
}

const Instr* ProcessState::head() const {
  if (frames.empty()) return nullptr;
  const Frame& f = frames.back();
  return &(*f.block)[f.index];
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Open: return "open";
    case Rule::Close: return "close";
    case Rule::Init: return "init";
    case Rule::Free: return "free";
    case Rule::Assign: return "assign";
    case Rule::Gate: return "gate";
    case Rule::Measure: return "measure";
    case Rule::Branch: return "if";
    case Rule::GenEnt: return "genEnt";
    case Rule::EntSwap: return "entSwap";
    case Rule::QSend: return "qsend";
    case Rule::QRecv: return "qrecv";
    case Rule::RemoteCx: return "rcx";
    case Rule::Send: return "send";
    case Rule::Recv: return "recv";
  }
  return "?";
}

nlohmann::json TraceEvent::to_json() const {
  nlohmann::json j = {{"step", step},
                      {"participant", participants},
                      {"process", processes},
                      {"op", std::string(rule_name(rule))},
                      {"operands", operands},
                      {"deps", deps}};
  if (!outcome.empty()) j["outcome"] = outcome;
  return j;
}

bool RuntimeState::terminated() const {
  return std::all_of(processes.begin(), processes.end(), [](const auto& p) { return p.finished(); });
}

bool RuntimeState::in_use(QubitRef q) const { return rho.contains(q); }

std::size_t RuntimeState::in_use_data(ParticipantId p) const {
  std::size_t n = 0;
  for (const auto& [q, h] : homes)
    if (q.kind == QubitKind::Data && h.owner == p && rho.contains(q)) ++n;
  return n;
}

std::size_t RuntimeState::total_free_comm() const {
  std::size_t n = 0;
  for (const auto& [k, v] : epr.free) n += v.size();
  return n;
}

namespace {

// Normalises a process: leaves finished blocks and treats stop as 0.
void settle(ProcessState& p) {
  while (!p.frames.empty()) {
    Frame& f = p.frames.back();
    if (f.index >= f.block->size()) {
      p.frames.pop_back();
      continue;
    }
    if (std::holds_alternative<Stop>((*f.block)[f.index].body)) {
      p.frames.clear();
      break;
    }
    break;
  }
}

void advance(ProcessState& p) {
  ++p.frames.back().index;
  settle(p);
}

std::optional<Datum> eval(const Expr& e, const std::map<std::string, Datum>& env) {
  switch (e.kind()) {
    case Expr::Kind::Value: {
      const Value& v = e.value();
      if (auto* b = std::get_if<Bit>(&v)) return Datum{*b};
      if (auto* q = std::get_if<QubitRef>(&v)) return Datum{*q};
      auto it = env.find(std::get<Var>(v).name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::Not: {
      auto a = eval(e.lhs(), env);
      if (!a || !std::holds_alternative<Bit>(*a)) return std::nullopt;
      return Datum{Bit{!std::get<Bit>(*a).value}};
    }
    case Expr::Kind::And:
    case Expr::Kind::Xor: {
      auto a = eval(e.lhs(), env), b = eval(e.rhs(), env);
      if (!a || !b || !std::holds_alternative<Bit>(*a) || !std::holds_alternative<Bit>(*b))
        return std::nullopt;
      const bool x = std::get<Bit>(*a).value, y = std::get<Bit>(*b).value;
      return Datum{Bit{e.kind() == Expr::Kind::And ? (x && y) : (x != y)}};
    }
  }
  return std::nullopt;
}

std::optional<bool> eval_bit(const Expr& e, const std::map<std::string, Datum>& env) {
  auto d = eval(e, env);
  if (!d || !std::holds_alternative<Bit>(*d)) return std::nullopt;
  return std::get<Bit>(*d).value;
}

std::optional<QubitRef> eval_live_qubit(const RuntimeState& s, const Expr& e,
                                        const std::map<std::string, Datum>& env) {
  auto d = eval(e, env);
  if (!d || !std::holds_alternative<QubitRef>(*d)) return std::nullopt;
  QubitRef q = std::get<QubitRef>(*d);
  if (!s.rho.contains(q)) return std::nullopt;
  return q;
}

// Evaluates every operand to a live qubit, all distinct.
std::optional<std::vector<QubitRef>> eval_qubits(const RuntimeState& s,
                                                 const std::vector<Expr>& es,
                                                 const std::map<std::string, Datum>& env) {
  std::vector<QubitRef> out;
  for (const auto& e : es) {
    auto q = eval_live_qubit(s, e, env);
    if (!q || std::find(out.begin(), out.end(), *q) != out.end()) return std::nullopt;
    out.push_back(*q);
  }
  return out;
}

bool local_enabled(const RuntimeState& s, std::size_t i, Rule& rule) {
  const ProcessState& p = s.processes[i];
  const Instr* h = p.head();
  if (!h) return false;
  const auto& env = p.env;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Close>) {
          rule = Rule::Close;
          return s.heap.has({x.session, p.location});
        } else if constexpr (std::is_same_v<T, Init>) {
          rule = Rule::Init;
          return s.data.size(p.location) > 0;
        } else if constexpr (std::is_same_v<T, Free>) {
          rule = Rule::Free;
          return eval_live_qubit(s, x.target, env).has_value();
        } else if constexpr (std::is_same_v<T, Assign>) {
          rule = Rule::Assign;
          return eval(x.value, env).has_value();
        } else if constexpr (std::is_same_v<T, ApplyGate>) {
          rule = Rule::Gate;
          if (x.condition && !eval_bit(*x.condition, env)) return false;
          return eval_qubits(s, x.operands, env).has_value();
        } else if constexpr (std::is_same_v<T, Measure>) {
          rule = Rule::Measure;
          return eval_qubits(s, x.operands, env).has_value();
        } else if constexpr (std::is_same_v<T, If>) {
          rule = Rule::Branch;
          return eval_bit(x.condition, env).has_value();
        } else if constexpr (std::is_same_v<T, EntSwap>) {
          rule = Rule::EntSwap;
          return eval_qubits(s, {x.first, x.second}, env).has_value();
        } else if constexpr (std::is_same_v<T, QSend>) {
          rule = Rule::QSend;
          return s.heap.has({x.session, x.partner}) &&
                 eval_qubits(s, {x.data, x.comm}, env).has_value();
        } else if constexpr (std::is_same_v<T, QRecv>) {
          rule = Rule::QRecv;
          return s.data.size(p.location) > 0 &&
                 s.heap.count({x.session, p.location}, x.label) >= 2 &&
                 eval_live_qubit(s, x.comm, env).has_value();
        } else if constexpr (std::is_same_v<T, Send>) {
          rule = Rule::Send;
          return s.heap.has({x.session, x.partner}) && eval(x.payload, env).has_value();
        } else if constexpr (std::is_same_v<T, Recv>) {
          rule = Rule::Recv;
          return s.heap.count({x.session, p.location}, x.label) >= 1;
        } else {
          return false;  // joint rules and stop
        }
      },
      h->body);
}

template <typename T>
const T* head_as(const RuntimeState& s, std::size_t i) {
  const Instr* h = s.processes[i].head();
  return h ? std::get_if<T>(&h->body) : nullptr;
}

void joint_open(const RuntimeState& s, std::size_t i, std::set<std::vector<std::size_t>>& out) {
  const Open* o = head_as<Open>(s, i);
  if (!o) return;
  std::set<ParticipantId> distinct(o->participants.begin(), o->participants.end());
  if (distinct.size() != o->participants.size()) return;
  if (!distinct.count(s.processes[i].location)) return;
  for (auto p : o->participants)
    if (s.heap.has({o->session, p})) return;
  std::vector<std::vector<std::size_t>> candidates;
  for (auto p : o->participants) {
    std::vector<std::size_t> c;
    for (std::size_t j = 0; j < s.processes.size(); ++j) {
      if (s.processes[j].location != p) continue;
      const Open* oj = head_as<Open>(s, j);
      if (oj && oj->session == o->session && oj->participants == o->participants) c.push_back(j);
    }
    if (c.empty()) return;
    candidates.push_back(std::move(c));
  }
  std::vector<std::size_t> pick(candidates.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == candidates.size()) {
      out.insert(pick);
      return;
    }
    for (auto j : candidates[k]) {
      pick[k] = j;
      rec(k + 1);
    }
  };
  rec(0);
}

bool genent_match(const RuntimeState& s, std::size_t i, std::size_t j) {
  const GenEnt* a = head_as<GenEnt>(s, i);
  const GenEnt* b = head_as<GenEnt>(s, j);
  if (!a || !b || i == j) return false;
  const ParticipantId pa = s.processes[i].location, pb = s.processes[j].location;
  return a->partner == pb && b->partner == pa && a->label == b->label && pa != pb;
}

bool rcx_match(const RuntimeState& s, std::size_t c, std::size_t t) {
  const RemoteCx* a = head_as<RemoteCx>(s, c);
  const RemoteCx* b = head_as<RemoteCx>(s, t);
  if (!a || !b || a->role != CxRole::Control || b->role != CxRole::Target) return false;
  const ParticipantId pa = s.processes[c].location, pb = s.processes[t].location;
  return a->partner == pb && b->partner == pa && pa != pb && a->session == b->session &&
         a->label == b->label;
}

bool rcx_ready(const RuntimeState& s, std::size_t c, std::size_t t) {
  const RemoteCx* a = head_as<RemoteCx>(s, c);
  const RemoteCx* b = head_as<RemoteCx>(s, t);
  if (!s.heap.has({a->session, s.processes[c].location}) ||
      !s.heap.has({b->session, s.processes[t].location}))
    return false;
  auto qa = eval_qubits(s, {a->data, a->comm}, s.processes[c].env);
  auto qb = eval_qubits(s, {b->data, b->comm}, s.processes[t].env);
  if (!qa || !qb) return false;
  std::set<QubitRef> all{(*qa)[0], (*qa)[1], (*qb)[0], (*qb)[1]};
  return all.size() == 4;
}

bool transition_less(const Transition& a, const Transition& b) {
  if (a.processes != b.processes) return a.processes < b.processes;
  return a.rule < b.rule;
}

}  // namespace

std::vector<Transition> enabled_transitions(const RuntimeState& s) {
  std::vector<Transition> out;
  std::set<std::vector<std::size_t>> opens;
  for (std::size_t i = 0; i < s.processes.size(); ++i) {
    Rule r;
    if (local_enabled(s, i, r)) {
      out.push_back({r, {i}});
      continue;
    }
    joint_open(s, i, opens);
    if (const GenEnt* g = head_as<GenEnt>(s, i)) {
      const ParticipantId p = s.processes[i].location;
      if (s.epr.size(p, g->partner) == 0 || s.epr.size(g->partner, p) == 0) continue;
      for (std::size_t j = i + 1; j < s.processes.size(); ++j)
        if (genent_match(s, i, j)) out.push_back({Rule::GenEnt, {i, j}});
    }
    if (const RemoteCx* rc = head_as<RemoteCx>(s, i); rc && rc->role == CxRole::Control) {
      for (std::size_t j = 0; j < s.processes.size(); ++j)
        if (rcx_match(s, i, j) && rcx_ready(s, i, j)) out.push_back({Rule::RemoteCx, {i, j}});
    }
  }
  for (const auto& ps : opens) out.push_back({Rule::Open, ps});
  std::sort(out.begin(), out.end(), transition_less);
  return out;
}

namespace {

bool is_enabled(const RuntimeState& s, const Transition& t) {
  for (const auto& e : enabled_transitions(s))
    if (e == t) return true;
  return false;
}

void release(RuntimeState& s, QubitRef q, std::size_t step) {
  const QubitHome& h = s.homes.at(q);
  if (q.kind == QubitKind::Comm)
    s.epr.free[{h.owner, *h.peer}].push_back(q);
  else
    s.data.free[h.owner].push_back(q);
  s.freed_at[q] = step;
}

void discard(RuntimeState& s, QubitRef q, std::size_t step) {
  if (s.rho.trace_out(q))
    s.warnings.push_back("step " + std::to_string(step) + ": free of entangled qubit " +
                         to_string(q) + " collapsed it");
  release(s, q, step);
}

QubitRef take(std::deque<QubitRef>& pool) {
  QubitRef q = pool.front();
  pool.pop_front();
  return q;
}

}  // namespace

TraceEvent apply_transition(RuntimeState& s, const Transition& t) {
  if (!is_enabled(s, t))
    throw IllegalChoice("transition " + std::string(rule_name(t.rule)) + " is not enabled");
  const std::size_t step = ++s.steps;
  TraceEvent ev;
  ev.step = step;
  ev.rule = t.rule;
  ev.processes = t.processes;
  for (auto i : t.processes) {
    const ProcessState& p = s.processes[i];
    ev.participants.push_back(p.location);
    ev.operands.push_back(print_instr(*p.head()));
    if (p.last_step) ev.deps.push_back(*p.last_step);
  }
  auto dep = [&](std::size_t d) { ev.deps.push_back(d); };
  auto reuse_dep = [&](QubitRef q) {
    if (auto it = s.freed_at.find(q); it != s.freed_at.end()) dep(it->second);
  };

  std::vector<Frame> pushed;  // branch frame to push after advancing
  ProcessState& p0 = s.processes[t.processes[0]];
  auto& env = p0.env;
  const Instr& h = *p0.head();

  switch (t.rule) {
    case Rule::Open: {
      const Open& o = std::get<Open>(h.body);
      for (auto p : o.participants) s.heap.open({o.session, p});
      break;
    }
    case Rule::Close:
      s.heap.close({std::get<Close>(h.body).session, p0.location});
      break;
    case Rule::Init: {
      QubitRef q = take(s.data.free[p0.location]);
      reuse_dep(q);
      s.rho.alloc(q);
      env[std::get<Init>(h.body).var] = q;
      break;
    }
    case Rule::Free:
      discard(s, *eval_live_qubit(s, std::get<Free>(h.body).target, env), step);
      break;
    case Rule::Assign: {
      const Assign& a = std::get<Assign>(h.body);
      env[a.var] = *eval(a.value, env);
      break;
    }
    case Rule::Gate: {
      const ApplyGate& g = std::get<ApplyGate>(h.body);
      const bool on = !g.condition || *eval_bit(*g.condition, env);
      if (on) s.rho.apply_gate(g.gate, *eval_qubits(s, g.operands, env));
      break;
    }
    case Rule::Measure: {
      const Measure& m = std::get<Measure>(h.body);
      const int v = s.rho.measure_parity(*eval_qubits(s, m.operands, env), s.oracle);
      ev.outcome.push_back(v);
      env[m.var] = Bit{v != 0};
      break;
    }
    case Rule::Branch: {
      const If& br = std::get<If>(h.body);
      const Block& b = *eval_bit(br.condition, env) ? br.then_block : br.else_block;
      pushed.push_back({&b, 0});
      break;
    }
    case Rule::GenEnt: {
      ProcessState& p1 = s.processes[t.processes[1]];
      const GenEnt& a = std::get<GenEnt>(h.body);
      const GenEnt& b = std::get<GenEnt>(p1.head()->body);
      QubitRef qa = take(s.epr.free[{p0.location, p1.location}]);
      QubitRef qb = take(s.epr.free[{p1.location, p0.location}]);
      reuse_dep(qa);
      reuse_dep(qb);
      s.rho.make_epr(qa, qb);
      env[a.var] = qa;
      p1.env[b.var] = qb;
      break;
    }
    case Rule::EntSwap: {
      const EntSwap& e = std::get<EntSwap>(h.body);
      auto qs = *eval_qubits(s, {e.first, e.second}, env);
      s.rho.apply_gate({GateKind::CX, {}}, qs);
      s.rho.apply_gate({GateKind::H, {}}, {qs[0]});
      const int v1 = s.rho.measure_parity({qs[0]}, s.oracle);
      const int v2 = s.rho.measure_parity({qs[1]}, s.oracle);
      discard(s, qs[0], step);
      discard(s, qs[1], step);
      env[e.out1] = Bit{v1 != 0};
      env[e.out2] = Bit{v2 != 0};
      ev.outcome = {v1, v2};
      break;
    }
    case Rule::QSend: {
      const QSend& q = std::get<QSend>(h.body);
      auto qs = *eval_qubits(s, {q.data, q.comm}, env);
      s.rho.apply_gate({GateKind::CX, {}}, qs);
      s.rho.apply_gate({GateKind::H, {}}, {qs[0]});
      const int v1 = s.rho.measure_parity({qs[0]}, s.oracle);
      const int v2 = s.rho.measure_parity({qs[1]}, s.oracle);
      s.heap.push({q.session, q.partner}, {q.label, Bit{v1 != 0}, step});
      s.heap.push({q.session, q.partner}, {q.label, Bit{v2 != 0}, step});
      discard(s, qs[0], step);
      discard(s, qs[1], step);
      ev.outcome = {v1, v2};
      break;
    }
    case Rule::QRecv: {
      const QRecv& q = std::get<QRecv>(h.body);
      QubitRef c = *eval_live_qubit(s, q.comm, env);
      QubitRef x = take(s.data.free[p0.location]);
      reuse_dep(x);
      auto m1 = *s.heap.pop({q.session, p0.location}, q.label);
      auto m2 = *s.heap.pop({q.session, p0.location}, q.label);
      dep(m1.pushed_at);
      dep(m2.pushed_at);
      s.rho.alloc(x);
      if (std::get<Bit>(m1.value).value) s.rho.apply_gate({GateKind::Z, {}}, {c});
      if (std::get<Bit>(m2.value).value) s.rho.apply_gate({GateKind::X, {}}, {c});
      s.rho.apply_gate({GateKind::CX, {}}, {x, c});
      s.rho.apply_gate({GateKind::CX, {}}, {c, x});
      s.rho.apply_gate({GateKind::CX, {}}, {x, c});
      discard(s, c, step);
      env[q.var] = x;
      break;
    }
    case Rule::RemoteCx: {
      ProcessState& p1 = s.processes[t.processes[1]];
      const RemoteCx& a = std::get<RemoteCx>(h.body);
      const RemoteCx& b = std::get<RemoteCx>(p1.head()->body);
      auto qa = *eval_qubits(s, {a.data, a.comm}, env);
      auto qb = *eval_qubits(s, {b.data, b.comm}, p1.env);
      s.rho.apply_gate({GateKind::CX, {}}, {qa[0], qb[0]});
      if (s.rho.trace_out_group({qa[1], qb[1]}))
        s.warnings.push_back("step " + std::to_string(step) +
                             ": rcx communication qubits were entangled with other qubits");
      release(s, qa[1], step);
      release(s, qb[1], step);
      break;
    }
    case Rule::Send: {
      const Send& m = std::get<Send>(h.body);
      s.heap.push({m.session, m.partner}, {m.label, *eval(m.payload, env), step});
      break;
    }
    case Rule::Recv: {
      const Recv& m = std::get<Recv>(h.body);
      auto e = *s.heap.pop({m.session, p0.location}, m.label);
      dep(e.pushed_at);
      env[m.var] = e.value;
      break;
    }
  }

  for (auto i : t.processes) {
    ProcessState& p = s.processes[i];
    p.last_step = step;
    p.ready_since = step;
    advance(p);
  }
  if (!pushed.empty() && !pushed.front().block->empty()) {
    p0.frames.push_back(pushed.front());
    settle(p0);
  }
  std::sort(ev.deps.begin(), ev.deps.end());
  ev.deps.erase(std::unique(ev.deps.begin(), ev.deps.end()), ev.deps.end());
  return ev;
}

RuntimeState step(const RuntimeState& state, const Transition& t) {
  RuntimeState next = state;
  apply_transition(next, t);
  return next;
}

RuntimeState initial_state(std::shared_ptr<const System> program, const ArchConfig& arch,
                           BackendKind backend, OutcomeOracle oracle) {
  RuntimeState s;
  s.rho = QuantumState(backend);
  s.oracle = std::move(oracle);
  std::uint32_t uid = 0;
  for (const auto& p : arch.processors) {
    auto& pool = s.data.free[p.id];
    for (std::uint32_t k = 0; k < p.data_qubits; ++k) {
      QubitRef q{QubitKind::Data, uid++};
      pool.push_back(q);
      s.homes[q] = {p.id, std::nullopt};
    }
  }
  for (const auto& l : arch.links) {
    for (auto [owner, peer, n] : {std::tuple{l.a, l.b, l.comm_a}, std::tuple{l.b, l.a, l.comm_b}}) {
      auto& pool = s.epr.free[{owner, peer}];
      for (std::uint32_t k = 0; k < n; ++k) {
        QubitRef q{QubitKind::Comm, uid++};
        pool.push_back(q);
        s.homes[q] = {owner, peer};
      }
    }
  }
  s.program = std::move(program);
  for (const auto& proc : s.program->processes) {
    ProcessState ps;
    ps.location = proc.location;
    ps.name = proc.name;
    if (!proc.body.empty()) ps.frames.push_back({&proc.body, 0});
    settle(ps);
    s.processes.push_back(std::move(ps));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Scheduling

std::optional<SchedulerPolicy> parse_policy(std::string_view name, std::uint64_t seed) {
  if (name == "roundrobin") return SchedulerPolicy::round_robin();
  if (name == "random") return SchedulerPolicy::random(seed);
  if (name == "inorder") return SchedulerPolicy::in_order();
  if (name == "depresolved") return SchedulerPolicy::dependency_resolved();
  return std::nullopt;
}

std::size_t Scheduler::choose(const RuntimeState& state, const std::vector<Transition>& enabled) {
  switch (policy_.kind) {
    case SchedulerPolicy::Kind::RoundRobin: {
      const std::size_t n = state.processes.size();
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = (cursor_ + k) % n;
        for (std::size_t t = 0; t < enabled.size(); ++t) {
          const auto& ps = enabled[t].processes;
          if (std::find(ps.begin(), ps.end(), i) != ps.end()) {
            cursor_ = (i + 1) % n;
            return t;
          }
        }
      }
      return 0;
    }
    case SchedulerPolicy::Kind::SeededRandom:
      return static_cast<std::size_t>(rng_() % enabled.size());
    case SchedulerPolicy::Kind::InOrderPerProcess:
      return 0;  // enabled is sorted by participating process indices
    case SchedulerPolicy::Kind::DependencyResolved: {
      std::size_t best = 0, best_key = SIZE_MAX;
      for (std::size_t t = 0; t < enabled.size(); ++t) {
        std::size_t key = 0;
        for (auto i : enabled[t].processes) key = std::max(key, state.processes[i].ready_since);
        if (key < best_key) {
          best_key = key;
          best = t;
        }
      }
      return best;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Stuck classification

namespace {

void collect_remaining(const ProcessState& p, std::vector<const Instr*>& out) {
  std::function<void(const Block&, std::size_t)> walk = [&](const Block& b, std::size_t from) {
    for (std::size_t k = from; k < b.size(); ++k) {
      out.push_back(&b[k]);
      if (auto* br = std::get_if<If>(&b[k].body)) {
        walk(br->then_block, 0);
        walk(br->else_block, 0);
      }
    }
  };
  for (const auto& f : p.frames) walk(*f.block, f.index);
}

bool sends_to(const Instr& i, const std::string& session, ParticipantId to, const std::string& label) {
  if (auto* s = std::get_if<Send>(&i.body))
    return s->session == session && s->partner == to && s->label == label;
  if (auto* q = std::get_if<QSend>(&i.body))
    return q->session == session && q->partner == to && q->label == label;
  if (auto* r = std::get_if<RemoteCx>(&i.body))
    return r->session == session && r->partner == to && r->label == label;
  return false;
}

struct Wait {
  enum class Kind { Pool, Message, Partner, Session, Other } kind = Kind::Other;
  std::string resource;
  std::vector<std::size_t> on;  // processes that could unblock it
  std::optional<ParticipantId> pool_owner;
  std::optional<std::string> session, label;
};

std::vector<std::size_t> holders_of(const RuntimeState& s, ParticipantId owner,
                                    std::optional<ParticipantId> peer, std::size_t self) {
  std::set<std::size_t> out;
  for (std::size_t j = 0; j < s.processes.size(); ++j) {
    if (j == self || s.processes[j].finished()) continue;
    for (const auto& [name, d] : s.processes[j].env) {
      auto* q = std::get_if<QubitRef>(&d);
      if (!q || !s.rho.contains(*q)) continue;
      const QubitHome& h = s.homes.at(*q);
      if (h.owner == owner && h.peer == peer) out.insert(j);
    }
  }
  return {out.begin(), out.end()};
}

template <typename Pred>
std::vector<std::size_t> future_ops(const RuntimeState& s, std::size_t self, Pred pred) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s.processes.size(); ++j) {
    if (j == self || s.processes[j].finished()) continue;
    std::vector<const Instr*> rem;
    collect_remaining(s.processes[j], rem);
    if (std::any_of(rem.begin(), rem.end(), [&](const Instr* i) { return pred(j, *i); }))
      out.push_back(j);
  }
  return out;
}

Wait pool_wait(const RuntimeState& s, std::size_t i, ParticipantId owner,
               std::optional<ParticipantId> peer) {
  Wait w;
  w.kind = Wait::Kind::Pool;
  w.pool_owner = owner;
  w.resource = peer ? "comm pool " + std::to_string(owner) + "->" + std::to_string(*peer)
                    : "data pool " + std::to_string(owner);
  w.on = holders_of(s, owner, peer, i);
  return w;
}

Wait message_wait(const RuntimeState& s, std::size_t i, const std::string& session,
                  const std::string& label) {
  Wait w;
  const ParticipantId loc = s.processes[i].location;
  if (!s.heap.has({session, loc})) {
    w.kind = Wait::Kind::Session;
    w.resource = "session " + session + " at " + std::to_string(loc);
    w.session = session;
    w.on = future_ops(s, i, [&](std::size_t, const Instr& x) {
      auto* o = std::get_if<Open>(&x.body);
      return o && o->session == session;
    });
    return w;
  }
  w.kind = Wait::Kind::Message;
  w.session = session;
  w.label = label;
  w.resource = "message " + session + "/" + label + " at " + std::to_string(loc);
  w.on = future_ops(s, i, [&](std::size_t, const Instr& x) { return sends_to(x, session, loc, label); });
  return w;
}

Wait classify_wait(const RuntimeState& s, std::size_t i) {
  const ProcessState& p = s.processes[i];
  const Instr& h = *p.head();
  const ParticipantId loc = p.location;
  return std::visit(
      [&](const auto& x) -> Wait {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Init>) {
          return pool_wait(s, i, loc, std::nullopt);
        } else if constexpr (std::is_same_v<T, GenEnt>) {
          bool matched = false;
          for (std::size_t j = 0; j < s.processes.size(); ++j)
            if (genent_match(s, i, j)) matched = true;
          if (matched) {
            if (s.epr.size(loc, x.partner) == 0) return pool_wait(s, i, loc, x.partner);
            return pool_wait(s, i, x.partner, loc);
          }
          Wait w;
          w.kind = Wait::Kind::Partner;
          w.resource = "genEnt partner " + std::to_string(x.partner) + "/" + x.label;
          w.on = future_ops(s, i, [&](std::size_t j, const Instr& y) {
            auto* g = std::get_if<GenEnt>(&y.body);
            return g && s.processes[j].location == x.partner && g->partner == loc &&
                   g->label == x.label;
          });
          return w;
        } else if constexpr (std::is_same_v<T, Open>) {
          Wait w;
          w.kind = Wait::Kind::Partner;
          w.resource = "open " + x.session;
          w.on = future_ops(s, i, [&](std::size_t j, const Instr& y) {
            auto* o = std::get_if<Open>(&y.body);
            return o && o->session == x.session &&
                   std::find(x.participants.begin(), x.participants.end(),
                             s.processes[j].location) != x.participants.end();
          });
          return w;
        } else if constexpr (std::is_same_v<T, Recv>) {
          return message_wait(s, i, x.session, x.label);
        } else if constexpr (std::is_same_v<T, QRecv>) {
          if (s.data.size(loc) == 0) return pool_wait(s, i, loc, std::nullopt);
          return message_wait(s, i, x.session, x.label);
        } else if constexpr (std::is_same_v<T, Send> || std::is_same_v<T, QSend>) {
          Wait w;
          if (!s.heap.has({x.session, x.partner})) {
            w.kind = Wait::Kind::Session;
            w.session = x.session;
            w.resource = "session " + x.session + " at " + std::to_string(x.partner);
            w.on = future_ops(s, i, [&](std::size_t, const Instr& y) {
              auto* o = std::get_if<Open>(&y.body);
              return o && o->session == x.session;
            });
          } else {
            w.resource = "unusable operands";
          }
          return w;
        } else if constexpr (std::is_same_v<T, RemoteCx>) {
          Wait w;
          w.kind = Wait::Kind::Partner;
          w.resource = std::string(x.role == CxRole::Control ? "rcxt" : "rcxc") + " partner " +
                       std::to_string(x.partner) + "/" + x.label;
          w.on = future_ops(s, i, [&](std::size_t j, const Instr& y) {
            auto* r = std::get_if<RemoteCx>(&y.body);
            return r && r->role != x.role && s.processes[j].location == x.partner &&
                   r->partner == loc && r->label == x.label;
          });
          return w;
        } else {
          Wait w;
          w.resource = "operands cannot be evaluated to live values";
          return w;
        }
      },
      h.body);
}

// Shortest cycle in the wait-for graph (BFS from every node).
std::vector<std::size_t> shortest_cycle(const std::map<std::size_t, std::vector<std::size_t>>& g) {
  std::vector<std::size_t> best;
  for (const auto& [start, _] : g) {
    std::map<std::size_t, std::size_t> parent;
    std::deque<std::size_t> q{start};
    parent[start] = start;
    bool found = false;
    std::size_t last = 0;
    while (!q.empty() && !found) {
      std::size_t u = q.front();
      q.pop_front();
      auto it = g.find(u);
      if (it == g.end()) continue;
      for (auto v : it->second) {
        if (v == start) {
          found = true;
          last = u;
          break;
        }
        if (!parent.count(v)) {
          parent[v] = u;
          q.push_back(v);
        }
      }
    }
    if (!found) continue;
    std::vector<std::size_t> cyc{last};
    while (cyc.back() != start) cyc.push_back(parent[cyc.back()]);
    std::reverse(cyc.begin(), cyc.end());
    if (best.empty() || cyc.size() < best.size()) best = cyc;
  }
  return best;
}

}  // namespace

std::string_view stuck_kind_name(StuckReport::Kind k) {
  switch (k) {
    case StuckReport::Kind::Deadlock: return "Deadlock";
    case StuckReport::Kind::QubitExhaustion: return "QubitExhaustion";
    case StuckReport::Kind::MessageStarvation: return "MessageStarvation";
    case StuckReport::Kind::MixedOrUnknown: return "MixedOrUnknown";
  }
  return "?";
}

StuckReport classify_stuck(const RuntimeState& s) {
  if (s.terminated()) throw NotStuck("all processes have terminated");
  if (!enabled_transitions(s).empty()) throw NotStuck("a transition is still enabled");

  StuckReport r;
  std::map<std::size_t, Wait> waits;
  std::map<std::size_t, std::vector<std::size_t>> graph;
  for (std::size_t i = 0; i < s.processes.size(); ++i) {
    const ProcessState& p = s.processes[i];
    if (p.finished()) continue;
    Wait w = classify_wait(s, i);
    graph[i] = w.on;
    r.blocked.push_back({i, p.location, p.name, print_instr(*p.head()), w.resource});
    waits.emplace(i, std::move(w));
  }

  const auto cyc = shortest_cycle(graph);
  if (cyc.size() >= 2) {
    r.kind = StuckReport::Kind::Deadlock;
    for (std::size_t k = 0; k < cyc.size(); ++k)
      r.cycle.push_back({cyc[k], cyc[(k + 1) % cyc.size()], waits.at(cyc[k]).resource});
    return r;
  }
  for (const auto& [i, w] : waits) {
    if (w.kind == Wait::Kind::Pool && w.on.empty()) {
      r.kind = StuckReport::Kind::QubitExhaustion;
      r.participant = w.pool_owner;
      return r;
    }
  }
  for (const auto& [i, w] : waits) {
    if (w.kind == Wait::Kind::Message && w.on.empty()) {
      r.kind = StuckReport::Kind::MessageStarvation;
      r.session = w.session;
      r.label = w.label;
      r.participant = s.processes[i].location;
      return r;
    }
  }
  r.kind = StuckReport::Kind::MixedOrUnknown;
  return r;
}

nlohmann::json StuckReport::to_json() const {
  nlohmann::json j = {{"classification", std::string(stuck_kind_name(kind))}};
  if (participant) j["participant"] = *participant;
  if (session) j["session"] = *session;
  if (label) j["label"] = *label;
  nlohmann::json c = nlohmann::json::array();
  for (const auto& e : cycle) c.push_back({{"process", e.from}, {"waits_for", e.to}, {"resource", e.resource}});
  j["cycle"] = c;
  nlohmann::json b = nlohmann::json::array();
  for (const auto& x : blocked)
    b.push_back({{"process", x.process},
                 {"location", x.location},
                 {"name", x.name},
                 {"instruction", x.instruction},
                 {"reason", x.reason}});
  j["blocked"] = b;
  return j;
}

std::string StuckReport::summary() const {
  std::ostringstream os;
  os << stuck_kind_name(kind);
  if (kind == Kind::Deadlock) {
    auto who = [&](std::size_t i) {
      for (const auto& b : blocked)
        if (b.process == i && !b.name.empty()) return b.name + "@" + std::to_string(b.location);
      return "#" + std::to_string(i);
    };
    os << " (cycle:";
    for (const auto& e : cycle) os << " " << who(e.from) << " -[" << e.resource << "]->";
    if (!cycle.empty()) os << " " << who(cycle.front().from);
    os << ")";
  } else if (participant) {
    os << "(participant " << *participant;
    if (session) os << ", " << *session << "/" << label.value_or("");
    os << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Driver

void validate_against(const System& sys, const ArchConfig& arch) {
  for (const auto& p : sys.processes)
    if (!arch.has_processor(p.location))
      throw ConfigMismatch("process located at unknown participant " + std::to_string(p.location));
  if (!sys.processes.empty() && !arch.has_processor(sys.max_participant()))
    throw ConfigMismatch("program references unknown participant " +
                         std::to_string(sys.max_participant()));
}

std::string_view outcome_name(RunResult::Outcome o) {
  switch (o) {
    case RunResult::Outcome::Completed: return "Completed";
    case RunResult::Outcome::Stuck: return "Stuck";
    case RunResult::Outcome::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

int RunResult::exit_code() const {
  switch (outcome) {
    case Outcome::Completed: return 0;
    case Outcome::Stuck: return 3;
    case Outcome::FuelExhausted: return 4;
  }
  return 1;
}

RunResult run_state(RuntimeState state, const RunOptions& options) {
  RunResult r;
  const std::size_t fuel =
      options.fuel.value_or(10 * std::max<std::size_t>(1, state.program->instruction_count()));
  Scheduler sched(options.policy);
  while (true) {
    if (state.terminated()) {
      r.outcome = RunResult::Outcome::Completed;
      break;
    }
    auto enabled = enabled_transitions(state);
    if (enabled.empty()) {
      r.outcome = RunResult::Outcome::Stuck;
      r.stuck = classify_stuck(state);
      break;
    }
    if (state.steps >= fuel) {
      r.outcome = RunResult::Outcome::FuelExhausted;
      break;
    }
    const std::size_t k = sched.choose(state, enabled);
    r.trace.push_back(apply_transition(state, enabled[k]));
  }
  r.final_state = std::move(state);
  return r;
}

RunResult run(const System& sys, const ArchConfig& arch, const RunOptions& options) {
  validate_against(sys, arch);
  auto program = std::make_shared<const System>(sys);
  OutcomeOracle oracle = options.oracle.value_or(OutcomeOracle::born_rule(options.policy.seed));
  return run_state(initial_state(program, arch, options.backend, std::move(oracle)), options);
}

std::string trace_jsonl(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derived-operation expansion

namespace {

class FreshNames {
 public:
  explicit FreshNames(const Block& b) { scan(b); }
  std::string next(const std::string& hint) {
    while (true) {
      std::string n = "_" + hint + std::to_string(counter_++);
      if (used_.insert(n).second) return n;
    }
  }

 private:
  void scan(const Block& b) {
    for (const auto& i : b) {
      for (auto& v : bound_vars(i.body)) used_.insert(v);
      if (auto* br = std::get_if<If>(&i.body)) {
        scan(br->then_block);
        scan(br->else_block);
      }
    }
  }
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

Instr gate1(GateKind k, Expr q, SourceLoc loc, std::optional<Expr> cond = std::nullopt) {
  return Instr(ApplyGate{{k, {}}, {std::move(q)}, std::move(cond)}, loc);
}

Instr cx(Expr c, Expr t, SourceLoc loc) {
  return Instr(ApplyGate{{GateKind::CX, {}}, {std::move(c), std::move(t)}, std::nullopt}, loc);
}

Block expand_block(const Block& b, FreshNames& fresh) {
  Block out;
  for (const auto& instr : b) {
    const SourceLoc loc = instr.loc;
    if (auto* q = std::get_if<QSend>(&instr.body)) {
      const std::string y1 = fresh.next("y"), y2 = fresh.next("y");
      out.push_back(cx(q->data, q->comm, loc));
      out.push_back(gate1(GateKind::H, q->data, loc));
      out.push_back(Instr(Measure{y1, {q->data}}, loc));
      out.push_back(Instr(Measure{y2, {q->comm}}, loc));
      out.push_back(Instr(Send{q->session, q->partner, q->label, Expr::var(y1)}, loc));
      out.push_back(Instr(Send{q->session, q->partner, q->label, Expr::var(y2)}, loc));
      out.push_back(Instr(Free{q->data}, loc));
      out.push_back(Instr(Free{q->comm}, loc));
    } else if (auto* q = std::get_if<QRecv>(&instr.body)) {
      const std::string y1 = fresh.next("y"), y2 = fresh.next("y");
      const Expr x = Expr::var(q->var);
      out.push_back(Instr(Init{q->var}, loc));
      out.push_back(Instr(Recv{q->session, q->label, y1}, loc));
      out.push_back(Instr(Recv{q->session, q->label, y2}, loc));
      out.push_back(gate1(GateKind::Z, q->comm, loc, Expr::var(y1)));
      out.push_back(gate1(GateKind::X, q->comm, loc, Expr::var(y2)));
      out.push_back(cx(x, q->comm, loc));
      out.push_back(cx(q->comm, x, loc));
      out.push_back(cx(x, q->comm, loc));
      out.push_back(Instr(Free{q->comm}, loc));
    } else if (auto* r = std::get_if<RemoteCx>(&instr.body)) {
      const std::string mine = fresh.next("y"), theirs = fresh.next("y");
      if (r->role == CxRole::Control) {
        out.push_back(cx(r->data, r->comm, loc));
      } else {
        out.push_back(cx(r->comm, r->data, loc));
        out.push_back(gate1(GateKind::H, r->comm, loc));
      }
      out.push_back(Instr(Measure{mine, {r->comm}}, loc));
      out.push_back(Instr(Free{r->comm}, loc));
      out.push_back(Instr(Send{r->session, r->partner, r->label, Expr::var(mine)}, loc));
      out.push_back(Instr(Recv{r->session, r->label, theirs}, loc));
      out.push_back(gate1(r->role == CxRole::Control ? GateKind::Z : GateKind::X, r->data, loc,
                          Expr::var(theirs)));
    } else if (auto* br = std::get_if<If>(&instr.body)) {
      If copy{br->condition, expand_block(br->then_block, fresh),
              expand_block(br->else_block, fresh)};
      out.push_back(Instr(std::move(copy), loc));
    } else {
      out.push_back(instr);
    }
  }
  return out;
}

}  // namespace

Process expand_derived(const Process& proc) {
  FreshNames fresh(proc.body);
  Process out = proc;
  out.body = expand_block(proc.body, fresh);
  return out;
}

System expand_derived(const System& sys) {
  System out;
  for (const auto& p : sys.processes) out.processes.push_back(expand_derived(p));
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive exploration

namespace {

std::string state_key(const RuntimeState& s) {
  std::ostringstream os;
  for (const auto& p : s.processes) {
    os << '[';
    for (const auto& f : p.frames) os << static_cast<const void*>(f.block) << ':' << f.index << ',';
    for (const auto& [k, v] : p.env) os << k << '=' << to_string(v) << ',';
    os << ']';
  }
  for (const auto& [p, pool] : s.data.free) {
    os << 'Q' << p << ':';
    for (auto q : pool) os << q.uid << ',';
  }
  for (const auto& [k, pool] : s.epr.free) {
    os << 'E' << k.first << '.' << k.second << ':';
    for (auto q : pool) os << q.uid << ',';
  }
  for (const auto& [k, buf] : s.heap.buffers()) {
    os << 'H' << k.first << '.' << k.second << ':';
    for (const auto& e : buf) os << e.label << '=' << to_string(e.value) << ',';
  }
  return os.str();
}

}  // namespace

ExplorationResult explore_schedules(const RuntimeState& initial, std::size_t max_states) {
  ExplorationResult res;
  RuntimeState root = initial;
  root.oracle = OutcomeOracle::fixed(0);
  std::unordered_set<std::string> seen;
  std::vector<Transition> path;
  std::function<void(const RuntimeState&)> dfs = [&](const RuntimeState& s) {
    if (res.truncated) return;
    if (!seen.insert(state_key(s)).second) return;
    if (++res.states > max_states) {
      res.truncated = true;
      return;
    }
    if (s.terminated()) {
      ++res.completed;
      return;
    }
    auto enabled = enabled_transitions(s);
    if (enabled.empty()) {
      ++res.stuck;
      StuckReport rep = classify_stuck(s);
      if (rep.kind == StuckReport::Kind::Deadlock) {
        ++res.deadlocks;
        if (!res.deadlock_schedule) {
          res.deadlock_schedule = path;
          res.deadlock_report = rep;
        }
      }
      return;
    }
    for (const auto& t : enabled) {
      path.push_back(t);
      dfs(step(s, t));
      path.pop_back();
    }
  };
  dfs(root);
  return res;
}

}  // namespace inquir
