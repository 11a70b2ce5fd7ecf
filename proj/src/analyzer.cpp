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

#include "inquir/analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include "inquir/errors.hpp"
#include "inquir/qstate.hpp"
#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"

namespace inquir {

std::string_view dep_kind_name(DepKind k) {
  switch (k) {
    case DepKind::ProgramOrder: return "program_order";
    case DepKind::Message: return "message";
    case DepKind::Rendezvous: return "rendezvous";
    case DepKind::QubitReuse: return "qubit_reuse";
  }
  return "?";
}

nlohmann::json EventTrace::to_json() const {
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& e : events) {
    nlohmann::json deps = nlohmann::json::array();
    for (const auto& d : e.deps) deps.push_back({{"node", d.node}, {"kind", dep_kind_name(d.kind)}});
    nlohmann::json j = {{"id", e.id},       {"process", e.process}, {"processor", e.processor},
                        {"op", e.op},       {"text", e.text},       {"start_ns", e.start_ns},
                        {"end_ns", e.end_ns}, {"uses_unit", e.uses_unit}, {"deps", deps}};
    if (e.partner) j["partner"] = *e.partner;
    evs.push_back(std::move(j));
  }
  return {{"processors", processors}, {"events", evs}};
}

namespace {

using SymVal = std::variant<std::monostate, bool, QubitRef>;

struct Symbol {
  SymVal value;
  std::optional<std::size_t> writer;
  std::vector<std::size_t> readers;
};

enum class NodeClass { Unit, Instant, Init, Recv, Open, GenEnt, Branch };

struct Node {
  std::size_t process = 0;
  const Instr* instr = nullptr;
  NodeClass cls = NodeClass::Instant;
  std::int64_t cost = 0;
  std::vector<std::pair<std::string_view, std::size_t>> in;  // var -> symbol
  std::vector<std::size_t> out;
  std::vector<Dep> deps;
  std::vector<std::size_t> dependents;
  std::size_t pending = 0;
  bool started = false;
  bool done = false;
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::size_t order = 0;
  std::optional<std::size_t> partner;
};

struct Builder {
  std::size_t process = 0;
  ParticipantId location = 0;
  std::vector<Frame> frames;
  std::map<std::string, std::size_t, std::less<>> env;
  std::map<std::string, std::size_t> resources;
  std::vector<std::size_t> since_branch;
  std::optional<std::size_t> last_branch;
  std::optional<std::size_t> last_node;
  bool paused = false;
};

struct Message {
  SymVal value;
  std::size_t sender = 0;
};

using MailKey = std::tuple<std::string, ParticipantId, std::string>;  // session, receiver, label
using GenKey = std::tuple<ParticipantId, ParticipantId, std::string>;  // owner, peer, label
using OpenKey = std::pair<std::string, std::vector<ParticipantId>>;

class Simulator {
 public:
  Simulator(std::shared_ptr<const System> sys, const ArchConfig& arch, const CostModel& costs,
            const AnalyzerOptions& opt)
      : sys_(std::move(sys)), arch_(arch), costs_(costs), opt_(opt),
        oracle_(OutcomeOracle::born_rule(opt.seed)) {
    std::uint32_t uid = 0;
    for (const auto& p : arch.processors) {
      for (std::uint32_t k = 0; k < p.data_qubits; ++k) {
        QubitRef q{QubitKind::Data, uid++};
        data_[p.id].push_back(q);
        home_[q] = {p.id, std::nullopt};
      }
      unit_busy_[p.id] = false;
    }
    for (const auto& l : arch.links) {
      for (auto [owner, peer, n] : {std::tuple{l.a, l.b, l.comm_a}, std::tuple{l.b, l.a, l.comm_b}}) {
        for (std::uint32_t k = 0; k < n; ++k) {
          QubitRef q{QubitKind::Comm, uid++};
          comm_[{owner, peer}].push_back(q);
          home_[q] = {owner, peer};
        }
      }
    }
    for (std::size_t i = 0; i < sys_->processes.size(); ++i) {
      Builder b;
      b.process = i;
      b.location = sys_->processes[i].location;
      if (!sys_->processes[i].body.empty()) b.frames.push_back({&sys_->processes[i].body, 0});
      builders_.push_back(std::move(b));
    }
  }

  EventTrace run() {
    for (auto& b : builders_) emit(b);
    while (true) {
      while (!instant_.empty()) {
        const std::size_t n = instant_.front();
        instant_.pop_front();
        start(n);
        complete(n);
      }
      start_units();
      if (!instant_.empty()) continue;
      if (events_.empty()) break;
      const std::int64_t t = events_.top().first;
      now_ = t;
      std::vector<std::size_t> batch;
      while (!events_.empty() && events_.top().first == t) {
        batch.push_back(events_.top().second);
        events_.pop();
      }
      std::sort(batch.begin(), batch.end());
      for (auto n : batch) {
        if (nodes_[n].cls == NodeClass::Unit) unit_busy_[location(n)] = false;
        complete(n);
      }
    }
    check_finished();

    EventTrace trace;
    for (const auto& p : arch_.processors) trace.processors.push_back(p.id);
    trace.events.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      Event e;
      e.id = i;
      e.process = n.process;
      e.processor = location(i);
      e.op = std::string(op_name(n.instr->body));
      e.text = print_instr(*n.instr);
      e.start_ns = n.start;
      e.end_ns = n.end;
      e.uses_unit = n.cls == NodeClass::Unit;
      e.partner = n.partner;
      e.deps = n.deps;
      e.completion_order = n.order;
      trace.events.push_back(std::move(e));
    }
    return trace;
  }

 private:
  ParticipantId location(std::size_t n) const { return builders_[nodes_[n].process].location; }

  // ---- construction -------------------------------------------------------

  std::size_t symbol_of(Builder& b, const std::string& var) {
    auto it = b.env.find(var);
    if (it == b.env.end())
      throw EvaluationError("unbound variable '" + var + "' in process " + std::to_string(b.process));
    return it->second;
  }

  void add_dep(std::size_t node, std::size_t pred, DepKind kind) {
    if (node == pred) return;
    Node& n = nodes_[node];
    for (const auto& d : n.deps)
      if (d.node == pred) return;
    n.deps.push_back({pred, kind});
    if (!nodes_[pred].done) {
      ++n.pending;
      nodes_[pred].dependents.push_back(node);
    }
  }

  void read_sym(std::size_t node, std::size_t sym) {
    Symbol& s = syms_[sym];
    if (s.writer) add_dep(node, *s.writer, DepKind::ProgramOrder);
    s.readers.push_back(node);
  }

  void write_sym(std::size_t node, std::size_t sym) {
    Symbol& s = syms_[sym];
    if (s.writer) add_dep(node, *s.writer, DepKind::ProgramOrder);
    for (auto r : s.readers) add_dep(node, r, DepKind::ProgramOrder);
    s.readers.clear();
    s.writer = node;
  }

  void read_expr(Builder& b, std::size_t node, const Expr& e) {
    std::vector<std::string> vars;
    e.collect_vars(vars);
    for (const auto& v : vars) {
      const std::size_t sym = symbol_of(b, v);
      nodes_[node].in.emplace_back(b.env.find(v)->first, sym);
      read_sym(node, sym);
    }
  }

  // Qubit operands: the quantum state they name is mutated, so they are writes.
  void touch_qubit(Builder& b, std::size_t node, const Expr& e) {
    std::vector<std::string> vars;
    e.collect_vars(vars);
    for (const auto& v : vars) {
      const std::size_t sym = symbol_of(b, v);
      nodes_[node].in.emplace_back(b.env.find(v)->first, sym);
      write_sym(node, sym);
    }
  }

  std::size_t resource(Builder& b, const std::string& key) {
    auto [it, fresh] = b.resources.emplace(key, syms_.size());
    if (fresh) syms_.emplace_back();
    return it->second;
  }

  void bind(Builder& b, std::size_t node, const std::string& var) {
    const std::size_t sym = syms_.size();
    syms_.push_back({std::monostate{}, node, {}});
    nodes_[node].out.push_back(sym);
    b.env[var] = sym;
  }

  std::int64_t unit_cost(ParticipantId p, const InstrBody& body) const {
    const OpCosts& c = costs_.at(p);
    if (auto* g = std::get_if<ApplyGate>(&body))
      return g->operands.size() >= 2 ? c.two_qubit_ns : c.single_qubit_ns;
    if (std::holds_alternative<Measure>(body)) return c.measure_ns;
    if (std::holds_alternative<EntSwap>(body)) return c.two_qubit_ns + c.single_qubit_ns + c.measure_ns;
    if (std::holds_alternative<Send>(body)) return c.classical_send_ns;
    return 0;
  }

  void emit(Builder& b) {
    while (!b.paused) {
      while (!b.frames.empty() && b.frames.back().index >= b.frames.back().block->size())
        b.frames.pop_back();
      if (b.frames.empty()) return;
      const Instr& instr = (*b.frames.back().block)[b.frames.back().index++];
      if (std::holds_alternative<Stop>(instr.body)) {
        b.frames.clear();
        return;
      }
      const std::size_t id = nodes_.size();
      nodes_.emplace_back();
      nodes_[id].process = b.process;
      nodes_[id].instr = &instr;
      if (b.last_branch) add_dep(id, *b.last_branch, DepKind::ProgramOrder);
      if (opt_.policy == IssuePolicy::InOrder && b.last_node)
        add_dep(id, *b.last_node, DepKind::ProgramOrder);
      describe(b, id, instr);
      b.last_node = id;
      b.since_branch.push_back(id);
      if (nodes_[id].cls == NodeClass::Branch) {
        for (auto n : b.since_branch) add_dep(id, n, DepKind::ProgramOrder);
        b.since_branch.clear();
        b.last_branch = id;
        b.paused = true;
      }
      if (nodes_[id].pending == 0) dispatch(id);
    }
  }

  void describe(Builder& b, std::size_t id, const Instr& instr) {
    Node& n = nodes_[id];
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Open>) {
            nodes_[id].cls = NodeClass::Open;
            write_sym(id, resource(b, "sess|" + x.session));
          } else if constexpr (std::is_same_v<T, Close>) {
            nodes_[id].cls = NodeClass::Instant;
            write_sym(id, resource(b, "sess|" + x.session));
          } else if constexpr (std::is_same_v<T, Init>) {
            nodes_[id].cls = NodeClass::Init;
            bind(b, id, x.var);
          } else if constexpr (std::is_same_v<T, Free>) {
            nodes_[id].cls = NodeClass::Instant;
            touch_qubit(b, id, x.target);
          } else if constexpr (std::is_same_v<T, Assign>) {
            nodes_[id].cls = NodeClass::Instant;
            read_expr(b, id, x.value);
            bind(b, id, x.var);
          } else if constexpr (std::is_same_v<T, ApplyGate>) {
            nodes_[id].cls = NodeClass::Unit;
            if (x.condition) read_expr(b, id, *x.condition);
            for (const auto& o : x.operands) touch_qubit(b, id, o);
          } else if constexpr (std::is_same_v<T, Measure>) {
            nodes_[id].cls = NodeClass::Unit;
            for (const auto& o : x.operands) touch_qubit(b, id, o);
            bind(b, id, x.var);
          } else if constexpr (std::is_same_v<T, GenEnt>) {
            nodes_[id].cls = NodeClass::GenEnt;
            bind(b, id, x.var);
          } else if constexpr (std::is_same_v<T, EntSwap>) {
            nodes_[id].cls = NodeClass::Unit;
            touch_qubit(b, id, x.first);
            touch_qubit(b, id, x.second);
            bind(b, id, x.out1);
            bind(b, id, x.out2);
          } else if constexpr (std::is_same_v<T, If>) {
            nodes_[id].cls = NodeClass::Branch;
            read_expr(b, id, x.condition);
          } else if constexpr (std::is_same_v<T, Send>) {
            nodes_[id].cls = NodeClass::Unit;
            read_expr(b, id, x.payload);
            read_sym(id, resource(b, "sess|" + x.session));
            write_sym(id, resource(b, "send|" + x.session + "|" + std::to_string(x.partner) + "|" + x.label));
          } else if constexpr (std::is_same_v<T, Recv>) {
            nodes_[id].cls = NodeClass::Recv;
            read_sym(id, resource(b, "sess|" + x.session));
            write_sym(id, resource(b, "recv|" + x.session + "|" + x.label));
            bind(b, id, x.var);
          } else {
            throw EvaluationError("derived operation reached the analyzer unexpanded");
          }
        },
        instr.body);
    n.cost = unit_cost(b.location, instr.body);
    (void)n;
  }

  // ---- evaluation ---------------------------------------------------------

  SymVal eval(const Node& n, const Expr& e) const {
    switch (e.kind()) {
      case Expr::Kind::Value: {
        const Value& v = e.value();
        if (auto* bit = std::get_if<Bit>(&v)) return bit->value;
        if (auto* q = std::get_if<QubitRef>(&v)) return *q;
        const std::string& name = std::get<Var>(v).name;
        for (const auto& [k, sym] : n.in)
          if (k == name) return syms_[sym].value;
        throw EvaluationError("unbound variable '" + name + "'");
      }
      case Expr::Kind::Not:
        return !eval_bit(n, e.lhs());
      case Expr::Kind::And:
        return eval_bit(n, e.lhs()) && eval_bit(n, e.rhs());
      case Expr::Kind::Xor:
        return eval_bit(n, e.lhs()) != eval_bit(n, e.rhs());
    }
    return std::monostate{};
  }

  bool eval_bit(const Node& n, const Expr& e) const {
    SymVal v = eval(n, e);
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw EvaluationError("expected a bit in " + print_expr(e));
  }

  QubitRef eval_qubit(const Node& n, const Expr& e) const {
    SymVal v = eval(n, e);
    if (auto* q = std::get_if<QubitRef>(&v)) return *q;
    throw EvaluationError("expected a qubit in " + print_expr(e));
  }

  // ---- scheduling ---------------------------------------------------------

  void dispatch(std::size_t id) {
    Node& n = nodes_[id];
    const ParticipantId p = location(id);
    switch (n.cls) {
      case NodeClass::Unit:
        unit_ready_[p].insert({priority(id), id});
        break;
      case NodeClass::Instant:
      case NodeClass::Branch:
        instant_.push_back(id);
        break;
      case NodeClass::Init:
        init_wait_[p].insert(id);
        try_init(p);
        break;
      case NodeClass::Recv: {
        const Recv& r = std::get<Recv>(n.instr->body);
        MailKey key{r.session, p, r.label};
        recv_wait_[key].push_back(id);
        try_recv(key);
        break;
      }
      case NodeClass::Open: {
        const Open& o = std::get<Open>(n.instr->body);
        OpenKey key{o.session, o.participants};
        open_wait_[key][p].push_back(id);
        try_open(key);
        break;
      }
      case NodeClass::GenEnt: {
        const GenEnt& g = std::get<GenEnt>(n.instr->body);
        auto& mine = gen_ready_[GenKey{p, g.partner, g.label}];
        auto& theirs = gen_ready_[GenKey{g.partner, p, g.label}];
        if (theirs.empty()) {
          mine.push_back(id);
          break;
        }
        const std::size_t other = theirs.front();
        theirs.pop_front();
        const auto link = std::minmax(p, g.partner);
        const std::size_t lo = location(other) == link.first ? other : id;
        const std::size_t hi = lo == id ? other : id;
        link_wait_[link].insert({std::min(lo, hi), lo, hi});
        try_link(link);
        break;
      }
    }
  }

  // Operations on communication qubits go first: they hold link capacity.
  int priority(std::size_t id) const {
    const Node& n = nodes_[id];
    for (const auto& [name, sym] : n.in)
      if (auto* q = std::get_if<QubitRef>(&syms_[sym].value); q && q->kind == QubitKind::Comm) return 0;
    return 1;
  }

  void try_init(ParticipantId p) {
    auto& wait = init_wait_[p];
    auto& pool = data_[p];
    while (!wait.empty() && !pool.empty()) {
      const std::size_t id = *wait.begin();
      wait.erase(wait.begin());
      claim(id, pool);
      instant_.push_back(id);
    }
  }

  void claim(std::size_t id, std::deque<QubitRef>& pool) {
    const QubitRef q = pool.front();
    pool.pop_front();
    syms_[nodes_[id].out.front()].value = q;
    if (auto it = freed_by_.find(q); it != freed_by_.end())
      add_dep(id, it->second, DepKind::QubitReuse);
  }

  void try_recv(const MailKey& key) {
    auto& wait = recv_wait_[key];
    auto& box = mail_[key];
    while (!wait.empty() && !box.empty()) {
      const std::size_t id = wait.front();
      wait.pop_front();
      Message m = box.front();
      box.pop_front();
      syms_[nodes_[id].out.front()].value = m.value;
      add_dep(id, m.sender, DepKind::Message);
      instant_.push_back(id);
    }
  }

  void try_open(const OpenKey& key) {
    auto& byloc = open_wait_[key];
    for (auto p : key.second)
      if (byloc[p].empty()) return;
    std::vector<std::size_t> group;
    for (auto p : key.second) {
      group.push_back(byloc[p].front());
      byloc[p].pop_front();
    }
    rendezvous(group);
    for (auto id : group) instant_.push_back(id);
  }

  // Each member inherits the static predecessors of the others.
  void rendezvous(const std::vector<std::size_t>& group) {
    std::vector<std::vector<Dep>> before;
    for (auto id : group) before.push_back(nodes_[id].deps);
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = 0; j < group.size(); ++j)
        if (i != j)
          for (const auto& d : before[j]) add_dep(group[i], d.node, DepKind::Rendezvous);
  }

  void try_link(std::pair<ParticipantId, ParticipantId> link) {
    auto& wait = link_wait_[link];
    auto& pool_lo = comm_[{link.first, link.second}];
    auto& pool_hi = comm_[{link.second, link.first}];
    while (!wait.empty() && !pool_lo.empty() && !pool_hi.empty()) {
      auto [key, lo, hi] = *wait.begin();
      wait.erase(wait.begin());
      claim(lo, pool_lo);
      claim(hi, pool_hi);
      nodes_[lo].partner = hi;
      nodes_[hi].partner = lo;
      rendezvous({lo, hi});
      const std::int64_t d =
          std::max(costs_.at(link.first).ent_gen_ns, costs_.at(link.second).ent_gen_ns);
      for (auto id : {lo, hi}) {
        start(id);
        events_.push({now_ + d, id});
      }
    }
  }

  void start(std::size_t id) {
    nodes_[id].started = true;
    nodes_[id].start = now_;
  }

  void start_units() {
    for (auto& [p, ready] : unit_ready_) {
      while (!ready.empty() && !unit_busy_[p]) {
        const std::size_t id = ready.begin()->second;
        ready.erase(ready.begin());
        unit_busy_[p] = opt_.serialize_units;
        start(id);
        events_.push({now_ + nodes_[id].cost, id});
      }
    }
  }

  void release(QubitRef q, std::size_t by) {
    const auto& [owner, peer] = home_.at(q);
    freed_by_[q] = by;
    if (peer) {
      comm_[{owner, *peer}].push_back(q);
      try_link(std::minmax(owner, *peer));
    } else {
      data_[owner].push_back(q);
      try_init(owner);
    }
  }

  void complete(std::size_t id) {
    Node& n = nodes_[id];
    n.done = true;
    n.end = now_;
    n.order = ++completed_;
    const ParticipantId p = location(id);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Free>) {
            release(eval_qubit(n, x.target), id);
          } else if constexpr (std::is_same_v<T, Assign>) {
            syms_[n.out.front()].value = eval(n, x.value);
          } else if constexpr (std::is_same_v<T, Measure>) {
            syms_[n.out.front()].value = oracle_.draw(0.5) != 0;
          } else if constexpr (std::is_same_v<T, EntSwap>) {
            const QubitRef a = eval_qubit(n, x.first), b = eval_qubit(n, x.second);
            syms_[n.out[0]].value = oracle_.draw(0.5) != 0;
            syms_[n.out[1]].value = oracle_.draw(0.5) != 0;
            release(a, id);
            release(b, id);
          } else if constexpr (std::is_same_v<T, Send>) {
            MailKey key{x.session, x.partner, x.label};
            mail_[key].push_back({eval(n, x.payload), id});
            try_recv(key);
          } else if constexpr (std::is_same_v<T, If>) {
            Builder& b = builders_[n.process];
            const Block& blk = eval_bit(n, x.condition) ? x.then_block : x.else_block;
            if (!blk.empty()) b.frames.push_back({&blk, 0});
            b.paused = false;
          }
        },
        n.instr->body);
    (void)p;
    for (auto d : n.dependents)
      if (--nodes_[d].pending == 0) dispatch(d);
    n.dependents.clear();
    if (n.cls == NodeClass::Branch) emit(builders_[n.process]);
  }

  void check_finished() const {
    std::vector<std::string> blocked;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!nodes_[i].done)
        blocked.push_back("P" + std::to_string(nodes_[i].process) + "@" +
                          std::to_string(location(i)) + ": " + print_instr(*nodes_[i].instr));
    if (blocked.empty()) return;
    std::ostringstream os;
    os << "simulation stuck with " << blocked.size() << " pending instruction(s)";
    std::set<std::size_t> shown;
    for (std::size_t i = 0, k = 0; i < nodes_.size() && k < 8; ++i) {
      if (nodes_[i].done || !shown.insert(nodes_[i].process).second) continue;
      os << "; P" << nodes_[i].process << " at " << print_instr(*nodes_[i].instr);
      ++k;
    }
    throw StuckDuringSimulation(os.str());
  }

  std::shared_ptr<const System> sys_;
  const ArchConfig& arch_;
  const CostModel& costs_;
  AnalyzerOptions opt_;
  OutcomeOracle oracle_;

  std::vector<Node> nodes_;
  std::vector<Symbol> syms_;
  std::vector<Builder> builders_;

  std::map<ParticipantId, std::deque<QubitRef>> data_;
  std::map<std::pair<ParticipantId, ParticipantId>, std::deque<QubitRef>> comm_;
  std::map<QubitRef, QubitHome> home_;
  std::map<QubitRef, std::size_t> freed_by_;

  std::map<ParticipantId, std::set<std::pair<int, std::size_t>>> unit_ready_;
  std::map<ParticipantId, bool> unit_busy_;
  std::deque<std::size_t> instant_;
  std::map<ParticipantId, std::set<std::size_t>> init_wait_;
  std::map<MailKey, std::deque<std::size_t>> recv_wait_;
  std::map<MailKey, std::deque<Message>> mail_;
  std::map<OpenKey, std::map<ParticipantId, std::deque<std::size_t>>> open_wait_;
  std::map<GenKey, std::deque<std::size_t>> gen_ready_;
  std::map<std::pair<ParticipantId, ParticipantId>, std::set<std::tuple<std::size_t, std::size_t, std::size_t>>>
      link_wait_;

  using Timed = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Timed, std::vector<Timed>, std::greater<>> events_;
  std::int64_t now_ = 0;
  std::size_t completed_ = 0;
};

}  // namespace

EventTrace simulate_cost(const System& sys, const ArchConfig& arch, const CostModel& costs,
                         const AnalyzerOptions& options) {
  validate_against(sys, arch);
  costs.validate();
  auto expanded = std::make_shared<const System>(expand_derived(sys));
  return Simulator(expanded, arch, costs, options).run();
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [p, n] : ops_per_processor) per[std::to_string(p)] = n;
  return {{"e_count", e_count},     {"epr_pairs", epr_pairs}, {"c_count", c_count},
          {"messages", messages},   {"e_depth", e_depth},     {"c_depth", c_depth},
          {"total_cost_ns", total_cost_ns}, {"ops_per_processor", per}};
}

MetricsReport metrics(const EventTrace& trace) {
  MetricsReport r;
  for (auto p : trace.processors) r.ops_per_processor[p] = 0;
  for (const auto& e : trace.events) {
    ++r.ops_per_processor[e.processor];
    if (e.op == "genEnt") ++r.e_count;
    if (e.op == "send") {
      ++r.c_count;
      ++r.messages;
    }
    if (e.op == "recv") ++r.c_count;
    r.total_cost_ns = std::max(r.total_cost_ns, e.end_ns);
  }
  r.epr_pairs = r.e_count / 2;

  // Longest weighted paths. Predecessors always complete earlier, so walking
  // in completion order is a topological order; a genEnt pair is one node.
  std::vector<std::size_t> order(trace.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return trace.events[a].completion_order < trace.events[b].completion_order;
  });
  std::vector<std::size_t> de(trace.events.size(), 0), dc(trace.events.size(), 0);
  std::vector<bool> seen(trace.events.size(), false);
  for (auto i : order) {
    if (seen[i]) continue;
    const Event& e = trace.events[i];
    std::vector<std::size_t> group{i};
    if (e.partner) group.push_back(*e.partner);
    std::size_t be = 0, bc = 0;
    for (auto g : group)
      for (const auto& d : trace.events[g].deps) {
        if (std::find(group.begin(), group.end(), d.node) != group.end()) continue;
        be = std::max(be, de[d.node]);
        bc = std::max(bc, dc[d.node]);
      }
    const std::size_t we = e.op == "genEnt" ? 1 : 0;
    for (auto g : group) {
      const std::string& op = trace.events[g].op;
      de[g] = be + we;
      dc[g] = bc + ((op == "send" || op == "recv") ? 1 : 0);
      seen[g] = true;
      r.e_depth = std::max(r.e_depth, de[g]);
      r.c_depth = std::max(r.c_depth, dc[g]);
    }
  }
  return r;
}

std::vector<TimelineRow> timeline(const EventTrace& trace) {
  std::vector<TimelineRow> rows;
  if (trace.events.empty()) return rows;
  std::map<ParticipantId, std::size_t> remaining;
  for (auto p : trace.processors) remaining[p] = 0;
  for (const auto& e : trace.events) ++remaining[e.processor];
  for (const auto& [p, n] : remaining) rows.push_back({0, p, n});
  std::vector<const Event*> byend;
  for (const auto& e : trace.events) byend.push_back(&e);
  std::stable_sort(byend.begin(), byend.end(),
                   [](const Event* a, const Event* b) { return a->end_ns < b->end_ns; });
  for (std::size_t i = 0; i < byend.size();) {
    const std::int64_t t = byend[i]->end_ns;
    for (; i < byend.size() && byend[i]->end_ns == t; ++i) --remaining[byend[i]->processor];
    for (const auto& [p, n] : remaining) rows.push_back({t, p, n});
  }
  return rows;
}

std::string timeline_csv(const std::vector<TimelineRow>& rows) {
  std::string out = "time_ns,processor,remaining_ops\n";
  for (const auto& r : rows)
    out += std::to_string(r.time_ns) + "," + std::to_string(r.processor) + "," +
           std::to_string(r.remaining_ops) + "\n";
  return out;
}

std::vector<SweepCell> sweep(const std::vector<NamedCircuit>& circuits,
                             const std::vector<ArchConfig>& archs, const CostModel& costs,
                             const AnalyzerOptions& options, unsigned threads) {
  std::vector<SweepCell> cells;
  for (const auto& c : circuits)
    for (const auto& a : archs) cells.push_back({c.name, a.name, std::nullopt, std::nullopt});
  if (cells.empty()) return cells;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
      const auto& circ = circuits[k / archs.size()].circuit;
      const auto& arch = archs[k % archs.size()];
      try {
        cells[k].report = metrics(simulate_cost(compile(circ, arch), arch, costs, options));
      } catch (const std::exception& ex) {
        cells[k].error = ex.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return cells;
}

nlohmann::json sweep_json(const std::vector<SweepCell>& cells) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json j = {{"circuit", c.circuit}, {"arch", c.arch}};
    if (c.report) j["metrics"] = c.report->to_json();
    if (c.error) j["error"] = *c.error;
    out.push_back(std::move(j));
  }
  return {{"cells", out}};
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::string out = "circuit,arch,e_count,c_count,e_depth,c_depth,total_cost_ns,error\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& c : cells) {
    out += quote(c.circuit) + "," + quote(c.arch) + ",";
    if (c.report) {
      const auto& r = *c.report;
      out += std::to_string(r.e_count) + "," + std::to_string(r.c_count) + "," +
             std::to_string(r.e_depth) + "," + std::to_string(r.c_depth) + "," +
             std::to_string(r.total_cost_ns) + ",";
    } else {
      out += ",,,,,";
    }
    out += c.error ? quote(*c.error) : "";
    out += "\n";
  }
  return out;
}

}  // namespace inquir
