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

// Invariant suites. Each returns a list of failure messages (empty = pass).

#pragma once

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "inquir/frontend.hpp"
#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"
#include "support/generators.hpp"
#include "support/harness.hpp"

namespace inquir::testing {

using Failures = std::vector<std::string>;

inline Failures roundtrip_suite(std::size_t cases, std::uint64_t seed) {
  Failures f;
  AstGen gen(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const System s = gen.system();
    const std::string text = print_program(s);
    try {
      if (!(parse_program(text) == s)) f.push_back("case " + std::to_string(i) + ": text roundtrip differs\n" + text);
      if (!(system_from_json(to_json(s)) == s)) f.push_back("case " + std::to_string(i) + ": JSON roundtrip differs");
    } catch (const std::exception& e) {
      f.push_back("case " + std::to_string(i) + ": " + e.what() + "\n" + text);
    }
    if (f.size() > 5) break;
  }
  return f;
}

struct BornResult {
  std::size_t trials = 0;
  std::size_t ones = 0;
  double p_one = 0;
  double sigma = 0;
};

// RY(theta)|0> measured `trials` times through the interpreter, one run per
// seed.
inline BornResult born_suite(std::size_t trials, double theta) {
  const System sys = parse_program("process 0 { q = init(); RY<" + format_double(theta) +
                                   ">(q); m = measure(q); free q; }");
  const ArchConfig arch = linear(1, 1, 0);
  BornResult r;
  r.trials = trials;
  r.p_one = std::sin(theta / 2) * std::sin(theta / 2);
  r.sigma = std::sqrt(trials * r.p_one * (1 - r.p_one));
  for (std::size_t i = 0; i < trials; ++i) {
    RunOptions o;
    o.oracle = OutcomeOracle::born_rule(i);
    const RunResult res = run(sys, arch, o);
    r.ones += std::get<Bit>(res.final_state.processes[0].env.at("m")).value;
  }
  return r;
}

inline bool born_within(const BornResult& r, double k = 3.0) {
  return std::abs(static_cast<double>(r.ones) - r.trials * r.p_one) <= k * r.sigma;
}

// Random interleavings of labelled sends; each label must come out in send
// order regardless of the order in which labels are received.
inline Failures heap_fifo_suite(std::size_t cases, std::uint64_t seed) {
  Failures f;
  std::mt19937_64 rng(seed);
  const ArchConfig arch = linear(2, 1, 0);
  for (std::size_t c = 0; c < cases; ++c) {
    const int n = 2 + static_cast<int>(rng() % 10);
    std::string sender = "process 0 { s = open[0, 1]; ";
    std::map<std::string, std::vector<int>> sent;
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
      const std::string l = "l" + std::to_string(rng() % 3);
      const int bit = static_cast<int>(rng() % 2);
      sender += "s[1]!(" + l + ": " + std::to_string(bit) + "); ";
      sent[l].push_back(bit);
      labels.push_back(l);
    }
    sender += "}";
    std::shuffle(labels.begin(), labels.end(), rng);
    std::string receiver = "process 1 { s = open[0, 1]; ";
    std::map<std::string, int> seen;
    std::vector<std::pair<std::string, std::string>> vars;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::string v = "v" + std::to_string(i);
      receiver += "s?(" + labels[i] + ": " + v + "); ";
      vars.emplace_back(labels[i], v);
    }
    receiver += "}";
    RunOptions o;
    o.policy = SchedulerPolicy::random(c);
    const RunResult r = run(parse_program(sender + receiver), arch, o);
    if (r.outcome != RunResult::Outcome::Completed) {
      f.push_back("case " + std::to_string(c) + " did not complete");
      continue;
    }
    for (const auto& [l, v] : vars) {
      const int want = sent[l][seen[l]++];
      const int got = std::get<Bit>(r.final_state.processes[1].env.at(v)).value;
      if (want != got) f.push_back("case " + std::to_string(c) + ": label " + l + " out of order");
    }
  }
  return f;
}

// After every step: free + in-use qubits per participant equals capacity, and
// comm qubits are either pooled or live.
inline Failures conservation_suite(const System& sys, const ArchConfig& arch, std::size_t schedules,
                                   BackendKind backend = BackendKind::Statevector) {
  Failures f;
  auto shared = std::make_shared<const System>(sys);
  std::size_t total_comm = 0;
  for (const auto& l : arch.links) total_comm += l.comm_a + l.comm_b;
  for (std::size_t k = 0; k < schedules; ++k) {
    RuntimeState s = initial_state(shared, arch, backend, OutcomeOracle::born_rule(k));
    Scheduler sched(SchedulerPolicy::random(k));
    for (std::size_t step = 0; step < 100000; ++step) {
      for (const auto& p : arch.processors)
        if (s.data.size(p.id) + s.in_use_data(p.id) != p.data_qubits)
          f.push_back("schedule " + std::to_string(k) + " step " + std::to_string(step) +
                      ": data qubits of " + std::to_string(p.id) + " not conserved");
      std::size_t live_comm = 0;
      for (const auto& [q, home] : s.homes)
        if (q.kind == QubitKind::Comm && s.in_use(q)) ++live_comm;
      if (s.total_free_comm() + live_comm != total_comm)
        f.push_back("schedule " + std::to_string(k) + " step " + std::to_string(step) +
                    ": comm qubits not conserved");
      const auto t = enabled_transitions(s);
      if (t.empty() || f.size() > 5) break;
      apply_transition(s, t[sched.choose(s, t)]);
    }
  }
  return f;
}

inline Failures determinism_suite(const System& sys, const ArchConfig& arch) {
  Failures f;
  for (const char* pol : {"roundrobin", "random", "inorder", "depresolved"}) {
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
      RunOptions o;
      o.policy = *parse_policy(pol, seed);
      o.oracle = OutcomeOracle::born_rule(seed);
      const std::string a = trace_jsonl(run(sys, arch, o).trace);
      o.oracle = OutcomeOracle::born_rule(seed);
      const std::string b = trace_jsonl(run(sys, arch, o).trace);
      if (a != b) f.push_back(std::string("policy ") + pol + " seed " + std::to_string(seed) + " differs");
    }
  }
  return f;
}

}  // namespace inquir::testing
