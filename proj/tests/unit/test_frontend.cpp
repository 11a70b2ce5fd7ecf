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

#include <doctest.h>

#include <random>

#include "inquir/checker.hpp"
#include "inquir/errors.hpp"
#include "inquir/frontend.hpp"
#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"
#include "support/generators.hpp"
#include "support/harness.hpp"
#include "support/reference_sim.hpp"

using namespace inquir;

namespace {

std::size_t count_op(const System& s, std::string_view op) {
  std::size_t n = 0;
  std::function<void(const Block&)> walk = [&](const Block& b) {
    for (const auto& i : b) {
      if (op_name(i.body) == op) ++n;
      if (auto* br = std::get_if<If>(&i.body)) {
        walk(br->then_block);
        walk(br->else_block);
      }
    }
  };
  for (const auto& p : s.processes) walk(p.body);
  return n;
}

}  // namespace

TEST_CASE("qasm header, registers and broadcast") {
  const Circuit c = parse_qasm(R"(
    OPENQASM 2.0;
    include "qelib1.inc";
    qreg a[2];
    qreg b[1];
    creg m[3];
    h a;
    cx a[1], b[0];
    rz(pi/2) b[0];
    barrier a, b;
    measure b[0] -> m[2];
  )");
  CHECK(c.num_qubits == 3);
  REQUIRE(c.ops.size() == 6);
  CHECK(c.ops[0].qubits == std::vector<std::uint32_t>{0});
  CHECK(c.ops[1].qubits == std::vector<std::uint32_t>{1});
  CHECK(c.ops[2].gate.kind == GateKind::CX);
  CHECK(c.ops[2].qubits == std::vector<std::uint32_t>{1, 2});
  CHECK(c.ops[3].gate.params.at(0) == doctest::Approx(M_PI / 2));
  CHECK(c.ops[4].kind == CircuitOp::Kind::Barrier);
  CHECK(c.ops[5].kind == CircuitOp::Kind::Measure);
  CHECK(c.remote_candidates() == 1);
}

TEST_CASE("register-wide measure") {
  const Circuit c = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; measure q -> c;");
  CHECK(c.ops.size() == 2);
}

TEST_CASE("parameter expressions") {
  const Circuit c = parse_qasm("OPENQASM 2.0; qreg q[1]; u3(-pi/4, 2*pi^2, sqrt(4)+cos(0)) q[0]; u1(ln(exp(1.5))) q[0];");
  CHECK(c.ops[0].gate.params[0] == doctest::Approx(-M_PI / 4));
  CHECK(c.ops[0].gate.params[1] == doctest::Approx(2 * M_PI * M_PI));
  CHECK(c.ops[0].gate.params[2] == doctest::Approx(3.0));
  CHECK(c.ops[1].gate.params[0] == doctest::Approx(1.5));
}

TEST_CASE("ccx expands to an equivalent Clifford+T sequence") {
  const Circuit c = parse_qasm("OPENQASM 2.0; qreg q[3]; ccx q[0], q[1], q[2];");
  CHECK(c.ops.size() == 15);
  std::size_t cx = 0;
  for (const auto& op : c.ops) cx += op.gate.kind == GateKind::CX;
  CHECK(cx == 6);
  for (std::uint32_t input = 0; input < 8; ++input) {
    testing::ReferenceSim sim(3), want(3);
    for (std::uint32_t k = 0; k < 3; ++k)
      if (input >> (2 - k) & 1) {
        sim.apply({GateKind::X, {}}, {k});
        want.apply({GateKind::X, {}}, {k});
      }
    sim.run(c);
    if ((input & 6) == 6) want.apply({GateKind::X, {}}, {2});
    CHECK(testing::overlap(sim.state(), want.state()) == doctest::Approx(1.0));
  }
}

TEST_CASE("qasm errors") {
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; swap q[0], q[1];"), UnsupportedGate);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0];"), SyntaxError);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[5];"), SyntaxError);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; rz q[0];"), SyntaxError);
  CHECK_THROWS_AS(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]"), SyntaxError);
}

TEST_CASE("partition fills processors in order") {
  Circuit c;
  c.num_qubits = 1;
  const QubitMap one = partition(c, linear(4, 2, 2));
  CHECK(one.at(0) == QubitSlot{0, 0});
  c.num_qubits = 5;
  const QubitMap m = partition(c, linear(4, 2, 2));
  CHECK(m[1] == QubitSlot{0, 1});
  CHECK(m[2] == QubitSlot{1, 0});
  CHECK(m[4] == QubitSlot{2, 0});
  c.num_qubits = 9;
  CHECK_THROWS_AS(partition(c, linear(4, 2, 2)), CapacityExceeded);
}

TEST_CASE("local, adjacent and distant CX lowering") {
  const ArchConfig arch = linear(3, 1, 2);
  const System local = compile(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0], q[1];"), linear(1, 2, 0));
  CHECK(count_op(local, "genEnt") == 0);
  CHECK(count_op(local, "gate") == 1);

  const System adj = compile(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0], q[1];"), arch);
  CHECK(count_op(adj, "genEnt") == 2);
  CHECK(count_op(adj, "rcxc") == 1);
  CHECK(count_op(adj, "rcxt") == 1);
  CHECK(count_op(adj, "entSwap") == 0);

  const System far = compile(parse_qasm("OPENQASM 2.0; qreg q[3]; cx q[0], q[2];"), arch);
  CHECK(count_op(far, "genEnt") == 4);
  CHECK(count_op(far, "entSwap") == 1);
  CHECK(count_op(far, "send") == 2);
  CHECK(count_op(far, "recv") == 2);
  CHECK(count_op(far, "open") == 3);
  CHECK(count_op(far, "close") == 3);
  CHECK_FALSE(has_errors(lint(far)));
}

TEST_CASE("lowering is deterministic and reparses") {
  const ArchConfig arch = cube(2, 3);
  const Circuit c = parse_qasm(testing::slurp("bench/rd53_138.qasm"));
  const std::string a = print_program(compile(c, arch));
  const std::string b = print_program(compile(c, arch));
  CHECK(a == b);
  CHECK(parse_program(a) == compile(c, arch));
}

TEST_CASE("disconnected topology") {
  ArchConfig arch;
  arch.processors = {{0, 1}, {1, 1}};
  CHECK_THROWS_AS(compile(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0], q[1];"), arch), DisconnectedTopology);
}

TEST_CASE("compiled random circuits match the dense reference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    CAPTURE(trial);
    const std::uint32_t n = 2 + trial % 3;
    const Circuit c = testing::random_circuit(rng, n, 12);
    testing::ReferenceSim ref(n);
    ref.run(c);
    const ArchConfig arch = linear(n, 1, 2);
    RunOptions o;
    o.policy = SchedulerPolicy::random(trial);
    o.oracle = OutcomeOracle::born_rule(trial);
    const RunResult r = run(compile(c, arch), arch, o);
    REQUIRE(r.outcome == RunResult::Outcome::Completed);
    std::vector<std::string> names;
    for (std::uint32_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
    CHECK(testing::overlap(testing::named_state(r.final_state, names), ref.state()) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}
