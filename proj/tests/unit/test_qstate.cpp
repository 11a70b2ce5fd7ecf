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

#include "inquir/errors.hpp"
#include "inquir/qstate.hpp"
#include "support/generators.hpp"
#include "support/reference_sim.hpp"

using namespace inquir;

namespace {

QubitRef d(std::uint32_t u) { return {QubitKind::Data, u}; }
QubitRef c(std::uint32_t u) { return {QubitKind::Comm, u}; }

const double kR = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("random circuits agree with the dense reference") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t n = 1 + trial % 5;
    const Circuit circ = testing::random_circuit(rng, n, 25);
    testing::ReferenceSim ref(n);
    ref.run(circ);

    StatevectorState sv;
    std::vector<QubitRef> order;
    for (std::uint32_t i = 0; i < n; ++i) {
      order.push_back(d(100 + i));
      sv.alloc(order.back());
    }
    for (const auto& op : circ.ops) {
      std::vector<QubitRef> qs;
      for (auto q : op.qubits) qs.push_back(order[q]);
      sv.apply_gate(op.gate, qs);
    }
    CHECK(testing::overlap(sv.amplitudes(order), ref.state()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("make_epr prepares the Bell state") {
  StatevectorState sv;
  sv.make_epr(c(1), c(2));
  const auto amps = sv.amplitudes({c(1), c(2)});
  CHECK(fidelity(amps, {kR, 0, 0, kR}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sv.make_epr(c(1), c(3)), AlreadyAllocated);
}

TEST_CASE("scripted measurement collapses onto the forced branch") {
  StatevectorState sv;
  sv.make_epr(c(1), c(2));
  auto oracle = OutcomeOracle::scripted({1});
  CHECK(sv.measure_parity({c(1)}, oracle) == 1);
  CHECK(fidelity(sv.amplitudes({c(1), c(2)}), {0, 0, 0, 1}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sv.measure_parity({c(1)}, oracle), OracleExhausted);
}

TEST_CASE("forcing an impossible outcome is an error") {
  StatevectorState sv;
  sv.alloc(d(0));
  auto oracle = OutcomeOracle::fixed(1);
  CHECK_THROWS_AS(sv.measure_parity({d(0)}, oracle), ImpossibleOutcome);
}

TEST_CASE("parity measurement of a Bell pair is deterministic") {
  StatevectorState sv;
  sv.make_epr(c(1), c(2));
  auto oracle = OutcomeOracle::born_rule(3);
  CHECK(sv.measure_parity({c(1), c(2)}, oracle) == 0);
  CHECK(fidelity(sv.amplitudes({c(1), c(2)}), {kR, 0, 0, kR}) == doctest::Approx(1.0));
}

TEST_CASE("tracing out a product factor is exact") {
  StatevectorState sv;
  sv.alloc(d(0));
  sv.alloc(d(1));
  sv.apply_gate({GateKind::H, {}}, {d(0)});
  sv.apply_gate({GateKind::X, {}}, {d(1)});
  CHECK_FALSE(sv.trace_out(d(1)));
  CHECK(sv.qubit_count() == 1);
  CHECK(fidelity(sv.amplitudes({d(0)}), {kR, kR}) == doctest::Approx(1.0));
}

TEST_CASE("tracing out half of a Bell pair collapses") {
  StatevectorState sv;
  sv.make_epr(c(1), c(2));
  CHECK(sv.trace_out(c(1)));
  CHECK(sv.qubit_count() == 1);
  CHECK(sv.norm() == doctest::Approx(1.0));
}

TEST_CASE("group trace-out keeps the rest exact") {
  StatevectorState sv;
  sv.alloc(d(0));
  sv.apply_gate({GateKind::H, {}}, {d(0)});
  sv.make_epr(c(1), c(2));
  CHECK_FALSE(sv.trace_out_group({c(1), c(2)}));
  CHECK(fidelity(sv.amplitudes({d(0)}), {kR, kR}) == doctest::Approx(1.0));
}

TEST_CASE("subsystem rejects entangled subsets") {
  StatevectorState sv;
  sv.make_epr(c(1), c(2));
  sv.alloc(d(0));
  CHECK_THROWS_AS(sv.subsystem({c(1)}), DimensionMismatch);
  CHECK(sv.subsystem({c(1), c(2)}).size() == 4);
}

TEST_CASE("capacity and argument checks") {
  StatevectorState sv;
  for (std::uint32_t i = 0; i < kMaxStatevectorQubits; ++i) sv.alloc(d(i));
  CHECK_THROWS_AS(sv.alloc(d(999)), CapacityExceeded);
  CHECK_THROWS_AS(sv.apply_gate({GateKind::CX, {}}, {d(0), d(0)}), ArityMismatch);
  CHECK_THROWS_AS(sv.apply_gate({GateKind::H, {}}, {d(0), d(1)}), ArityMismatch);
  CHECK_THROWS_AS(sv.apply_gate({GateKind::H, {}}, {d(5000)}), UnknownQubit);
}

TEST_CASE("abstract backend tracks liveness only") {
  QuantumState q(BackendKind::Abstract);
  q.alloc(d(0));
  q.make_epr(c(1), c(2));
  CHECK(q.qubit_count() == 3);
  auto oracle = OutcomeOracle::fixed(0);
  CHECK(q.measure_parity({d(0)}, oracle) == 0);
  q.trace_out(c(1));
  CHECK_FALSE(q.contains(c(1)));
  CHECK_THROWS_AS(q.apply_gate({GateKind::H, {}}, {c(1)}), UnknownQubit);
  CHECK(q.statevector() == nullptr);
}

TEST_CASE("gate matrices are unitary") {
  for (int k = 0; k <= static_cast<int>(GateKind::U3); ++k) {
    Gate g{static_cast<GateKind>(k), {}};
    for (std::size_t i = 0; i < gate_param_count(g.kind); ++i) g.params.push_back(0.3 + i);
    const Matrix2 m = gate_matrix(g);
    CAPTURE(gate_name(g.kind));
    const Amplitude a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const Amplitude b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    CHECK(std::abs(a - 1.0) < 1e-12);
    CHECK(std::abs(b) < 1e-12);
  }
  CHECK_THROWS_AS(gate_matrix({GateKind::CX, {}}), ArityMismatch);
}

TEST_CASE("oracles") {
  auto f = OutcomeOracle::fixed(1);
  CHECK(f.draw(0.0) == 1);
  auto s = OutcomeOracle::scripted({0, 1});
  CHECK(s.remaining() == 2);
  CHECK(s.draw(1.0) == 0);
  CHECK(s.draw(0.0) == 1);
  CHECK(s.draws() == 2);
  auto a = OutcomeOracle::born_rule(42), b = OutcomeOracle::born_rule(42);
  for (int i = 0; i < 50; ++i) CHECK(a.draw(0.5) == b.draw(0.5));
}
