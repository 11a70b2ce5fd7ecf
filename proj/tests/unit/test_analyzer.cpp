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

#include "inquir/analyzer.hpp"
#include "inquir/errors.hpp"
#include "inquir/frontend.hpp"
#include "inquir/syntax.hpp"
#include "support/harness.hpp"
#include "support/trace_check.hpp"

using namespace inquir;
using testing::slurp;

namespace {

Circuit bench(const std::string& name) { return parse_qasm(slurp("bench/" + name + ".qasm")); }

}  // namespace

// Hand schedule for one adjacent remote CX with the default costs. Both sides
// wait 1000 ns for the EPR pair, then
//   control: CX 60, measure 240, send 30          -> its bit arrives at 1330
//   target:  CX 60, H 30, measure 240, send 30    -> its bit arrives at 1360
// and each side applies a 30 ns correction once the peer's bit is in, so
// both finish at 1390.
TEST_CASE("single adjacent remote CX costs 1390 ns") {
  const ArchConfig arch = linear(2, 1, 1);
  const System sys = compile(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0], q[1];"), arch);
  const EventTrace t = simulate_cost(sys, arch, {});
  CHECK(metrics(t).total_cost_ns == 1390);
  CHECK(testing::check_trace(t, {}, false).empty());
}

TEST_CASE("ising on linear(8,2,2)") {
  const ArchConfig arch = linear(8, 2, 2);
  const EventTrace t = simulate_cost(compile(bench("ising_model_16"), arch), arch, {});
  const MetricsReport m = metrics(t);
  CHECK(m.e_count == 140);
  CHECK(m.epr_pairs == 70);
  CHECK(m.c_count == 280);
  CHECK(m.messages == 140);
  CHECK(m.e_depth == 10);
  CHECK(m.total_cost_ns == 13480);
}

TEST_CASE("event traces are valid schedules") {
  for (const char* name : {"ising_model_16", "rd53_138", "4gt12-v1_89"}) {
    for (const ArchConfig& arch : {linear(8, 2, 2), cube(2, 3), torus3x3(2, 4)}) {
      for (bool serial : {false, true}) {
        for (IssuePolicy pol : {IssuePolicy::DependencyResolved, IssuePolicy::InOrder}) {
          CAPTURE(name);
          CAPTURE(arch.name);
          CAPTURE(serial);
          AnalyzerOptions o;
          o.serialize_units = serial;
          o.policy = pol;
          const EventTrace t = simulate_cost(compile(bench(name), arch), arch, {}, o);
          const auto bad = testing::check_trace(t, {}, serial);
          CHECK(bad.empty());
          if (!bad.empty()) MESSAGE(bad.front());
        }
      }
    }
  }
}

TEST_CASE("custom costs are honoured") {
  const ArchConfig arch = linear(8, 2, 2);
  CostModel costs;
  costs.defaults.ent_gen_ns = 500;
  costs.per_processor[3] = costs.defaults;
  costs.per_processor[3].measure_ns = 900;
  const EventTrace t = simulate_cost(compile(bench("rd53_138"), arch), arch, costs);
  CHECK(testing::check_trace(t, costs, false).empty());
}

TEST_CASE("serialized units never cost less") {
  const ArchConfig arch = linear(8, 2, 2);
  const System sys = compile(bench("4gt12-v1_89"), arch);
  AnalyzerOptions serial;
  serial.serialize_units = true;
  CHECK(metrics(simulate_cost(sys, arch, {}, serial)).total_cost_ns >=
        metrics(simulate_cost(sys, arch, {})).total_cost_ns);
}

TEST_CASE("timeline is consistent with the trace") {
  const ArchConfig arch = linear(8, 2, 2);
  const EventTrace t = simulate_cost(compile(bench("4gt12-v1_89"), arch), arch, {});
  const MetricsReport m = metrics(t);
  const auto rows = timeline(t);
  std::map<ParticipantId, std::size_t> last;
  std::int64_t prev = 0;
  for (const auto& r : rows) {
    CHECK(r.time_ns >= prev);
    prev = r.time_ns;
    if (r.time_ns == 0 && !last.count(r.processor)) {
      CHECK(r.remaining_ops == m.ops_per_processor.at(r.processor));
    } else {
      CHECK(r.remaining_ops <= last[r.processor]);
    }
    last[r.processor] = r.remaining_ops;
  }
  CHECK(prev == m.total_cost_ns);
  for (const auto& [p, n] : last) CHECK(n == 0);
  const std::string csv = timeline_csv(rows);
  CHECK(csv.rfind("time_ns,processor,remaining_ops\n", 0) == 0);
}

TEST_CASE("analysis is deterministic") {
  const ArchConfig arch = cube(2, 3);
  const System sys = compile(bench("rd53_138"), arch);
  CHECK(simulate_cost(sys, arch, {}).to_json() == simulate_cost(sys, arch, {}).to_json());
}

TEST_CASE("hand-written programs with branches and derived ops") {
  const ArchConfig arch = arch_from_json(nlohmann::json::parse(slurp("archs/linear_2_2x3.json")));
  for (const char* f : {"programs/example1.inq", "programs/entswap.inq", "programs/barrier.inq"}) {
    CAPTURE(f);
    const EventTrace t = simulate_cost(parse_program(slurp(f)), arch, {});
    CHECK(testing::check_trace(t, {}, false).empty());
    CHECK(metrics(t).c_count == 2 * metrics(t).messages);
  }
}

TEST_CASE("stuck programs are reported") {
  const ArchConfig arch = arch_from_json(nlohmann::json::parse(slurp("archs/exhaustion.json")));
  CHECK_THROWS_AS(simulate_cost(parse_program(slurp("programs/exhaustion.inq")), arch, {}),
                  StuckDuringSimulation);
}

TEST_CASE("sweep runs every cell and captures errors") {
  std::vector<NamedCircuit> circuits{{"ising", bench("ising_model_16")}, {"rd53", bench("rd53_138")}};
  std::vector<ArchConfig> archs{linear(8, 2, 2), linear(2, 2, 2)};
  const auto one = sweep(circuits, archs, {}, {}, 1);
  const auto many = sweep(circuits, archs, {}, {}, 4);
  REQUIRE(one.size() == 4);
  CHECK(one[0].circuit == "ising");
  CHECK(one[0].arch == "linear(8,2,2)");
  CHECK(one[0].report->e_count == 140);
  CHECK(one[1].error.has_value());  // 16 qubits do not fit on 2 x 2
  CHECK(sweep_json(one) == sweep_json(many));
  CHECK(sweep_json(one).at("cells").size() == 4);
  const std::string csv = sweep_csv(one);
  CHECK(csv.rfind("circuit,arch,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
