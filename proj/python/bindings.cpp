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

// Python bindings. Structured results cross the boundary as JSON text and are
// decoded by the inquir package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "inquir/analyzer.hpp"
#include "inquir/checker.hpp"
#include "inquir/errors.hpp"
#include "inquir/frontend.hpp"
#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"

namespace py = pybind11;
using namespace inquir;

namespace {

ArchConfig arch_of(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') return arch_from_json(nlohmann::json::parse(spec));
  if (auto a = parse_arch_preset(spec)) return *a;
  throw py::value_error("unknown architecture '" + spec + "'");
}

std::string run_json(const std::string& text, const std::string& arch, std::uint64_t seed,
                     const std::string& policy, const std::string& backend) {
  RunOptions o;
  auto pol = parse_policy(policy, seed);
  if (!pol) throw py::value_error("unknown policy '" + policy + "'");
  o.policy = *pol;
  o.oracle = OutcomeOracle::born_rule(seed);
  if (backend == "abstract") o.backend = BackendKind::Abstract;
  else if (backend != "sv") throw py::value_error("backend must be 'sv' or 'abstract'");
  const RunResult r = run(parse_program(text), arch_of(arch), o);
  nlohmann::json j;
  j["outcome"] = outcome_name(r.outcome);
  j["exit_code"] = r.exit_code();
  j["steps"] = r.trace.size();
  j["trace"] = nlohmann::json::array();
  for (const auto& e : r.trace) j["trace"].push_back(e.to_json());
  j["stuck"] = r.stuck ? r.stuck->to_json() : nlohmann::json();
  return j.dump();
}

std::string analyze_json(const std::string& source, const std::string& arch, bool is_qasm) {
  const ArchConfig a = arch_of(arch);
  const System sys = is_qasm ? compile(parse_qasm(source), a) : parse_program(source);
  return metrics(simulate_cost(sys, a, {})).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_inquir, m) {
  m.doc() = "InQuIR toolchain core";
  py::register_exception<inquir::Error>(m, "InquirError", PyExc_RuntimeError);
  m.def("format_program", [](const std::string& text) { return print_program(parse_program(text)); },
        py::arg("text"));
  m.def("program_json", [](const std::string& text) { return to_json(parse_program(text)).dump(); },
        py::arg("text"));
  m.def("compile_qasm", [](const std::string& qasm, const std::string& arch) {
    return print_program(compile(parse_qasm(qasm), arch_of(arch)));
  }, py::arg("qasm"), py::arg("arch"));
  m.def("run_json", &run_json, py::arg("text"), py::arg("arch"), py::arg("seed") = 0,
        py::arg("policy") = "roundrobin", py::arg("backend") = "sv");
  m.def("analyze_json", &analyze_json, py::arg("source"), py::arg("arch"), py::arg("is_qasm") = true);
  m.def("lint_json", [](const std::string& text) { return diagnostics_json(lint(parse_program(text))).dump(); },
        py::arg("text"));
}
