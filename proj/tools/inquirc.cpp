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

// inquirc: parse, check, compile, run, analyze and sweep InQuIR programs.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inquir/analyzer.hpp"
#include "inquir/arch.hpp"
#include "inquir/checker.hpp"
#include "inquir/errors.hpp"
#include "inquir/frontend.hpp"
#include "inquir/runtime.hpp"
#include "inquir/syntax.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kStuck = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::vector<std::string> archs;
  std::string cost;
  std::uint64_t seed = 0;
  std::string policy = "roundrobin";
  std::string backend = "sv";
  std::size_t fuel = 0;
  std::string out;
  std::string format = "text";
  std::string timeline;
  std::string trace;
  std::string issue = "depresolved";
  bool serialize_units = false;
  bool free_data = false;
  unsigned threads = 0;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

bool use_color() {
  const char* env = std::getenv("INQUIRC_COLOR");
  const std::string mode = env ? env : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return isatty(STDERR_FILENO) != 0;
}

// A path to an existing file is read as JSON; anything else must be a preset.
inquir::ArchConfig load_arch(const std::string& spec) {
  if (fs::is_regular_file(spec)) {
    auto arch = inquir::arch_from_json(json::parse(read_input(spec)));
    if (arch.name.empty()) arch.name = fs::path(spec).stem().string();
    arch.validate();
    return arch;
  }
  if (auto a = inquir::parse_arch_preset(spec)) return *a;
  throw UsageError("unknown architecture '" + spec + "' (not a file or preset)");
}

inquir::ArchConfig single_arch(const Options& o) {
  if (o.archs.empty()) throw UsageError("--arch is required");
  if (o.archs.size() > 1) throw UsageError("exactly one --arch expected");
  return load_arch(o.archs.front());
}

inquir::CostModel load_costs(const Options& o) {
  if (o.cost.empty()) return {};
  return inquir::cost_model_from_json(json::parse(read_input(o.cost)));
}

bool is_qasm(const std::string& path) { return fs::path(path).extension() == ".qasm"; }

std::string single_input(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("exactly one input expected");
  return o.inputs.front();
}

// .qasm inputs are compiled for the given arch; everything else is .inq text.
inquir::System load_program(const std::string& path, const inquir::ArchConfig* arch, bool free_data) {
  const std::string text = read_input(path);
  if (is_qasm(path)) {
    if (!arch) throw UsageError("compiling " + path + " needs --arch");
    inquir::LowerOptions lo;
    lo.free_data = free_data;
    return inquir::compile(inquir::parse_qasm(text), *arch, lo);
  }
  return inquir::parse_program(text);
}

inquir::AnalyzerOptions analyzer_options(const Options& o) {
  inquir::AnalyzerOptions a;
  a.seed = o.seed;
  a.serialize_units = o.serialize_units;
  a.policy = o.issue == "inorder" ? inquir::IssuePolicy::InOrder
                                  : inquir::IssuePolicy::DependencyResolved;
  return a;
}

int cmd_parse(const Options& o) {
  const auto sys = inquir::parse_program(read_input(single_input(o)));
  write_output(o, o.format == "json" ? inquir::to_json(sys).dump(2) + "\n" : inquir::print_program(sys));
  return kOk;
}

int cmd_check(const Options& o) {
  const std::string path = single_input(o);
  std::unique_ptr<inquir::ArchConfig> arch;
  if (!o.archs.empty()) arch = std::make_unique<inquir::ArchConfig>(single_arch(o));
  const auto sys = load_program(path, arch.get(), o.free_data);
  if (arch) inquir::validate_against(sys, *arch);
  const auto diags = inquir::lint(sys);
  if (o.format == "json")
    write_output(o, inquir::diagnostics_json(diags).dump(2) + "\n");
  else
    write_output(o, inquir::diagnostics_text(diags, o.out.empty() && use_color()));
  return inquir::has_errors(diags) ? kParse : kOk;
}

int cmd_compile(const Options& o) {
  const auto arch = single_arch(o);
  inquir::LowerOptions lo;
  lo.free_data = o.free_data;
  const auto sys = inquir::compile(inquir::parse_qasm(read_input(single_input(o))), arch, lo);
  write_output(o, o.format == "json" ? inquir::to_json(sys).dump(2) + "\n" : inquir::print_program(sys));
  return kOk;
}

int cmd_run(const Options& o) {
  const auto arch = single_arch(o);
  const auto sys = load_program(single_input(o), &arch, o.free_data);
  inquir::RunOptions ro;
  if (o.backend == "abstract") ro.backend = inquir::BackendKind::Abstract;
  auto policy = inquir::parse_policy(o.policy, o.seed);
  if (!policy) throw UsageError("unknown policy '" + o.policy + "'");
  ro.policy = *policy;
  ro.oracle = inquir::OutcomeOracle::born_rule(o.seed);
  if (o.fuel) ro.fuel = o.fuel;
  const auto result = inquir::run(sys, arch, ro);

  if (!o.trace.empty()) write_file(o.trace, inquir::trace_jsonl(result.trace));

  json j;
  j["outcome"] = inquir::outcome_name(result.outcome);
  j["steps"] = result.final_state.steps;
  j["trace"] = o.trace.empty() ? json(nullptr) : json(o.trace);
  j["warnings"] = result.final_state.warnings;
  if (result.stuck) j["stuck"] = result.stuck->to_json();

  if (o.format == "json") {
    write_output(o, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "outcome: " << inquir::outcome_name(result.outcome) << "\n";
    os << "steps: " << result.final_state.steps << "\n";
    if (!o.trace.empty()) os << "trace: " << o.trace << "\n";
    for (const auto& w : result.final_state.warnings) os << "warning: " << w << "\n";
    if (result.stuck) os << result.stuck->summary() << "\n";
    write_output(o, os.str());
  }
  return result.exit_code();
}

std::string metrics_text(const inquir::MetricsReport& m) {
  std::ostringstream os;
  os << "e_count: " << m.e_count << "\nepr_pairs: " << m.epr_pairs << "\nc_count: " << m.c_count
     << "\nmessages: " << m.messages << "\ne_depth: " << m.e_depth << "\nc_depth: " << m.c_depth
     << "\ntotal_cost_ns: " << m.total_cost_ns << "\n";
  for (const auto& [p, n] : m.ops_per_processor) os << "ops[" << p << "]: " << n << "\n";
  return os.str();
}

int cmd_analyze(const Options& o) {
  const auto arch = single_arch(o);
  const auto costs = load_costs(o);
  const auto sys = load_program(single_input(o), &arch, o.free_data);
  const auto trace = inquir::simulate_cost(sys, arch, costs, analyzer_options(o));
  const auto report = inquir::metrics(trace);
  if (!o.timeline.empty()) write_file(o.timeline, inquir::timeline_csv(inquir::timeline(trace)));

  if (o.format == "json") {
    write_output(o, report.to_json().dump(2) + "\n");
  } else if (o.format == "csv") {
    write_output(o, inquir::timeline_csv(inquir::timeline(trace)));
  } else {
    write_output(o, metrics_text(report));
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  if (o.inputs.empty()) throw UsageError("sweep needs at least one .qasm input");
  if (o.archs.empty()) throw UsageError("sweep needs at least one --arch");
  std::vector<inquir::NamedCircuit> circuits;
  for (const auto& p : o.inputs)
    circuits.push_back({fs::path(p).stem().string(), inquir::parse_qasm(read_input(p))});
  std::vector<inquir::ArchConfig> archs;
  for (const auto& a : o.archs) {
    archs.push_back(load_arch(a));
    if (archs.back().name.empty()) archs.back().name = a;
  }
  const auto cells = inquir::sweep(circuits, archs, load_costs(o), analyzer_options(o), o.threads);
  write_output(o, o.format == "csv" ? inquir::sweep_csv(cells) : inquir::sweep_json(cells).dump(2) + "\n");
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Write the main output to PATH");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
}

void add_arch(CLI::App* sub, Options& o, bool many = false) {
  auto* opt = sub->add_option("--arch", o.archs,
                              "Architecture: JSON file or preset such as linear:8x2,2, cube:2,3, torus:2,4");
  if (!many) opt->expected(1);
}

void add_analysis(CLI::App* sub, Options& o) {
  sub->add_option("--cost", o.cost, "Cost model JSON file");
  sub->add_option("--seed", o.seed, "Seed for measurement outcomes");
  sub->add_option("--issue", o.issue, "Instruction issue policy")
      ->check(CLI::IsMember({"depresolved", "inorder"}));
  sub->add_flag("--serialize-units", o.serialize_units,
                "Execute at most one instruction per processor at a time");
  sub->add_flag("--free-data", o.free_data, "Release data qubits at the end of compiled programs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"InQuIR toolchain"};
  app.require_subcommand(1, 1);
  Options o;

  auto* parse = app.add_subcommand("parse", "Validate and pretty-print a .inq program");
  parse->add_option("input", o.inputs, "Program path, or - for stdin")->required();
  add_common(parse, o);

  auto* check = app.add_subcommand("check", "Run the linearity and session lints");
  check->add_option("input", o.inputs, "Program (.inq or .qasm)")->required();
  add_arch(check, o);
  check->add_flag("--free-data", o.free_data, "Release data qubits at the end of compiled programs");
  add_common(check, o);

  auto* compile = app.add_subcommand("compile", "Compile OpenQASM 2.0 to InQuIR");
  compile->add_option("input", o.inputs, "Circuit path, or - for stdin")->required();
  add_arch(compile, o);
  compile->add_flag("--free-data", o.free_data, "Release data qubits at the end of compiled programs");
  add_common(compile, o);

  auto* run = app.add_subcommand("run", "Execute a program");
  run->add_option("input", o.inputs, "Program (.inq or .qasm)")->required();
  add_arch(run, o);
  run->add_option("--seed", o.seed, "Seed for the scheduler and measurement outcomes");
  run->add_option("--policy", o.policy, "Scheduler policy")
      ->check(CLI::IsMember({"roundrobin", "random", "inorder", "depresolved"}));
  run->add_option("--backend", o.backend, "Quantum backend")->check(CLI::IsMember({"sv", "abstract"}));
  run->add_option("--fuel", o.fuel, "Maximum number of steps");
  run->add_option("--trace", o.trace, "Write the JSON-lines trace to PATH");
  run->add_flag("--free-data", o.free_data, "Release data qubits at the end of compiled programs");
  add_common(run, o);

  auto* analyze = app.add_subcommand("analyze", "Cost analysis of a circuit or program");
  analyze->add_option("input", o.inputs, "Program (.inq or .qasm)")->required();
  add_arch(analyze, o);
  add_analysis(analyze, o);
  analyze->add_option("--timeline", o.timeline, "Write the remaining-ops timeline CSV to PATH");
  add_common(analyze, o);

  auto* sweep = app.add_subcommand("sweep", "Analyze every circuit on every architecture");
  sweep->add_option("inputs", o.inputs, "Circuit paths")->required();
  add_arch(sweep, o, true);
  add_analysis(sweep, o);
  sweep->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)");
  add_common(sweep, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kUsage;
  }

  // Analyses default to JSON; parse/compile/check/run default to text.
  const bool format_given = app.get_subcommands().front()->count("--format") > 0;
  if (!format_given && (analyze->parsed() || sweep->parsed())) o.format = "json";

  try {
    if (parse->parsed()) return cmd_parse(o);
    if (check->parsed()) return cmd_check(o);
    if (compile->parsed()) return cmd_compile(o);
    if (run->parsed()) return cmd_run(o);
    if (analyze->parsed()) return cmd_analyze(o);
    if (sweep->parsed()) return cmd_sweep(o);
  } catch (const inquir::SyntaxError& e) {
    std::cerr << "inquirc: " << e.what() << "\n";
    return kParse;
  } catch (const inquir::DuplicateProcessHeader& e) {
    std::cerr << "inquirc: " << e.what() << "\n";
    return kParse;
  } catch (const inquir::UnsupportedGate& e) {
    std::cerr << "inquirc: " << e.what() << "\n";
    return kParse;
  } catch (const inquir::StuckDuringSimulation& e) {
    std::cerr << "inquirc: " << e.what() << "\n";
    return kStuck;
  } catch (const json::exception& e) {
    std::cerr << "inquirc: invalid JSON: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "inquirc: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
