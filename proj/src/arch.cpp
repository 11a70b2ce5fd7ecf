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

#include "inquir/arch.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <regex>
#include <set>

#include "inquir/errors.hpp"

namespace inquir {

bool ArchConfig::has_processor(ParticipantId p) const {
  return std::any_of(processors.begin(), processors.end(), [&](const auto& x) { return x.id == p; });
}

const ProcessorSpec& ArchConfig::processor(ParticipantId p) const {
  for (const auto& x : processors)
    if (x.id == p) return x;
  throw ConfigMismatch("unknown processor " + std::to_string(p));
}

const LinkSpec* ArchConfig::link(ParticipantId p, ParticipantId q) const {
  for (const auto& l : links)
    if ((l.a == p && l.b == q) || (l.a == q && l.b == p)) return &l;
  return nullptr;
}

std::vector<ParticipantId> ArchConfig::neighbors(ParticipantId p) const {
  std::vector<ParticipantId> out;
  for (const auto& l : links) {
    if (l.a == p) out.push_back(l.b);
    if (l.b == p) out.push_back(l.a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ParticipantId> ArchConfig::shortest_path(ParticipantId from, ParticipantId to) const {
  if (!has_processor(from) || !has_processor(to)) return {};
  if (from == to) return {from};
  std::map<ParticipantId, ParticipantId> parent;
  std::deque<ParticipantId> queue{from};
  parent[from] = from;
  while (!queue.empty()) {
    ParticipantId u = queue.front();
    queue.pop_front();
    for (ParticipantId v : neighbors(u)) {
      if (parent.count(v)) continue;
      parent[v] = u;
      if (v == to) {
        std::vector<ParticipantId> path{to};
        while (path.back() != from) path.push_back(parent[path.back()]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(v);
    }
  }
  return {};
}

std::uint32_t ArchConfig::total_data_qubits() const {
  std::uint32_t n = 0;
  for (const auto& p : processors) n += p.data_qubits;
  return n;
}

void ArchConfig::validate() const {
  std::set<ParticipantId> ids;
  for (const auto& p : processors)
    if (!ids.insert(p.id).second)
      throw ConfigMismatch("duplicate processor id " + std::to_string(p.id));
  std::set<std::pair<ParticipantId, ParticipantId>> seen;
  for (const auto& l : links) {
    if (!ids.count(l.a) || !ids.count(l.b))
      throw ConfigMismatch("link " + std::to_string(l.a) + "-" + std::to_string(l.b) +
                           " references an unknown processor");
    if (l.a == l.b) throw ConfigMismatch("self link on processor " + std::to_string(l.a));
    if (!seen.insert(std::minmax(l.a, l.b)).second)
      throw ConfigMismatch("duplicate link " + std::to_string(l.a) + "-" + std::to_string(l.b));
  }
}

namespace {

ArchConfig from_edges(std::string name, std::uint32_t m, std::uint32_t q, std::uint32_t e,
                      const std::vector<std::pair<ParticipantId, ParticipantId>>& edges) {
  ArchConfig arch;
  arch.name = std::move(name);
  for (ParticipantId p = 0; p < m; ++p) arch.processors.push_back({p, q});
  for (auto [a, b] : edges) arch.links.push_back({std::min(a, b), std::max(a, b), 0, 0});
  std::sort(arch.links.begin(), arch.links.end(),
            [](const auto& x, const auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (ParticipantId p = 0; p < m; ++p) {
    const auto nb = arch.neighbors(p);
    if (nb.empty()) continue;
    const auto d = static_cast<std::uint32_t>(nb.size());
    for (std::uint32_t i = 0; i < d; ++i) {
      const std::uint32_t share = e / d + (i < e % d ? 1 : 0);
      for (auto& l : arch.links) {
        if (l.a == p && l.b == nb[i]) l.comm_a = share;
        if (l.b == p && l.a == nb[i]) l.comm_b = share;
      }
    }
  }
  return arch;
}

std::string preset_name(const char* kind, std::initializer_list<std::uint32_t> xs) {
  std::string s = kind;
  s += '(';
  bool first = true;
  for (auto x : xs) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(x);
  }
  return s + ')';
}

}  // namespace

ArchConfig linear(std::uint32_t m, std::uint32_t q, std::uint32_t e) {
  std::vector<std::pair<ParticipantId, ParticipantId>> edges;
  for (ParticipantId p = 0; p + 1 < m; ++p) edges.emplace_back(p, p + 1);
  return from_edges(preset_name("linear", {m, q, e}), m, q, e, edges);
}

ArchConfig cube(std::uint32_t q, std::uint32_t e) {
  std::vector<std::pair<ParticipantId, ParticipantId>> edges;
  auto gray = [](std::uint32_t i) { return i ^ (i >> 1); };
  for (ParticipantId i = 0; i < 8; ++i)
    for (ParticipantId j = i + 1; j < 8; ++j)
      if (std::popcount(gray(i) ^ gray(j)) == 1) edges.emplace_back(i, j);
  return from_edges(preset_name("cube", {q, e}), 8, q, e, edges);
}

ArchConfig torus3x3(std::uint32_t q, std::uint32_t e) {
  std::set<std::pair<ParticipantId, ParticipantId>> edges;
  for (ParticipantId r = 0; r < 3; ++r) {
    for (ParticipantId c = 0; c < 3; ++c) {
      const ParticipantId u = r * 3 + c;
      edges.insert(std::minmax(u, r * 3 + (c + 1) % 3));
      edges.insert(std::minmax(u, ((r + 1) % 3) * 3 + c));
    }
  }
  return from_edges(preset_name("torus3x3", {q, e}), 9, q, e, {edges.begin(), edges.end()});
}

std::optional<ArchConfig> parse_arch_preset(std::string_view spec) {
  static const std::regex lin_colon(R"(linear:(\d+)x(\d+),(\d+))");
  static const std::regex lin_call(R"(linear\((\d+),(\d+),(\d+)\))");
  static const std::regex cube_re(R"(cube(?::(\d+),(\d+)|\((\d+),(\d+)\)))");
  static const std::regex torus_re(R"(torus(?:3x3)?(?::(\d+),(\d+)|\((\d+),(\d+)\)))");
  std::string s;
  for (char c : spec)
    if (c != ' ') s += c;
  std::smatch m;
  auto num = [&](std::size_t i) { return static_cast<std::uint32_t>(std::stoul(m[i].str())); };
  auto pick = [&](std::size_t i, std::size_t j) { return m[i].matched ? num(i) : num(j); };
  if (std::regex_match(s, m, lin_colon) || std::regex_match(s, m, lin_call))
    return linear(num(1), num(2), num(3));
  if (std::regex_match(s, m, cube_re)) return cube(pick(1, 3), pick(2, 4));
  if (std::regex_match(s, m, torus_re)) return torus3x3(pick(1, 3), pick(2, 4));
  return std::nullopt;
}

ArchConfig arch_from_json(const nlohmann::json& j) {
  ArchConfig arch;
  arch.name = j.value("name", std::string{});
  for (const auto& p : j.at("processors"))
    arch.processors.push_back({p.at("id").get<ParticipantId>(), p.at("data_qubits").get<std::uint32_t>()});
  for (const auto& l : j.value("links", nlohmann::json::array())) {
    LinkSpec s;
    s.a = l.at("a").get<ParticipantId>();
    s.b = l.at("b").get<ParticipantId>();
    const auto both = l.value("comm_qubits", 0u);
    s.comm_a = l.value("comm_a", both);
    s.comm_b = l.value("comm_b", both);
    arch.links.push_back(s);
  }
  arch.validate();
  return arch;
}

nlohmann::json to_json(const ArchConfig& arch) {
  nlohmann::json procs = nlohmann::json::array(), links = nlohmann::json::array();
  for (const auto& p : arch.processors) procs.push_back({{"id", p.id}, {"data_qubits", p.data_qubits}});
  for (const auto& l : arch.links) {
    nlohmann::json o = {{"a", l.a}, {"b", l.b}};
    if (l.comm_a == l.comm_b) {
      o["comm_qubits"] = l.comm_a;
    } else {
      o["comm_a"] = l.comm_a;
      o["comm_b"] = l.comm_b;
    }
    links.push_back(std::move(o));
  }
  nlohmann::json out = {{"processors", procs}, {"links", links}};
  if (!arch.name.empty()) out["name"] = arch.name;
  return out;
}

const OpCosts& CostModel::at(ParticipantId p) const {
  auto it = per_processor.find(p);
  return it == per_processor.end() ? defaults : it->second;
}

void CostModel::validate() const {
  auto check = [](const OpCosts& c, const std::string& where) {
    if (c.single_qubit_ns <= 0 || c.two_qubit_ns <= 0 || c.measure_ns <= 0 ||
        c.classical_send_ns <= 0 || c.ent_gen_ns <= 0)
      throw ConfigMismatch("costs must be positive (" + where + ")");
  };
  check(defaults, "default");
  for (const auto& [p, c] : per_processor) check(c, "processor " + std::to_string(p));
}

namespace {

OpCosts costs_from_json(const nlohmann::json& j, const OpCosts& base) {
  OpCosts c = base;
  c.single_qubit_ns = j.value("single_qubit_ns", c.single_qubit_ns);
  c.two_qubit_ns = j.value("two_qubit_ns", c.two_qubit_ns);
  c.measure_ns = j.value("measure_ns", c.measure_ns);
  c.classical_send_ns = j.value("classical_send_ns", c.classical_send_ns);
  c.ent_gen_ns = j.value("ent_gen_ns", c.ent_gen_ns);
  return c;
}

nlohmann::json costs_to_json(const OpCosts& c) {
  return {{"single_qubit_ns", c.single_qubit_ns},
          {"two_qubit_ns", c.two_qubit_ns},
          {"measure_ns", c.measure_ns},
          {"classical_send_ns", c.classical_send_ns},
          {"ent_gen_ns", c.ent_gen_ns}};
}

}  // namespace

CostModel cost_model_from_json(const nlohmann::json& j) {
  CostModel m;
  if (j.contains("default")) m.defaults = costs_from_json(j.at("default"), OpCosts{});
  if (j.contains("per_processor"))
    for (const auto& [k, v] : j.at("per_processor").items())
      m.per_processor[static_cast<ParticipantId>(std::stoul(k))] = costs_from_json(v, m.defaults);
  m.validate();
  return m;
}

nlohmann::json to_json(const CostModel& c) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [p, v] : c.per_processor) per[std::to_string(p)] = costs_to_json(v);
  return {{"default", costs_to_json(c.defaults)}, {"per_processor", per}};
}

}  // namespace inquir
