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

#include "inquir/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "inquir/errors.hpp"

namespace inquir {

namespace {

constexpr double kProbEps = 1e-12;

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

Matrix2 u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {Amplitude(c), -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s,
          std::polar(1.0, phi + lambda) * c};
}

}  // namespace

Matrix2 gate_matrix(const Gate& g) {
  using std::numbers::pi;
  const Amplitude i(0, 1);
  const double r = 1 / std::sqrt(2.0);
  auto p = [&](std::size_t k) { return g.params.at(k); };
  switch (g.kind) {
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::Y: return {0, -i, i, 0};
    case GateKind::Z: return {1, 0, 0, -1};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::S: return {1, 0, 0, i};
    case GateKind::Sdg: return {1, 0, 0, -i};
    case GateKind::T: return {1, 0, 0, std::polar(1.0, pi / 4)};
    case GateKind::Tdg: return {1, 0, 0, std::polar(1.0, -pi / 4)};
    case GateKind::RZ: return {std::polar(1.0, -p(0) / 2), 0, 0, std::polar(1.0, p(0) / 2)};
    case GateKind::RX: {
      const double c = std::cos(p(0) / 2), s = std::sin(p(0) / 2);
      return {c, -i * s, -i * s, c};
    }
    case GateKind::RY: {
      const double c = std::cos(p(0) / 2), s = std::sin(p(0) / 2);
      return {c, -s, s, c};
    }
    case GateKind::U1: return {1, 0, 0, std::polar(1.0, p(0))};
    case GateKind::U2: return u3(pi / 2, p(0), p(1));
    case GateKind::U3: return u3(p(0), p(1), p(2));
    case GateKind::CX: break;
  }
  throw ArityMismatch("CX has no single-qubit matrix");
}

// ---------------------------------------------------------------------------

OutcomeOracle OutcomeOracle::born_rule(std::uint64_t seed) {
  OutcomeOracle o;
  o.rng_.seed(seed);
  return o;
}

OutcomeOracle OutcomeOracle::scripted(std::vector<int> bits) {
  OutcomeOracle o;
  o.scripted_ = true;
  o.script_ = std::move(bits);
  return o;
}

OutcomeOracle OutcomeOracle::fixed(int bit) {
  OutcomeOracle o;
  o.fixed_ = bit ? 1 : 0;
  return o;
}

int OutcomeOracle::draw(double p_one) {
  ++draws_;
  if (fixed_ >= 0) return fixed_;
  if (scripted_) {
    if (cursor_ >= script_.size())
      throw OracleExhausted("outcome script exhausted after " + std::to_string(cursor_) +
                            " draws");
    return script_[cursor_++] ? 1 : 0;
  }
  return unit_draw(rng_) < p_one ? 1 : 0;
}

// ---------------------------------------------------------------------------

bool StatevectorState::contains(QubitRef q) const {
  return std::find(order_.begin(), order_.end(), q) != order_.end();
}

std::size_t StatevectorState::position(QubitRef q) const {
  auto it = std::find(order_.begin(), order_.end(), q);
  if (it == order_.end()) throw UnknownQubit("qubit " + to_string(q) + " is not allocated");
  return static_cast<std::size_t>(it - order_.begin());
}

void StatevectorState::append_factor(const std::vector<Amplitude>& factor, std::size_t nq) {
  if (order_.size() + nq > kMaxStatevectorQubits)
    throw CapacityExceeded("statevector backend is limited to " +
                           std::to_string(kMaxStatevectorQubits) + " qubits");
  std::vector<Amplitude> out(amp_.size() * factor.size());
  for (std::size_t hi = 0; hi < factor.size(); ++hi)
    for (std::size_t lo = 0; lo < amp_.size(); ++lo) out[hi * amp_.size() + lo] = factor[hi] * amp_[lo];
  amp_ = std::move(out);
}

void StatevectorState::alloc(QubitRef q) {
  if (contains(q)) throw AlreadyAllocated("qubit " + to_string(q) + " is already allocated");
  append_factor({1.0, 0.0}, 1);
  order_.push_back(q);
}

void StatevectorState::make_epr(QubitRef a, QubitRef b) {
  if (contains(a) || contains(b) || a == b)
    throw AlreadyAllocated("EPR halves must be fresh distinct qubits");
  const double r = 1 / std::sqrt(2.0);
  append_factor({r, 0.0, 0.0, r}, 2);
  order_.push_back(a);
  order_.push_back(b);
}

void StatevectorState::apply_gate(const Gate& g, const std::vector<QubitRef>& operands) {
  if (operands.size() != gate_arity(g.kind))
    throw ArityMismatch(std::string(gate_name(g.kind)) + " expects " +
                        std::to_string(gate_arity(g.kind)) + " operand(s), got " +
                        std::to_string(operands.size()));
  if (g.kind == GateKind::CX) {
    if (operands[0] == operands[1]) throw ArityMismatch("CX operands must be distinct");
    const std::size_t c = std::size_t{1} << position(operands[0]);
    const std::size_t t = std::size_t{1} << position(operands[1]);
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & c) && !(i & t)) std::swap(amp_[i], amp_[i | t]);
    return;
  }
  const Matrix2 m = gate_matrix(g);
  const std::size_t bit = std::size_t{1} << position(operands[0]);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = amp_[i], a1 = amp_[i | bit];
    amp_[i] = m[0] * a0 + m[1] * a1;
    amp_[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

int StatevectorState::measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle) {
  if (qubits.empty()) throw ArityMismatch("measurement needs at least one qubit");
  std::size_t mask = 0;
  for (auto q : qubits) mask ^= std::size_t{1} << position(q);
  double p1 = 0;
  for (std::size_t i = 0; i < amp_.size(); ++i)
    if (std::popcount(i & mask) & 1) p1 += std::norm(amp_[i]);
  p1 = std::clamp(p1, 0.0, 1.0);
  const int v = oracle.draw(p1);
  const double pv = v ? p1 : 1 - p1;
  if (pv < kProbEps)
    throw ImpossibleOutcome("forced measurement outcome " + std::to_string(v) +
                            " has probability " + std::to_string(pv));
  const double scale = 1 / std::sqrt(pv);
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    if (static_cast<int>(std::popcount(i & mask) & 1) == v)
      amp_[i] *= scale;
    else
      amp_[i] = 0;
  }
  return v;
}

bool StatevectorState::trace_out(QubitRef q) {
  const std::size_t k = position(q);
  const std::size_t bit = std::size_t{1} << k;
  const std::size_t half = amp_.size() / 2;
  std::vector<Amplitude> phi0(half), phi1(half);
  for (std::size_t i = 0, j = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    phi0[j] = amp_[i];
    phi1[j] = amp_[i | bit];
    ++j;
  }
  double n0 = 0, n1 = 0;
  Amplitude ip = 0;
  for (std::size_t j = 0; j < half; ++j) {
    n0 += std::norm(phi0[j]);
    n1 += std::norm(phi1[j]);
    ip += std::conj(phi0[j]) * phi1[j];
  }
  const bool entangled = std::abs(n0 * n1 - std::norm(ip)) > 1e-10;
  bool keep_one = n1 > n0;
  if (entangled) keep_one = unit_draw(collapse_rng_) < n1;
  std::vector<Amplitude>& keep = keep_one ? phi1 : phi0;
  const double scale = 1 / std::sqrt(keep_one ? n1 : n0);
  for (auto& a : keep) a *= scale;
  amp_ = std::move(keep);
  order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(k));
  return entangled;
}

bool StatevectorState::trace_out_group(const std::vector<QubitRef>& group) {
  std::vector<QubitRef> rest;
  for (auto q : order_)
    if (std::find(group.begin(), group.end(), q) == group.end()) rest.push_back(q);
  for (auto q : group) position(q);
  std::vector<Amplitude> v;
  try {
    v = subsystem(group);
  } catch (const DimensionMismatch&) {
    bool any = false;
    for (auto q : group) any = trace_out(q) || any;
    return any;
  }
  std::vector<QubitRef> full = group;
  full.insert(full.end(), rest.begin(), rest.end());
  const auto a = amplitudes(full);
  const std::size_t rows = v.size(), cols = a.size() / rows;
  std::vector<Amplitude> out(cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) out[c] += std::conj(v[r]) * a[r * cols + c];
  double n = 0;
  for (const auto& x : out) n += std::norm(x);
  for (auto& x : out) x /= std::sqrt(n);
  amp_ = std::move(out);
  order_.assign(rest.rbegin(), rest.rend());
  return false;
}

double StatevectorState::norm() const {
  double n = 0;
  for (const auto& a : amp_) n += std::norm(a);
  return std::sqrt(n);
}

std::vector<Amplitude> StatevectorState::amplitudes(const std::vector<QubitRef>& order) const {
  if (order.size() != order_.size())
    throw DimensionMismatch("amplitude order lists " + std::to_string(order.size()) +
                            " qubits, state has " + std::to_string(order_.size()));
  std::vector<std::size_t> pos;
  for (auto q : order) pos.push_back(position(q));
  const std::size_t n = order.size();
  std::vector<Amplitude> out(amp_.size());
  for (std::size_t i = 0; i < amp_.size(); ++i) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (i & (std::size_t{1} << pos[k])) o |= std::size_t{1} << (n - 1 - k);
    out[o] = amp_[i];
  }
  return out;
}

std::vector<Amplitude> StatevectorState::subsystem(const std::vector<QubitRef>& order) const {
  std::vector<QubitRef> full = order;
  for (auto q : order_)
    if (std::find(order.begin(), order.end(), q) == order.end()) full.push_back(q);
  const std::vector<Amplitude> a = amplitudes(full);
  const std::size_t rows = std::size_t{1} << order.size();
  const std::size_t cols = a.size() / rows;
  // a[r * cols + c]: r indexes the subsystem.
  std::size_t best = 0;
  double best_norm = -1;
  for (std::size_t c = 0; c < cols; ++c) {
    double n = 0;
    for (std::size_t r = 0; r < rows; ++r) n += std::norm(a[r * cols + c]);
    if (n > best_norm) {
      best_norm = n;
      best = c;
    }
  }
  std::vector<Amplitude> v(rows);
  for (std::size_t r = 0; r < rows; ++r) v[r] = a[r * cols + best] / std::sqrt(best_norm);
  for (std::size_t c = 0; c < cols; ++c) {
    Amplitude proj = 0;
    for (std::size_t r = 0; r < rows; ++r) proj += std::conj(v[r]) * a[r * cols + c];
    double resid = 0;
    for (std::size_t r = 0; r < rows; ++r) resid += std::norm(a[r * cols + c] - proj * v[r]);
    if (resid > 1e-10) throw DimensionMismatch("requested subsystem is entangled with the rest");
  }
  return v;
}

double StatevectorState::fidelity(const std::vector<QubitRef>& order,
                                  const std::vector<Amplitude>& ref) const {
  const auto a = order.size() == order_.size() ? amplitudes(order) : subsystem(order);
  return inquir::fidelity(a, ref);
}

double fidelity(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("state dimensions differ: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  Amplitude ip = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(b[i]) * a[i];
  return std::norm(ip);
}

nlohmann::json amplitudes_to_json(const std::vector<Amplitude>& amps) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : amps) out.push_back({a.real(), a.imag()});
  return out;
}

// ---------------------------------------------------------------------------

void AbstractState::alloc(QubitRef q) {
  if (!live_.insert(q).second)
    throw AlreadyAllocated("qubit " + to_string(q) + " is already allocated");
}

void AbstractState::make_epr(QubitRef a, QubitRef b) {
  if (a == b || live_.count(a) || live_.count(b))
    throw AlreadyAllocated("EPR halves must be fresh distinct qubits");
  live_.insert(a);
  live_.insert(b);
}

void AbstractState::apply_gate(const Gate& g, const std::vector<QubitRef>& operands) {
  if (operands.size() != gate_arity(g.kind))
    throw ArityMismatch(std::string(gate_name(g.kind)) + " arity mismatch");
  for (auto q : operands)
    if (!live_.count(q)) throw UnknownQubit("qubit " + to_string(q) + " is not allocated");
}

int AbstractState::measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle) {
  if (qubits.empty()) throw ArityMismatch("measurement needs at least one qubit");
  for (auto q : qubits)
    if (!live_.count(q)) throw UnknownQubit("qubit " + to_string(q) + " is not allocated");
  return oracle.draw(0.5);
}

bool AbstractState::trace_out(QubitRef q) {
  if (!live_.erase(q)) throw UnknownQubit("qubit " + to_string(q) + " is not allocated");
  return false;
}

bool AbstractState::trace_out_group(const std::vector<QubitRef>& group) {
  for (auto q : group) trace_out(q);
  return false;
}

// ---------------------------------------------------------------------------

QuantumState::QuantumState(BackendKind kind) : kind_(kind) {
  if (kind == BackendKind::Abstract) impl_ = AbstractState{};
}

std::size_t QuantumState::qubit_count() const {
  return std::visit([](const auto& s) { return s.qubit_count(); }, impl_);
}
bool QuantumState::contains(QubitRef q) const {
  return std::visit([&](const auto& s) { return s.contains(q); }, impl_);
}
void QuantumState::alloc(QubitRef q) {
  std::visit([&](auto& s) { s.alloc(q); }, impl_);
}
void QuantumState::make_epr(QubitRef a, QubitRef b) {
  std::visit([&](auto& s) { s.make_epr(a, b); }, impl_);
}
void QuantumState::apply_gate(const Gate& g, const std::vector<QubitRef>& operands) {
  std::visit([&](auto& s) { s.apply_gate(g, operands); }, impl_);
}
int QuantumState::measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle) {
  return std::visit([&](auto& s) { return s.measure_parity(qubits, oracle); }, impl_);
}
bool QuantumState::trace_out(QubitRef q) {
  return std::visit([&](auto& s) { return s.trace_out(q); }, impl_);
}
bool QuantumState::trace_out_group(const std::vector<QubitRef>& group) {
  return std::visit([&](auto& s) { return s.trace_out_group(group); }, impl_);
}

}  // namespace inquir
