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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "inquir/ast.hpp"

namespace inquir {

using Amplitude = std::complex<double>;
using Matrix2 = std::array<Amplitude, 4>;  // row-major

Matrix2 gate_matrix(const Gate& g);  // single-qubit gates only

// Decides measurement outcomes. BornRule samples with the given probability;
// Scripted replays a fixed bit list and ignores probabilities.
class OutcomeOracle {
 public:
  static OutcomeOracle born_rule(std::uint64_t seed);
  static OutcomeOracle scripted(std::vector<int> bits);
  static OutcomeOracle fixed(int bit);

  bool is_scripted() const { return scripted_; }
  int draw(double p_one);
  std::size_t draws() const { return draws_; }
  std::size_t remaining() const { return scripted_ ? script_.size() - cursor_ : SIZE_MAX; }

 private:
  bool scripted_ = false;
  int fixed_ = -1;
  std::mt19937_64 rng_;
  std::vector<int> script_;
  std::size_t cursor_ = 0;
  std::size_t draws_ = 0;
};

inline constexpr std::size_t kMaxStatevectorQubits = 20;

class StatevectorState {
 public:
  std::size_t qubit_count() const { return order_.size(); }
  bool contains(QubitRef q) const;
  const std::vector<QubitRef>& qubits() const { return order_; }

  void alloc(QubitRef q);
  void make_epr(QubitRef a, QubitRef b);
  void apply_gate(const Gate& g, const std::vector<QubitRef>& operands);
  int measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle);
  // Returns true when q was entangled with the rest and had to be collapsed.
  bool trace_out(QubitRef q);
  // Removes a group of qubits; exact when the group is a product factor of the
  // state, otherwise collapses each member. Returns true in the latter case.
  bool trace_out_group(const std::vector<QubitRef>& group);

  double norm() const;
  // Amplitudes over the given qubits (first listed = most significant bit).
  // The listed set must equal the registered set.
  std::vector<Amplitude> amplitudes(const std::vector<QubitRef>& order) const;
  // Reduced pure state of a subset; throws DimensionMismatch if the subset is
  // entangled with the rest.
  std::vector<Amplitude> subsystem(const std::vector<QubitRef>& order) const;
  double fidelity(const std::vector<QubitRef>& order, const std::vector<Amplitude>& ref) const;

 private:
  std::size_t position(QubitRef q) const;
  void append_factor(const std::vector<Amplitude>& factor, std::size_t nq);

  std::vector<QubitRef> order_;          // position i = bit i of the index
  std::vector<Amplitude> amp_{1.0};
  std::mt19937_64 collapse_rng_{0x5eed};
};

class AbstractState {
 public:
  std::size_t qubit_count() const { return live_.size(); }
  bool contains(QubitRef q) const { return live_.count(q) > 0; }

  void alloc(QubitRef q);
  void make_epr(QubitRef a, QubitRef b);
  void apply_gate(const Gate& g, const std::vector<QubitRef>& operands);
  int measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle);
  bool trace_out(QubitRef q);
  bool trace_out_group(const std::vector<QubitRef>& group);

 private:
  std::set<QubitRef> live_;
};

enum class BackendKind { Statevector, Abstract };

class QuantumState {
 public:
  explicit QuantumState(BackendKind kind = BackendKind::Statevector);

  BackendKind kind() const { return kind_; }
  std::size_t qubit_count() const;
  bool contains(QubitRef q) const;

  void alloc(QubitRef q);
  void make_epr(QubitRef a, QubitRef b);
  void apply_gate(const Gate& g, const std::vector<QubitRef>& operands);
  int measure_parity(const std::vector<QubitRef>& qubits, OutcomeOracle& oracle);
  bool trace_out(QubitRef q);
  bool trace_out_group(const std::vector<QubitRef>& group);

  const StatevectorState* statevector() const { return std::get_if<StatevectorState>(&impl_); }

 private:
  BackendKind kind_;
  std::variant<StatevectorState, AbstractState> impl_;
};

double fidelity(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b);
nlohmann::json amplitudes_to_json(const std::vector<Amplitude>& amps);

}  // namespace inquir
