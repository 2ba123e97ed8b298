// Copyright 2026 The niqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NIQZK_CIRCUITS_HPP
#define NIQZK_CIRCUITS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "niqzk/states.hpp"
#include "niqzk/types.hpp"

namespace niqzk {

// Gate set: {H, X, S, T, CNOT} with dagger-flagged S/T so the set is closed
// under adjoints, plus STATEPREP, a preparation-by-amplitudes instruction
// restricted to circuit prefixes on disjoint qubit sets.
enum class Gate { H, X, S, Sdg, T, Tdg, CNOT, StatePrep };

std::string_view gate_name(Gate g);

// 1 or 2 for elementary gates; StatePrep arity is its target count.
int gate_arity(Gate g);

// Row-major 2x2 (4x4 for CNOT, basis |control target>) with exact entries.
const cplx* gate_matrix(Gate g);

struct GateApplication {
  Gate gate;
  std::vector<int> targets;
  std::vector<cplx> amplitudes;  // StatePrep only; length 2^#targets
};

// q_in-in q_out-out gate list; the output qubits are indices 0..q_out-1.
class CircuitDescription {
 public:
  CircuitDescription(int num_qubits, int num_output_qubits,
                     std::vector<GateApplication> gates);

  static CircuitDescription identity(int num_qubits, int num_output_qubits);

  int num_qubits() const { return num_qubits_; }
  int num_output_qubits() const { return num_output_qubits_; }
  const std::vector<GateApplication>& gates() const { return gates_; }
  bool has_stateprep() const;

 private:
  int num_qubits_;
  int num_output_qubits_;
  std::vector<GateApplication> gates_;
};

// Text format (see docs/formats.md): "qubits N", "out M", one instruction
// per line, '#' comments. Keyword case is significant.
CircuitDescription parse_circuit(std::string_view text,
                                 std::string_view source_name = "<string>");
CircuitDescription load_circuit(const std::string& path);
std::string serialize_circuit(const CircuitDescription& c);
void save_circuit(const CircuitDescription& c, const std::string& path);

// U_c |0^{q_in}>, gates applied in list order.
PureState evaluate_pure(const CircuitDescription& c);

// Reduced state of evaluate_pure(c) on the first q_out qubits.
DensityOperator output_state(const CircuitDescription& c);

// Reversed gate list with each gate inverted. Rejects STATEPREP, which has
// no gate-level adjoint here.
CircuitDescription adjoint_circuit(const CircuitDescription& c);

// Same gates with qubit i renamed to qubit_map[i].
CircuitDescription remap_circuit(const CircuitDescription& c,
                                 const std::vector<int>& qubit_map,
                                 int new_num_qubits, int new_num_outputs);

void apply_gate(Vec& amps, int num_qubits, const GateApplication& g);

// rho -> U rho U^dag for an elementary (non-StatePrep) gate.
void apply_gate_density(Mat& rho, int num_qubits, const GateApplication& g);
void apply_circuit_density(Mat& rho, int num_qubits,
                           const CircuitDescription& c);

}  // namespace niqzk

#endif
