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

#ifndef NIQZK_REDUCTIONS_HPP
#define NIQZK_REDUCTIONS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "niqzk/problems.hpp"
#include "niqzk/protocol.hpp"

namespace niqzk {

// r parallel copies of the instance. Circuit-backed instances get a real
// r-copy circuit with the copies' output qubits gathered in front;
// channel-backed instances carry the exact tensor-power output state.
QsciInstance amplify(const QsciInstance& inst, int r);

// Smallest repetition count making (1 - beta^2)^r <= target; fidelity
// multiplicativity turns this into a soundness guarantee for the protocol
// built on the amplified circuit.
int repetitions_for_soundness(double beta, double target);

struct QsciProtocolReduction {
  ProtocolSpec spec;
  CircuitDescription amplified_circuit = CircuitDescription::identity(0, 0);
  int repetitions = 1;
  double soundness_guarantee = 1.0;
};

// Closeness-to-identity instance -> shared-EPR protocol with perfect
// completeness on yes-instances and cheat bound <= target_soundness on
// no-instances.
QsciProtocolReduction qsci_to_protocol(const QsciInstance& inst,
                                       double target_soundness);

// Protocol + simulator state -> closeness-to-identity instance over a
// channel on the (M, S, V) registers: bail out to |0...0> when the
// simulator's V part is dirty, then either hand over S or run the verifier
// and pay out I/2^q_s only on accept.
QsciInstance protocol_to_qsci(const ProtocolSpec& spec,
                              const DensityOperator& sim);

struct GnaOrbitSummary {
  int num_vertices = 0;
  int q_l = 0;                            // ceil(log2 n!)
  std::uint64_t num_blocks = 0;           // distinct tag values
  std::vector<std::uint64_t> block_sizes; // multiplicities, descending
  double distance = 0;                    // 1 - num_blocks / 2^q_l
};

// Graph-Non-Automorphism -> (0, 1/4) closeness-to-identity. The instance
// circuit prepares sum_i |i>|tag_i> and outputs the permutation register;
// above 4 vertices the register no longer fits dense simulation and the
// instance carries the closed-form output state instead.
std::pair<QsciInstance, GnaOrbitSummary> gna_to_qsci(const Graph& g);

// Closed-form output state: the Gram-matrix block structure of the tags.
DensityOperator gna_output_state(const Graph& g);

GnaOrbitSummary gna_orbit_summary(const Graph& g);

// Circuit with a designated accept qubit -> one-qubit closeness instance:
// the output qubit is randomized on accept and left |0> on reject, so the
// output distance is (1 - p_accept)/2. repetitions in {1, 3}; 3 majority-
// votes three copies via Toffoli-built logic.
QsciInstance bqp_to_1qsci(const CircuitDescription& c, int accept_qubit,
                          int repetitions);

// Acceptance probability of the designated qubit reading 1.
double acceptance_of(const CircuitDescription& c, int accept_qubit);

}  // namespace niqzk

#endif
