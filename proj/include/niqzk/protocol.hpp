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

#ifndef NIQZK_PROTOCOL_HPP
#define NIQZK_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "niqzk/circuits.hpp"
#include "niqzk/qcore.hpp"
#include "niqzk/states.hpp"

namespace niqzk {

// Non-interactive proof system with shared EPR pairs. Register layout, in
// index order: Vbar (verifier private, q_v - q_s), S (verifier EPR halves,
// q_s), M (message, q_m), P (prover, q_p; its last q_s qubits are the prover
// EPR halves). The verifier circuit acts on V (x) M = the first q_v + q_m
// qubits.
//
// Acceptance is either "the output qubit reads 1" (the general model) or,
// when accept_if_zero is non-empty, "those V (x) M qubits all read 0",
// evaluated as an exact projector expectation rather than compiled into a
// multi-controlled gate.
struct ProtocolSpec {
  int q_v = 0;
  int q_m = 0;
  int q_p = 0;
  int q_s = 0;
  CircuitDescription verifier = CircuitDescription::identity(0, 0);
  int output_qubit = 0;
  std::vector<int> accept_if_zero;

  int total_qubits() const { return q_v + q_m + q_p; }
  RegisterPartition layout() const;
  void validate() const;
};

// Arbitrary unitary over M (x) P.
struct ProverStrategy {
  Mat unitary;
};

ProverStrategy identity_prover(const ProtocolSpec& spec);

// Zeros on Vbar, M and the prover's non-EPR qubits; q_s EPR pairs across
// (S, prover EPR halves).
PureState initial_state(const ProtocolSpec& spec);

// Probability the verifier accepts after prover then verifier act on the
// initial state.
double acceptance_probability(const ProtocolSpec& spec,
                              const ProverStrategy& prover);

// Verifier for a closeness-to-identity circuit R (q'-in, q'_out-out,
// gate-only): q_s = q'_out shared pairs, message width q' - q'_out, verifier
// applies R^dag to (M, S) and accepts iff all q' qubits read 0. The spec
// gains one flag qubit at index 0 standing for the accept bit.
ProtocolSpec build_qsci_verifier(const CircuitDescription& r,
                                 int extra_prover_qubits = 0);

// Honest prover for a yes-instance (output of R maximally mixed within
// 1e-6): the Uhlmann unitary steering the initial state to
// |0>_flag (x) R|0> (x) |0...0>_P. Throws std::invalid_argument otherwise.
ProverStrategy honest_prover(const ProtocolSpec& spec,
                             const CircuitDescription& r);

// Closed-form ceiling on any prover's acceptance for a build_qsci_verifier
// spec: F(output_state(R), I/2^q_out)^2. Fidelity monotonicity under partial
// trace makes it an upper bound; an Uhlmann prover attains it.
double optimal_cheat_bound(const ProtocolSpec& spec,
                           const CircuitDescription& r);

struct CheatSearchOptions {
  int restarts = 20;
  int sweeps = 50;
  std::uint64_t seed = 0;
};

struct CheatSearchResult {
  ProverStrategy prover;
  double acceptance = 0;
};

// Independent numeric check on the cheat bound: seeded random-restart ascent
// over prover unitaries using closed-form-scored Givens rotations.
// Deterministic for a fixed seed.
CheatSearchResult numeric_cheat_search(const ProtocolSpec& spec,
                                       const CheatSearchOptions& options);

// The verifier's view: reduced state on V (x) M after the prover acts
// (before the verifier).
DensityOperator verifier_view(const ProtocolSpec& spec,
                              const ProverStrategy& prover);

// trace_distance(sim, verifier_view); a perfect-ZK pass is <= 1e-9.
double zk_audit(const ProtocolSpec& spec, const ProverStrategy& prover,
                const DensityOperator& sim);

// No-setup decision algorithm: feed the simulator state through the verifier
// and read the output qubit. Models the q_s = 0 case.
double decide_via_simulator(const CircuitDescription& verifier,
                            int output_qubit, const DensityOperator& sim);

// Circuit preparing the prescribed perfect-ZK simulator state
// |0><0|_flag (x) R|0><0|R^dag for a build_qsci_verifier spec.
CircuitDescription honest_simulator_circuit(const CircuitDescription& r);

// Protocol spec files: key=value text referencing the verifier circuit file,
// plus optional accept_if_zero list and source circuit provenance.
struct ProtocolSpecFile {
  ProtocolSpec spec;
  std::optional<CircuitDescription> source_circuit;
};

ProtocolSpecFile load_protocol_spec(const std::string& path);
void save_protocol_spec(const ProtocolSpec& spec, const std::string& path,
                        const CircuitDescription* source_circuit = nullptr);

}  // namespace niqzk

#endif
