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

#include "niqzk/reductions.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "niqzk/qcore.hpp"
#include "testutil.hpp"

using namespace niqzk;
namespace tu = testutil;

namespace {

const std::string kFixtures = NIQZK_FIXTURE_DIR;

QsciInstance epr_instance(double beta) {
  return {0.0, beta, parse_circuit("qubits 2\nout 1\nH 0\nCNOT 0 1\n")};
}

QsciInstance identity_instance(double beta) {
  return {0.0, beta, parse_circuit("qubits 1\nout 1\n")};
}

// Circuit whose single output qubit is diag(1-p, p) exactly.
CircuitDescription bernoulli_circuit(double p) {
  GateApplication prep;
  prep.gate = Gate::StatePrep;
  prep.targets = {0, 1};
  prep.amplitudes = {std::sqrt(1.0 - p), 0.0, 0.0, std::sqrt(p)};
  return CircuitDescription(2, 1, {std::move(prep)});
}

}  // namespace

TEST(Reductions, AmplifyTrivialCases) {
  const QsciInstance inst = identity_instance(0.5);
  const QsciInstance same = amplify(inst, 1);
  EXPECT_NEAR(distance_to_identity(same), 0.5, 1e-12);

  const QsciInstance epr4 = amplify(epr_instance(0.5), 4);
  EXPECT_NEAR(distance_to_identity(epr4), 0.0, 1e-12);
  EXPECT_EQ(std::get<CircuitDescription>(epr4.source).num_qubits(), 8);
  EXPECT_EQ(std::get<CircuitDescription>(epr4.source).num_output_qubits(), 4);
}

TEST(Reductions, AmplifyIdentityInstanceMeetsLowerBound) {
  const QsciInstance amp = amplify(identity_instance(0.5), 4);
  const double d = distance_to_identity(amp);
  EXPECT_GE(d, 1.0 - std::pow(0.75, 2.0) - 1e-9);  // 1-(1-d^2)^{r/2} = 0.4375
  // Exact value for |0><0|^{(x)4}: 1 - 2^{-4}.
  EXPECT_NEAR(d, 1.0 - 1.0 / 16.0, 1e-12);
}

TEST(Reductions, AmplifyKeepsStateprepPrefix) {
  const QsciInstance amp{
      0.0, 0.5, bernoulli_circuit(0.3)};
  const QsciInstance out = amplify(amp, 3);
  const auto& c = std::get<CircuitDescription>(out.source);
  // All preparations must precede all gates (none here, but the structure
  // must validate) and the distance must be the tensor-power distance.
  const double d1 = distance_to_identity(amp);
  const double dr = distance_to_identity(out);
  EXPECT_GE(dr, 1.0 - std::pow(1.0 - d1 * d1, 1.5) - 1e-9);
  EXPECT_EQ(c.num_output_qubits(), 3);
}

TEST(Reductions, AmplifyChannelBackedInstance) {
  // Channel that just pays out |0><0|; amplified it carries the exact
  // tensor power.
  const ChannelDescription ch(
      0, 1, {ChannelStep{PrepareOutputStep{DensityOperator::zero_state(1)}}});
  const QsciInstance inst{0.0, 0.5, ch};
  const QsciInstance out = amplify(inst, 2);
  EXPECT_NEAR(distance_to_identity(out), 0.75, 1e-12);
}

TEST(Reductions, RepetitionsForSoundness) {
  EXPECT_EQ(repetitions_for_soundness(1.0, 0.5), 1);
  EXPECT_EQ(repetitions_for_soundness(0.5, 0.75), 1);
  EXPECT_EQ(repetitions_for_soundness(0.5, 0.5), 3);  // 0.75^3 = 0.4219
  EXPECT_GT(repetitions_for_soundness(0.25, 0.5), 3);
}

TEST(Reductions, QsciToProtocolYesInstanceEndToEnd) {
  const QsciProtocolReduction red =
      qsci_to_protocol(epr_instance(0.5), 0.5);
  EXPECT_EQ(red.repetitions, 3);
  EXPECT_LE(red.soundness_guarantee, 0.5);
  const ProverStrategy honest =
      honest_prover(red.spec, red.amplified_circuit);
  EXPECT_NEAR(acceptance_probability(red.spec, honest), 1.0, kBuildTol);
}

TEST(Reductions, QsciToProtocolNoInstanceCheatBound) {
  const QsciProtocolReduction red =
      qsci_to_protocol(identity_instance(0.5), 0.5);
  const double bound = optimal_cheat_bound(red.spec, red.amplified_circuit);
  EXPECT_LE(bound, 0.5 + 1e-9);
  EXPECT_LE(bound, red.soundness_guarantee + 1e-9);
}

TEST(Reductions, QsciToProtocolOrthogonalInstance) {
  // Output |0><0| judged with beta = 1: F = 1/sqrt(2) per copy... beta=1
  // forces distance 1, i.e. orthogonal support; X|0> = |1> vs I/2 has
  // distance 1/2, so build a true beta=1 instance: a 2-qubit pure output.
  const auto pure2 = parse_circuit("qubits 2\nout 2\nH 0\nCNOT 0 1\n");
  const QsciInstance inst{0.0, 1.0, pure2};
  const QsciProtocolReduction red = qsci_to_protocol(inst, 0.5);
  EXPECT_EQ(red.repetitions, 1);
  const double bound = optimal_cheat_bound(red.spec, red.amplified_circuit);
  // Pure state vs I/4: F^2 = 1/4.
  EXPECT_NEAR(bound, 0.25, 1e-9);
}

TEST(Reductions, ProtocolToQsciHonestYesInstanceIsExactlyMixed) {
  const auto r = parse_circuit("qubits 2\nout 1\nH 0\nCNOT 0 1\n");
  const ProtocolSpec spec = build_qsci_verifier(r);
  const ProverStrategy honest = honest_prover(spec, r);
  const DensityOperator sim = verifier_view(spec, honest);
  const QsciInstance inst = protocol_to_qsci(spec, sim);
  EXPECT_NEAR(distance_to_identity(inst), 0.0, 1e-9);
}

TEST(Reductions, ProtocolToQsciDirtyVRegisterOutputsZeros) {
  // Simulator with a 1 in the V register: the channel bails out to
  // |0...0><0...0|, at distance 1 - 2^{-q_s}.
  const auto r = parse_circuit("qubits 2\nout 1\nH 0\nCNOT 0 1\n");
  const ProtocolSpec spec = build_qsci_verifier(r);
  // Width q_v + q_m = 3; set the flag qubit (index 0) to |1>.
  const DensityOperator sim =
      DensityOperator::from_pure(PureState::basis(3, 4));
  const QsciInstance inst = protocol_to_qsci(spec, sim);
  EXPECT_NEAR(distance_to_identity(inst), 1.0 - 0.5, 1e-9);
}

TEST(Reductions, ProtocolToQsciRejectingVerifierFixture) {
  // Always-rejecting verifier (output qubit never set): whatever the
  // simulator claims, the no-instance distance is at least 1/5.
  ProtocolSpec spec;
  spec.q_v = 2;  // output qubit + 1 EPR half
  spec.q_m = 0;
  spec.q_p = 1;
  spec.q_s = 1;
  spec.verifier = CircuitDescription::identity(2, 0);
  spec.output_qubit = 0;

  // Simulator honest about the S marginal: heads gives I/2, tails always
  // rejects, so the mix is diag(3/4, 1/4).
  const DensityOperator honest_marginal =
      tensor(DensityOperator::zero_state(1), DensityOperator::maximally_mixed(1));
  const QsciInstance a = protocol_to_qsci(spec, honest_marginal);
  EXPECT_NEAR(distance_to_identity(a), 0.25, 1e-9);
  EXPECT_GE(distance_to_identity(a), 0.2 - 1e-12);

  // Simulator with a far S marginal: both branches land on |0><0|.
  const DensityOperator far_marginal = DensityOperator::zero_state(2);
  const QsciInstance b = protocol_to_qsci(spec, far_marginal);
  EXPECT_NEAR(distance_to_identity(b), 0.5, 1e-9);
  EXPECT_GE(distance_to_identity(b), 0.2 - 1e-12);
}

TEST(Reductions, GnaNamedValues) {
  const Graph k3 = load_graph(kFixtures + "/k3.graph");
  const auto [k3_inst, k3_summary] = gna_to_qsci(k3);
  EXPECT_EQ(k3_summary.q_l, 3);
  EXPECT_EQ(k3_summary.num_blocks, 3u);
  EXPECT_NEAR(k3_summary.distance, 0.625, 1e-15);
  EXPECT_NEAR(distance_to_identity(k3_inst), 0.625, 1e-9);
  EXPECT_EQ(decide_qsci(k3_inst).kind, VerdictKind::Reject);

  const Graph p4 = load_graph(kFixtures + "/p4.graph");
  const auto [p4_inst, p4_summary] = gna_to_qsci(p4);
  EXPECT_EQ(p4_summary.q_l, 5);
  EXPECT_EQ(p4_summary.num_blocks, 20u);
  EXPECT_NEAR(p4_summary.distance, 0.375, 1e-15);
  EXPECT_NEAR(distance_to_identity(p4_inst), 0.375, 1e-9);

  const Graph rigid = load_graph(kFixtures + "/rigid6.graph");
  const auto [rigid_inst, rigid_summary] = gna_to_qsci(rigid);
  EXPECT_EQ(rigid_summary.num_vertices, 6);
  EXPECT_NEAR(rigid_summary.distance, 0.0, 1e-15);
  EXPECT_NEAR(distance_to_identity(rigid_inst), 0.0, 1e-12);
  EXPECT_EQ(decide_qsci(rigid_inst).kind, VerdictKind::Accept);
}

TEST(Reductions, GnaAnalyticMatchesEigendecomposition) {
  // The closed-form orbit distance must match the spectral computation on
  // the explicit Gram-matrix state.
  for (const char* name : {"/k3.graph", "/p4.graph", "/rigid6.graph"}) {
    const Graph g = load_graph(kFixtures + name);
    const GnaOrbitSummary summary = gna_orbit_summary(g);
    const DensityOperator rho = gna_output_state(g);
    const double d = trace_distance(
        rho, DensityOperator::maximally_mixed(rho.num_qubits()));
    EXPECT_NEAR(d, summary.distance, 1e-9) << name;
  }
}

TEST(Reductions, GnaCircuitPathAgreesWithAnalyticPath) {
  // n = 3: the emitted preparation circuit is small enough to simulate and
  // must reproduce the closed-form output state.
  const Graph k3 = load_graph(kFixtures + "/k3.graph");
  const auto [inst, summary] = gna_to_qsci(k3);
  const auto* c = std::get_if<CircuitDescription>(&inst.source);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->num_qubits(), 3 + 4);  // q_l + (1 + 3 adjacency bits)
  const DensityOperator simulated = output_state(*c);
  EXPECT_LT(tu::max_abs_diff(simulated.matrix(),
                             gna_output_state(k3).matrix()),
            1e-9);
}

TEST(Reductions, GnaRigidFixtureIsChannelBacked) {
  const Graph rigid = load_graph(kFixtures + "/rigid6.graph");
  const auto [inst, summary] = gna_to_qsci(rigid);
  EXPECT_TRUE(std::holds_alternative<ChannelDescription>(inst.source));
  EXPECT_EQ(summary.block_sizes.size(), dim_of(summary.q_l));
}

TEST(Reductions, GnaDichotomyExhaustiveSmallGraphs) {
  // n <= 4: every graph either is rigid (none are, except n = 1) or sits at
  // distance >= 1/4.
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size());
         ++mask) {
      std::vector<std::pair<int, int>> edges;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        if ((mask >> k) & 1) edges.push_back(pairs[k]);
      }
      const Graph g(n, edges);
      const GnaOrbitSummary summary = gna_orbit_summary(g);
      if (automorphism_count(g) == 1) {
        EXPECT_EQ(summary.distance, 0.0);
      } else {
        EXPECT_GE(summary.distance, 0.25);
      }
    }
  }
}

TEST(Reductions, BqpDistanceFormula) {
  for (double p : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    const QsciInstance inst = bqp_to_1qsci(bernoulli_circuit(p), 0, 1);
    EXPECT_NEAR(distance_to_identity(inst), (1.0 - p) / 2.0, 1e-9) << p;
  }
}

TEST(Reductions, BqpAlwaysAcceptAndReject) {
  // p = 1: output exactly maximally mixed, Accept. p = 0: |0><0|, Reject.
  const auto always = bqp_to_1qsci(bernoulli_circuit(1.0), 0, 1);
  EXPECT_EQ(decide_1qsci_exact(always).kind, VerdictKind::Accept);
  const auto never = bqp_to_1qsci(bernoulli_circuit(0.0), 0, 1);
  EXPECT_EQ(decide_1qsci_exact(never).kind, VerdictKind::Reject);
}

TEST(Reductions, BqpGateBasedCircuit) {
  // H gives p = 1/2 on the accept qubit.
  const auto h = parse_circuit("qubits 1\nout 1\nH 0\n");
  EXPECT_NEAR(acceptance_of(h, 0), 0.5, 1e-12);
  const QsciInstance inst = bqp_to_1qsci(h, 0, 1);
  EXPECT_NEAR(distance_to_identity(inst), 0.25, 1e-9);
}

TEST(Reductions, BqpMajorityAmplification) {
  for (double p : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}) {
    const QsciInstance inst = bqp_to_1qsci(bernoulli_circuit(p), 0, 3);
    const double p3 = 3 * p * p - 2 * p * p * p;  // majority of three
    EXPECT_NEAR(distance_to_identity(inst), (1.0 - p3) / 2.0, 1e-9) << p;
  }
  EXPECT_THROW(bqp_to_1qsci(bernoulli_circuit(0.5), 0, 2),
               std::invalid_argument);
}
