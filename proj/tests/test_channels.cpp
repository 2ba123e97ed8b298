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

#include "niqzk/channels.hpp"

#include <gtest/gtest.h>

#include "niqzk/qcore.hpp"
#include "niqzk/rng.hpp"
#include "testutil.hpp"

using namespace niqzk;
namespace tu = testutil;

namespace {

std::vector<ChannelStep> output_all(int width) {
  OutputQubitsStep oq;
  for (int i = 0; i < width; ++i) oq.keep.push_back(i);
  return {ChannelStep{std::move(oq)}};
}

ChannelStep prep_out(const DensityOperator& rho) {
  return ChannelStep{PrepareOutputStep{rho}};
}

}  // namespace

TEST(Channels, CoinBetweenBasisPreparationsIsMaximallyMixed) {
  CoinStep coin;
  coin.probability_heads = 0.5;
  coin.heads = {prep_out(DensityOperator::zero_state(1))};
  coin.tails = {
      prep_out(DensityOperator::from_pure(PureState::basis(1, 1)))};
  const ChannelDescription ch(1, 1, {ChannelStep{std::move(coin)}});
  EXPECT_LT(tu::max_abs_diff(channel_output(ch).matrix(),
                             Mat::Identity(2, 2) / 2.0),
            1e-12);
}

TEST(Channels, MeasureBranchWeightsFollowBornRule) {
  // H |0> then measure: each branch carries weight 1/2; tag the outcome with
  // distinct outputs.
  UnitaryStep had{parse_circuit("qubits 1\nout 0\nH 0\n")};
  MeasureBranchStep mb;
  mb.qubits = {0};
  mb.all_zero = {prep_out(DensityOperator::zero_state(1))};
  mb.otherwise = {
      prep_out(DensityOperator::from_pure(PureState::basis(1, 1)))};
  const ChannelDescription ch(
      1, 1, {ChannelStep{std::move(had)}, ChannelStep{std::move(mb)}});
  Mat want = Mat::Zero(2, 2);
  want(0, 0) = 0.5;
  want(1, 1) = 0.5;
  EXPECT_LT(tu::max_abs_diff(channel_output(ch).matrix(), want), 1e-12);
}

TEST(Channels, MeasurementDephasesTheZeroSector) {
  // Measuring qubit 1 of an EPR-like state collapses coherence but keeps the
  // diagonal; the all-zero branch of qubit 1 holds |00> with weight 1/2.
  UnitaryStep epr{parse_circuit("qubits 2\nout 0\nH 0\nCNOT 0 1\n")};
  MeasureBranchStep mb;
  mb.qubits = {1};
  mb.all_zero = output_all(2);
  mb.otherwise = output_all(2);
  const ChannelDescription ch(
      2, 2, {ChannelStep{std::move(epr)}, ChannelStep{std::move(mb)}});
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = 0.5;
  want(3, 3) = 0.5;
  EXPECT_LT(tu::max_abs_diff(channel_output(ch).matrix(), want), 1e-12);
}

TEST(Channels, PrepareReplacesState) {
  Rng rng(61);
  const DensityOperator rho = tu::random_density(2, rng);
  const ChannelDescription ch(
      2, 2, {ChannelStep{PrepareStep{rho}}, output_all(2)[0]});
  EXPECT_LT(tu::max_abs_diff(channel_output(ch).matrix(), rho.matrix()),
            1e-12);
}

TEST(Channels, OutputQubitsTracesTheRest) {
  UnitaryStep epr{parse_circuit("qubits 2\nout 0\nH 0\nCNOT 0 1\n")};
  OutputQubitsStep oq;
  oq.keep = {1};
  const ChannelDescription ch(
      2, 1, {ChannelStep{std::move(epr)}, ChannelStep{std::move(oq)}});
  EXPECT_LT(tu::max_abs_diff(channel_output(ch).matrix(),
                             Mat::Identity(2, 2) / 2.0),
            1e-12);
}

TEST(Channels, ValidationRejectsBadShapes) {
  // Unterminated path.
  EXPECT_THROW(ChannelDescription(1, 1,
                                  {ChannelStep{UnitaryStep{
                                      parse_circuit("qubits 1\nout 0\nH 0\n")}}}),
               std::invalid_argument);
  // Terminator width mismatch.
  EXPECT_THROW(
      ChannelDescription(2, 1, {prep_out(DensityOperator::zero_state(2))}),
      std::invalid_argument);
  // Steps after a terminator.
  EXPECT_THROW(
      ChannelDescription(1, 1,
                         {prep_out(DensityOperator::zero_state(1)),
                          prep_out(DensityOperator::zero_state(1))}),
      std::invalid_argument);
  // STATEPREP inside a UNITARY step.
  EXPECT_THROW(
      ChannelDescription(
          1, 1,
          {ChannelStep{UnitaryStep{parse_circuit(
               "qubits 1\nout 0\nSTATEPREP 0 : 1.000000000000,0.000000000000 "
               "0.000000000000,0.000000000000\n")}},
           output_all(1)[0]}),
      std::invalid_argument);
}

TEST(Channels, RandomChannelsProduceValidDensityOperators) {
  Rng rng(62);
  for (int trial = 0; trial < 25; ++trial) {
    const int width = 2;
    // Random unitary prefix, then a branch on a random qubit with coin-vs-
    // output continuations.
    std::vector<GateApplication> gates;
    for (int i = 0; i < 4; ++i) {
      GateApplication g;
      g.gate = (rng.below(2) == 0) ? Gate::H : Gate::T;
      g.targets = {static_cast<int>(rng.below(width))};
      gates.push_back(g);
    }
    UnitaryStep u{CircuitDescription(width, 0, gates)};
    MeasureBranchStep mb;
    mb.qubits = {static_cast<int>(rng.below(width))};
    CoinStep coin;
    coin.probability_heads = rng.uniform();
    coin.heads = {prep_out(tu::random_density(1, rng))};
    coin.tails = {ChannelStep{OutputQubitsStep{{0}}}};
    mb.all_zero = {ChannelStep{std::move(coin)}};
    mb.otherwise = {ChannelStep{OutputQubitsStep{{1}}}};
    const ChannelDescription ch(
        width, 1, {ChannelStep{std::move(u)}, ChannelStep{std::move(mb)}});
    const DensityOperator out = channel_output(ch);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, kAlgebraTol);
    EXPECT_GT(out.min_eigenvalue(), -kAlgebraTol);
  }
}

TEST(Channels, SerializationRoundTrip) {
  UnitaryStep u{parse_circuit("qubits 2\nout 0\nH 0\nCNOT 0 1\n")};
  MeasureBranchStep mb;
  mb.qubits = {1};
  CoinStep coin;
  coin.probability_heads = 0.25;
  coin.heads = {prep_out(DensityOperator::maximally_mixed(1))};
  coin.tails = {ChannelStep{OutputQubitsStep{{0}}}};
  mb.all_zero = {ChannelStep{std::move(coin)}};
  mb.otherwise = {prep_out(DensityOperator::zero_state(1))};
  const ChannelDescription ch(
      2, 1, {ChannelStep{std::move(u)}, ChannelStep{std::move(mb)}});

  const std::string text = serialize_channel(ch);
  const ChannelDescription back = parse_channel(text);
  EXPECT_EQ(serialize_channel(back), text);
  EXPECT_LT(tu::max_abs_diff(channel_output(back).matrix(),
                             channel_output(ch).matrix()),
            1e-9);
}

TEST(Channels, ParseReportsLineNumbers) {
  try {
    parse_channel("channel 1\nout 1\nBOGUS\n", "c.qch");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line_number, 3);
  }
}
