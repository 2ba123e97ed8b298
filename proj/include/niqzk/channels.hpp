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

#ifndef NIQZK_CHANNELS_HPP
#define NIQZK_CHANNELS_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "niqzk/circuits.hpp"
#include "niqzk/states.hpp"

namespace niqzk {

// A channel is a step list over a working register of fixed width. Transform
// steps (Prepare, Unitary) may appear in any number; every path then ends in
// exactly one terminator: OutputQubits / PrepareOutput directly, or a
// branching step (MeasureBranch, Coin) whose sub-lists terminate recursively.
// Evaluation is exact: measurement branches are weighted by their Born
// probabilities and summed, never sampled.

struct ChannelStep;

// Replaces the working state (width must equal the channel width).
struct PrepareStep {
  DensityOperator state;
};

// Applies a gate-only circuit of the channel width.
struct UnitaryStep {
  CircuitDescription circuit;
};

// Measures the listed qubits in the computational basis; continues into
// `all_zero` when every outcome is 0 and into `otherwise` for the rest.
struct MeasureBranchStep {
  std::vector<int> qubits;
  std::vector<ChannelStep> all_zero;
  std::vector<ChannelStep> otherwise;
};

// Classical coin: heads with the given probability.
struct CoinStep {
  double probability_heads = 0.5;
  std::vector<ChannelStep> heads;
  std::vector<ChannelStep> tails;
};

// Terminator: discard the working state and output `state`.
struct PrepareOutputStep {
  DensityOperator state;
};

// Terminator: output the reduced state on the listed qubits.
struct OutputQubitsStep {
  std::vector<int> keep;
};

struct ChannelStep {
  std::variant<PrepareStep, UnitaryStep, MeasureBranchStep, CoinStep,
               PrepareOutputStep, OutputQubitsStep>
      v;
};

class ChannelDescription {
 public:
  ChannelDescription(int num_qubits, int num_output_qubits,
                     std::vector<ChannelStep> steps);

  int num_qubits() const { return num_qubits_; }
  int num_output_qubits() const { return num_output_qubits_; }
  const std::vector<ChannelStep>& steps() const { return steps_; }

 private:
  int num_qubits_;
  int num_output_qubits_;
  std::vector<ChannelStep> steps_;
};

// Exact output state: all branches evaluated, weighted and summed.
DensityOperator channel_output(const ChannelDescription& ch);

ChannelDescription parse_channel(std::string_view text,
                                 std::string_view source_name = "<string>");
ChannelDescription load_channel(const std::string& path);
std::string serialize_channel(const ChannelDescription& ch);
void save_channel(const ChannelDescription& ch, const std::string& path);

}  // namespace niqzk

#endif
