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

#include <algorithm>
#include <cmath>
#include <map>

#include "niqzk/kernels.hpp"

namespace niqzk {

namespace {

// Concatenated copies must keep every STATEPREP in front of every gate; the
// copies act on disjoint qubits, so hoisting the preparations is exact.
std::vector<GateApplication> stateprep_first(
    std::vector<GateApplication> gates) {
  std::stable_partition(gates.begin(), gates.end(), [](const auto& g) {
    return g.gate == Gate::StatePrep;
  });
  return gates;
}

void append_ch_gate(std::vector<GateApplication>& gates, int control,
                    int target) {
  auto add = [&](Gate g, std::vector<int> t) {
    gates.push_back({g, std::move(t), {}});
  };
  add(Gate::S, {target});
  add(Gate::H, {target});
  add(Gate::T, {target});
  add(Gate::CNOT, {control, target});
  add(Gate::Tdg, {target});
  add(Gate::H, {target});
  add(Gate::Sdg, {target});
}

void append_toffoli(std::vector<GateApplication>& gates, int a, int b, int c) {
  auto add = [&](Gate g, std::vector<int> t) {
    gates.push_back({g, std::move(t), {}});
  };
  add(Gate::H, {c});
  add(Gate::CNOT, {b, c});
  add(Gate::Tdg, {c});
  add(Gate::CNOT, {a, c});
  add(Gate::T, {c});
  add(Gate::CNOT, {b, c});
  add(Gate::Tdg, {c});
  add(Gate::CNOT, {a, c});
  add(Gate::T, {b});
  add(Gate::T, {c});
  add(Gate::H, {c});
  add(Gate::CNOT, {a, b});
  add(Gate::T, {a});
  add(Gate::Tdg, {b});
  add(Gate::CNOT, {a, b});
}

}  // namespace

QsciInstance amplify(const QsciInstance& inst, int r) {
  validate_thresholds(inst.alpha, inst.beta);
  if (r < 1) throw std::invalid_argument("amplify: r must be >= 1");
  if (r == 1) return inst;
  const double beta_r =
      std::clamp(1.0 - std::pow(1.0 - inst.beta * inst.beta, r / 2.0),
                 inst.beta, 1.0);

  if (const auto* c = std::get_if<CircuitDescription>(&inst.source)) {
    const int q_in = c->num_qubits();
    const int q_out = c->num_output_qubits();
    limits::require_pure(r * q_in, "amplify");
    limits::require_density(r * q_out, "amplify");
    std::vector<GateApplication> gates;
    for (int k = 0; k < r; ++k) {
      // Copy k's outputs land at k*q_out.. and its work qubits after all
      // outputs, so the combined outputs are the leading r*q_out qubits.
      std::vector<int> map(q_in);
      for (int j = 0; j < q_in; ++j) {
        map[j] = (j < q_out) ? k * q_out + j
                             : r * q_out + k * (q_in - q_out) + (j - q_out);
      }
      const CircuitDescription copy =
          remap_circuit(*c, map, r * q_in, r * q_out);
      for (const auto& g : copy.gates()) gates.push_back(g);
    }
    return QsciInstance{
        inst.alpha, beta_r,
        CircuitDescription(r * q_in, r * q_out, stateprep_first(gates))};
  }

  // Channel-backed: carry the exact tensor-power output state. The working
  // register is empty; the terminator alone defines the output.
  const DensityOperator rho =
      channel_output(std::get<ChannelDescription>(inst.source));
  const DensityOperator rho_r = tensor_power_state(rho, r);
  return QsciInstance{
      inst.alpha, beta_r,
      ChannelDescription(0, rho_r.num_qubits(),
                         {ChannelStep{PrepareOutputStep{rho_r}}})};
}

int repetitions_for_soundness(double beta, double target) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in (0, 1]");
  }
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument("target soundness must lie in (0, 1)");
  }
  const double base = 1.0 - beta * beta;
  int r = 1;
  double bound = base;
  while (bound > target) {
    ++r;
    bound *= base;
    if (r > 64) {
      throw std::invalid_argument(
          "soundness target needs more than 64 repetitions");
    }
  }
  return r;
}

QsciProtocolReduction qsci_to_protocol(const QsciInstance& inst,
                                       double target_soundness) {
  if (!std::holds_alternative<CircuitDescription>(inst.source)) {
    throw std::invalid_argument(
        "qsci_to_protocol needs a circuit-backed instance");
  }
  const int r = repetitions_for_soundness(inst.beta, target_soundness);
  const QsciInstance amplified = amplify(inst, r);
  QsciProtocolReduction out;
  out.repetitions = r;
  out.soundness_guarantee = std::pow(1.0 - inst.beta * inst.beta, r);
  out.amplified_circuit = std::get<CircuitDescription>(amplified.source);
  out.spec = build_qsci_verifier(out.amplified_circuit);
  return out;
}

QsciInstance protocol_to_qsci(const ProtocolSpec& spec,
                              const DensityOperator& sim) {
  spec.validate();
  if (sim.num_qubits() != spec.q_v + spec.q_m) {
    throw std::invalid_argument(
        "protocol_to_qsci: simulator width must be q_v + q_m");
  }
  if (spec.q_s < 1) {
    throw std::invalid_argument(
        "protocol_to_qsci needs at least one shared EPR pair");
  }
  const int q_vbar = spec.q_v - spec.q_s;
  const int width = spec.q_v + spec.q_m;

  // Channel register order (M, S, V); the protocol keeps (Vbar, S, M).
  std::vector<int> order(width);
  for (int j = 0; j < spec.q_m; ++j) order[j] = spec.q_v + j;
  for (int i = 0; i < spec.q_s; ++i) order[spec.q_m + i] = q_vbar + i;
  for (int k = 0; k < q_vbar; ++k) order[spec.q_m + spec.q_s + k] = k;
  const DensityOperator sim_msv = reorder_qubits(sim, order);

  // Verifier remap onto the channel layout.
  std::vector<int> vmap(width);
  for (int k = 0; k < q_vbar; ++k) vmap[k] = spec.q_m + spec.q_s + k;
  for (int i = 0; i < spec.q_s; ++i) vmap[q_vbar + i] = spec.q_m + i;
  for (int j = 0; j < spec.q_m; ++j) vmap[spec.q_v + j] = j;
  const CircuitDescription verifier_msv =
      remap_circuit(spec.verifier, vmap, width, 0);

  const DensityOperator far = DensityOperator::zero_state(spec.q_s);
  const DensityOperator mixed = DensityOperator::maximally_mixed(spec.q_s);

  // Step 3.2: run the verifier, pay out I/2^q_s exactly on acceptance.
  MeasureBranchStep accept_check;
  std::vector<ChannelStep> on_accept = {ChannelStep{PrepareOutputStep{mixed}}};
  std::vector<ChannelStep> on_reject = {ChannelStep{PrepareOutputStep{far}}};
  if (!spec.accept_if_zero.empty()) {
    for (int q : spec.accept_if_zero) accept_check.qubits.push_back(vmap[q]);
    accept_check.all_zero = std::move(on_accept);
    accept_check.otherwise = std::move(on_reject);
  } else {
    accept_check.qubits = {vmap[spec.output_qubit]};
    accept_check.all_zero = std::move(on_reject);
    accept_check.otherwise = std::move(on_accept);
  }

  CoinStep coin;
  coin.probability_heads = 0.5;
  OutputQubitsStep output_s;
  for (int i = 0; i < spec.q_s; ++i) output_s.keep.push_back(spec.q_m + i);
  coin.heads = {ChannelStep{std::move(output_s)}};
  coin.tails = {ChannelStep{UnitaryStep{verifier_msv}},
                ChannelStep{std::move(accept_check)}};

  std::vector<ChannelStep> steps = {ChannelStep{PrepareStep{sim_msv}}};
  if (q_vbar > 0) {
    MeasureBranchStep v_check;
    for (int k = 0; k < q_vbar; ++k) {
      v_check.qubits.push_back(spec.q_m + spec.q_s + k);
    }
    v_check.all_zero = {ChannelStep{std::move(coin)}};
    v_check.otherwise = {ChannelStep{PrepareOutputStep{far}}};
    steps.push_back(ChannelStep{std::move(v_check)});
  } else {
    steps.push_back(ChannelStep{std::move(coin)});
  }

  return QsciInstance{0.0, 0.2,
                      ChannelDescription(width, spec.q_s, std::move(steps))};
}

GnaOrbitSummary gna_orbit_summary(const Graph& g) {
  const int n = g.num_vertices();
  if (n > 8) {
    throw std::invalid_argument("gna reductions support n <= 8 vertices");
  }
  std::uint64_t factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  int q_l = 0;
  while (dim_of(q_l) < factorial) ++q_l;

  std::map<std::uint64_t, std::uint64_t> blocks;
  Permutation p = Permutation::identity(n);
  std::uint64_t i = 0;
  do {
    const std::uint64_t tag = apply_permutation(g, p).adjacency_bits();
    ++blocks[tag];
    ++i;
  } while (p.advance());
  for (; i < dim_of(q_l); ++i) {
    ++blocks[(std::uint64_t{1} << 63) | i];  // tag (1, i), always fresh
  }

  GnaOrbitSummary out;
  out.num_vertices = n;
  out.q_l = q_l;
  out.num_blocks = blocks.size();
  for (const auto& [tag, count] : blocks) out.block_sizes.push_back(count);
  std::sort(out.block_sizes.rbegin(), out.block_sizes.rend());
  out.distance = 1.0 - static_cast<double>(out.num_blocks) /
                           static_cast<double>(dim_of(q_l));
  return out;
}

DensityOperator gna_output_state(const Graph& g) {
  const int n = g.num_vertices();
  if (n > 8) {
    throw std::invalid_argument("gna reductions support n <= 8 vertices");
  }
  std::uint64_t factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  int q_l = 0;
  while (dim_of(q_l) < factorial) ++q_l;
  limits::require_density(q_l, "gna_output_state");

  const std::uint64_t d = dim_of(q_l);
  std::vector<std::uint64_t> tags(d);
  Permutation p = Permutation::identity(n);
  std::uint64_t i = 0;
  do {
    tags[i++] = apply_permutation(g, p).adjacency_bits();
  } while (p.advance());
  for (; i < d; ++i) tags[i] = (std::uint64_t{1} << 63) | i;

  Mat rho = Mat::Zero(d, d);
  const double w = 1.0 / static_cast<double>(d);
  for (std::uint64_t r = 0; r < d; ++r) {
    for (std::uint64_t c = 0; c < d; ++c) {
      if (tags[r] == tags[c]) {
        rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w;
      }
    }
  }
  return DensityOperator(q_l, std::move(rho));
}

std::pair<QsciInstance, GnaOrbitSummary> gna_to_qsci(const Graph& g) {
  const GnaOrbitSummary summary = gna_orbit_summary(g);
  const int n = g.num_vertices();
  const int q_l = summary.q_l;
  const int q_g = 1 + n * (n - 1) / 2;  // tag bit + adjacency bits

  if (q_l + q_g <= limits::density_qubit_cap()) {
    // Emit the preparation circuit: sum_i |i>|tag_i> / sqrt(2^q_l), output
    // the permutation register.
    const int q_in = q_l + q_g;
    std::uint64_t factorial = 1;
    for (int v = 2; v <= n; ++v) factorial *= v;
    std::vector<cplx> amps(dim_of(q_in), 0.0);
    const double a = 1.0 / std::sqrt(static_cast<double>(dim_of(q_l)));
    Permutation p = Permutation::identity(n);
    std::uint64_t i = 0;
    do {
      const std::uint64_t tag = apply_permutation(g, p).adjacency_bits();
      amps[(i << q_g) | tag] = a;
      ++i;
    } while (p.advance());
    for (; i < dim_of(q_l); ++i) {
      const std::uint64_t tag = (std::uint64_t{1} << (q_g - 1)) | i;
      amps[(i << q_g) | tag] = a;
    }
    GateApplication prep;
    prep.gate = Gate::StatePrep;
    for (int q = 0; q < q_in; ++q) prep.targets.push_back(q);
    prep.amplitudes = std::move(amps);
    CircuitDescription circuit(q_in, q_l, {std::move(prep)});
    return {QsciInstance{0.0, 0.25, std::move(circuit)}, summary};
  }

  // Too wide to simulate densely: carry the closed-form output state.
  const DensityOperator rho = gna_output_state(g);
  return {QsciInstance{0.0, 0.25,
                       ChannelDescription(
                           0, q_l, {ChannelStep{PrepareOutputStep{rho}}})},
          summary};
}

double acceptance_of(const CircuitDescription& c, int accept_qubit) {
  if (accept_qubit < 0 || accept_qubit >= c.num_qubits()) {
    throw std::invalid_argument("accept qubit out of range");
  }
  const PureState psi = evaluate_pure(c);
  return kernels::prob_bit_one(psi.amplitudes().data(),
                               static_cast<std::size_t>(psi.amplitudes().size()),
                               bit_position(c.num_qubits(), accept_qubit));
}

QsciInstance bqp_to_1qsci(const CircuitDescription& c, int accept_qubit,
                          int repetitions) {
  if (accept_qubit < 0 || accept_qubit >= c.num_qubits()) {
    throw std::invalid_argument("accept qubit out of range");
  }
  if (repetitions != 1 && repetitions != 3) {
    throw std::invalid_argument(
        "bqp_to_1qsci supports repetitions 1 (direct) or 3 (majority)");
  }
  const int q_c = c.num_qubits();
  // Qubit 0: output. Qubit 1: its entangled partner (randomization via a
  // shared pair, so the output alone is maximally mixed on accept). With
  // majority voting, qubit 2 collects maj3 = ab + ac + bc over the copies'
  // accept bits.
  const int header = (repetitions == 3) ? 3 : 2;
  const int width = header + repetitions * q_c;
  limits::require_pure(width, "bqp_to_1qsci");

  std::vector<GateApplication> gates;
  std::vector<int> accept_bits;
  for (int k = 0; k < repetitions; ++k) {
    std::vector<int> map(q_c);
    for (int j = 0; j < q_c; ++j) map[j] = header + k * q_c + j;
    const CircuitDescription copy = remap_circuit(c, map, width, 0);
    for (const auto& g : copy.gates()) gates.push_back(g);
    accept_bits.push_back(header + k * q_c + accept_qubit);
  }
  gates = stateprep_first(std::move(gates));

  int decision = accept_bits[0];
  if (repetitions == 3) {
    decision = 2;
    append_toffoli(gates, accept_bits[0], accept_bits[1], decision);
    append_toffoli(gates, accept_bits[0], accept_bits[2], decision);
    append_toffoli(gates, accept_bits[1], accept_bits[2], decision);
  }
  append_ch_gate(gates, decision, 0);
  gates.push_back({Gate::CNOT, {0, 1}, {}});

  return QsciInstance{
      1.0 / 6.0, 1.0 / 3.0,
      CircuitDescription(width, 1, std::move(gates))};
}

}  // namespace niqzk
