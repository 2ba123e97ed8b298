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

#include "niqzk/circuits.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "niqzk/kernels.hpp"
#include "niqzk/qcore.hpp"

namespace niqzk {

namespace {

const cplx kMatH[4] = {M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};
const cplx kMatX[4] = {0, 1, 1, 0};
const cplx kMatS[4] = {1, 0, 0, cplx(0, 1)};
const cplx kMatSdg[4] = {1, 0, 0, cplx(0, -1)};
const cplx kMatT[4] = {1, 0, 0, cplx(M_SQRT1_2, M_SQRT1_2)};
const cplx kMatTdg[4] = {1, 0, 0, cplx(M_SQRT1_2, -M_SQRT1_2)};
const cplx kMatCnot[16] = {1, 0, 0, 0, 0, 1, 0, 0,
                           0, 0, 0, 1, 0, 0, 1, 0};

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_int(std::string_view tok, std::string_view src, int line) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(std::string(src), line,
                     "expected an integer, got '" + std::string(tok) + "'");
  }
  return value;
}

double parse_double(std::string_view tok, std::string_view src, int line) {
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(std::string(src), line,
                     "expected a number, got '" + std::string(tok) + "'");
  }
  return value;
}

cplx parse_amplitude(std::string_view tok, std::string_view src, int line) {
  const auto comma = tok.find(',');
  if (comma == std::string_view::npos) {
    throw ParseError(std::string(src), line,
                     "amplitude must be 're,im', got '" + std::string(tok) +
                         "'");
  }
  return {parse_double(tok.substr(0, comma), src, line),
          parse_double(tok.substr(comma + 1), src, line)};
}

std::string format_amplitude(cplx a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f,%.12f", a.real(), a.imag());
  return buf;
}

bool parse_gate_name(std::string_view tok, Gate* out) {
  static const std::pair<std::string_view, Gate> kNames[] = {
      {"H", Gate::H},     {"X", Gate::X},     {"S", Gate::S},
      {"Sdg", Gate::Sdg}, {"T", Gate::T},     {"Tdg", Gate::Tdg},
      {"CNOT", Gate::CNOT}, {"STATEPREP", Gate::StatePrep},
  };
  for (const auto& [name, g] : kNames) {
    if (tok == name) {
      *out = g;
      return true;
    }
  }
  return false;
}

}  // namespace

std::string_view gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::X: return "X";
    case Gate::S: return "S";
    case Gate::Sdg: return "Sdg";
    case Gate::T: return "T";
    case Gate::Tdg: return "Tdg";
    case Gate::CNOT: return "CNOT";
    case Gate::StatePrep: return "STATEPREP";
  }
  return "?";
}

int gate_arity(Gate g) {
  switch (g) {
    case Gate::CNOT: return 2;
    case Gate::StatePrep: return -1;
    default: return 1;
  }
}

const cplx* gate_matrix(Gate g) {
  switch (g) {
    case Gate::H: return kMatH;
    case Gate::X: return kMatX;
    case Gate::S: return kMatS;
    case Gate::Sdg: return kMatSdg;
    case Gate::T: return kMatT;
    case Gate::Tdg: return kMatTdg;
    case Gate::CNOT: return kMatCnot;
    case Gate::StatePrep: break;
  }
  throw std::invalid_argument("STATEPREP has no fixed gate matrix");
}

CircuitDescription::CircuitDescription(int num_qubits, int num_output_qubits,
                                       std::vector<GateApplication> gates)
    : num_qubits_(num_qubits),
      num_output_qubits_(num_output_qubits),
      gates_(std::move(gates)) {
  if (num_qubits_ < 0) {
    throw std::invalid_argument("circuit qubit count must be non-negative");
  }
  if (num_output_qubits_ < 0 || num_output_qubits_ > num_qubits_) {
    throw std::invalid_argument("output count must satisfy 0 <= out <= qubits");
  }
  bool gates_started = false;
  std::vector<bool> prepped(num_qubits_, false);
  for (const auto& g : gates_) {
    for (int t : g.targets) {
      if (t < 0 || t >= num_qubits_) {
        throw std::invalid_argument("gate target " + std::to_string(t) +
                                    " out of range");
      }
    }
    if (g.gate == Gate::StatePrep) {
      if (gates_started) {
        throw std::invalid_argument(
            "STATEPREP is only allowed as a circuit prefix");
      }
      if (g.targets.empty()) {
        throw std::invalid_argument("STATEPREP needs at least one target");
      }
      for (int t : g.targets) {
        if (prepped[t]) {
          throw std::invalid_argument(
              "STATEPREP targets overlap an earlier preparation");
        }
        prepped[t] = true;
      }
      if (g.amplitudes.size() != (std::size_t{1} << g.targets.size())) {
        throw std::invalid_argument(
            "STATEPREP amplitude count must be 2^#targets");
      }
      double norm2 = 0;
      for (cplx a : g.amplitudes) norm2 += std::norm(a);
      if (std::abs(norm2 - 1.0) > kAlgebraTol) {
        throw std::invalid_argument("STATEPREP amplitudes are not unit norm");
      }
    } else {
      gates_started = true;
      if (static_cast<int>(g.targets.size()) != gate_arity(g.gate)) {
        throw std::invalid_argument(std::string(gate_name(g.gate)) +
                                    " has the wrong number of targets");
      }
      if (g.gate == Gate::CNOT && g.targets[0] == g.targets[1]) {
        throw std::invalid_argument("CNOT targets must be distinct");
      }
      if (!g.amplitudes.empty()) {
        throw std::invalid_argument("only STATEPREP carries amplitudes");
      }
    }
  }
}

CircuitDescription CircuitDescription::identity(int num_qubits,
                                                int num_output_qubits) {
  return CircuitDescription(num_qubits, num_output_qubits, {});
}

bool CircuitDescription::has_stateprep() const {
  for (const auto& g : gates_) {
    if (g.gate == Gate::StatePrep) return true;
  }
  return false;
}

CircuitDescription parse_circuit(std::string_view text,
                                 std::string_view source_name) {
  int num_qubits = -1;
  int num_out = -1;
  std::vector<GateApplication> gates;
  int line_no = 0;
  std::size_t pos = 0;
  int header_seen = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto toks = tokenize(line);
    if (toks.empty()) continue;

    if (header_seen == 0) {
      if (toks[0] != "qubits" || toks.size() != 2) {
        throw ParseError(std::string(source_name), line_no,
                         "expected 'qubits <n>'");
      }
      num_qubits = parse_int(toks[1], source_name, line_no);
      header_seen = 1;
      continue;
    }
    if (header_seen == 1) {
      if (toks[0] != "out" || toks.size() != 2) {
        throw ParseError(std::string(source_name), line_no,
                         "expected 'out <n>'");
      }
      num_out = parse_int(toks[1], source_name, line_no);
      header_seen = 2;
      continue;
    }

    Gate g;
    if (!parse_gate_name(toks[0], &g)) {
      throw ParseError(std::string(source_name), line_no,
                       "unknown instruction '" + std::string(toks[0]) + "'");
    }
    GateApplication app;
    app.gate = g;
    if (g == Gate::StatePrep) {
      std::size_t i = 1;
      for (; i < toks.size() && toks[i] != ":"; ++i) {
        app.targets.push_back(parse_int(toks[i], source_name, line_no));
      }
      if (i == toks.size()) {
        throw ParseError(std::string(source_name), line_no,
                         "STATEPREP is missing the ':' separator");
      }
      for (++i; i < toks.size(); ++i) {
        app.amplitudes.push_back(parse_amplitude(toks[i], source_name, line_no));
      }
    } else {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        app.targets.push_back(parse_int(toks[i], source_name, line_no));
      }
    }
    gates.push_back(std::move(app));

    // Surface structural violations with the offending line number.
    try {
      CircuitDescription probe(num_qubits, 0, gates);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string(source_name), line_no, e.what());
    }
  }
  if (header_seen < 2) {
    throw ParseError(std::string(source_name), line_no,
                     "missing 'qubits'/'out' header");
  }
  try {
    return CircuitDescription(num_qubits, num_out, std::move(gates));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(source_name), line_no, e.what());
  }
}

CircuitDescription load_circuit(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str(), path);
}

std::string serialize_circuit(const CircuitDescription& c) {
  std::string out = "qubits " + std::to_string(c.num_qubits()) + "\nout " +
                    std::to_string(c.num_output_qubits()) + "\n";
  for (const auto& g : c.gates()) {
    out += gate_name(g.gate);
    for (int t : g.targets) out += " " + std::to_string(t);
    if (g.gate == Gate::StatePrep) {
      out += " :";
      for (cplx a : g.amplitudes) out += " " + format_amplitude(a);
    }
    out += "\n";
  }
  return out;
}

void save_circuit(const CircuitDescription& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write circuit file: " + path);
  out << serialize_circuit(c);
}

void apply_gate(Vec& amps, int num_qubits, const GateApplication& g) {
  const auto n = static_cast<std::size_t>(amps.size());
  switch (g.gate) {
    case Gate::CNOT:
      kernels::apply_2q(amps.data(), n, bit_position(num_qubits, g.targets[0]),
                        bit_position(num_qubits, g.targets[1]),
                        gate_matrix(Gate::CNOT));
      return;
    case Gate::StatePrep: {
      std::vector<int> bits;
      bits.reserve(g.targets.size());
      for (int t : g.targets) bits.push_back(bit_position(num_qubits, t));
      kernels::stateprep(amps.data(), n, bits, g.amplitudes);
      return;
    }
    default:
      kernels::apply_1q(amps.data(), n, bit_position(num_qubits, g.targets[0]),
                        gate_matrix(g.gate));
      return;
  }
}

void apply_gate_density(Mat& rho, int num_qubits, const GateApplication& g) {
  if (g.gate == Gate::StatePrep) {
    throw std::invalid_argument("STATEPREP cannot act on a mixed state");
  }
  // Column-major rho as a flat array: row bits occupy the low q positions,
  // column bits the high q, so U rho U^dag is U on rows, conj(U) on columns.
  const auto n = static_cast<std::size_t>(rho.size());
  const cplx* m = gate_matrix(g.gate);
  if (g.gate == Gate::CNOT) {
    const int rb0 = bit_position(num_qubits, g.targets[0]);
    const int rb1 = bit_position(num_qubits, g.targets[1]);
    kernels::apply_2q(rho.data(), n, rb0, rb1, m);
    kernels::apply_2q(rho.data(), n, num_qubits + rb0, num_qubits + rb1, m);
  } else {
    const int rb = bit_position(num_qubits, g.targets[0]);
    const cplx mc[4] = {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]),
                        std::conj(m[3])};
    kernels::apply_1q(rho.data(), n, rb, m);
    kernels::apply_1q(rho.data(), n, num_qubits + rb, mc);
  }
}

void apply_circuit_density(Mat& rho, int num_qubits,
                           const CircuitDescription& c) {
  if (c.num_qubits() != num_qubits) {
    throw std::invalid_argument("apply_circuit_density: width mismatch");
  }
  for (const auto& g : c.gates()) apply_gate_density(rho, num_qubits, g);
}

PureState evaluate_pure(const CircuitDescription& c) {
  limits::require_pure(c.num_qubits(), "evaluate_pure");
  Vec amps = Vec::Zero(static_cast<Eigen::Index>(dim_of(c.num_qubits())));
  amps[0] = 1.0;
  for (const auto& g : c.gates()) apply_gate(amps, c.num_qubits(), g);
  return PureState(c.num_qubits(), std::move(amps));
}

DensityOperator output_state(const CircuitDescription& c) {
  const PureState psi = evaluate_pure(c);
  std::vector<int> keep(c.num_output_qubits());
  for (int i = 0; i < c.num_output_qubits(); ++i) keep[i] = i;
  return partial_trace(psi, keep);
}

CircuitDescription adjoint_circuit(const CircuitDescription& c) {
  if (c.has_stateprep()) {
    throw std::invalid_argument(
        "adjoint_circuit: STATEPREP has no gate-level adjoint");
  }
  std::vector<GateApplication> gates(c.gates().rbegin(), c.gates().rend());
  for (auto& g : gates) {
    switch (g.gate) {
      case Gate::S: g.gate = Gate::Sdg; break;
      case Gate::Sdg: g.gate = Gate::S; break;
      case Gate::T: g.gate = Gate::Tdg; break;
      case Gate::Tdg: g.gate = Gate::T; break;
      default: break;  // H, X, CNOT are self-inverse
    }
  }
  return CircuitDescription(c.num_qubits(), c.num_output_qubits(),
                            std::move(gates));
}

CircuitDescription remap_circuit(const CircuitDescription& c,
                                 const std::vector<int>& qubit_map,
                                 int new_num_qubits, int new_num_outputs) {
  if (static_cast<int>(qubit_map.size()) != c.num_qubits()) {
    throw std::invalid_argument("remap_circuit: map length mismatch");
  }
  std::vector<GateApplication> gates = c.gates();
  for (auto& g : gates) {
    for (int& t : g.targets) t = qubit_map[t];
  }
  return CircuitDescription(new_num_qubits, new_num_outputs, std::move(gates));
}

}  // namespace niqzk
