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

#include "niqzk/protocol.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "niqzk/kernels.hpp"
#include "niqzk/rng.hpp"

namespace niqzk {

namespace fs = std::filesystem;

namespace {

void validate_prover(const ProtocolSpec& spec, const ProverStrategy& prover) {
  const auto d = static_cast<Eigen::Index>(dim_of(spec.q_m + spec.q_p));
  if (prover.unitary.rows() != d || prover.unitary.cols() != d) {
    throw std::invalid_argument("prover unitary must act on M (x) P");
  }
  if (!is_unitary(prover.unitary, kAlgebraTol)) {
    throw std::invalid_argument("prover strategy is not unitary");
  }
}

std::vector<int> iota_vec(int first, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = first + i;
  return v;
}

// State after the prover (and optionally the verifier) act on the initial
// state.
PureState run_protocol(const ProtocolSpec& spec, const ProverStrategy& prover,
                       bool apply_verifier) {
  validate_prover(spec, prover);
  PureState psi = initial_state(spec);
  psi = apply_on_qubits(psi, iota_vec(spec.q_v, spec.q_m + spec.q_p),
                        prover.unitary);
  if (apply_verifier) {
    Vec amps = psi.amplitudes();
    for (const auto& g : spec.verifier.gates()) {
      apply_gate(amps, spec.total_qubits(), g);
    }
    psi = PureState(spec.total_qubits(), std::move(amps));
  }
  return psi;
}

}  // namespace

RegisterPartition ProtocolSpec::layout() const {
  return RegisterPartition({{"Vbar", q_v - q_s},
                            {"S", q_s},
                            {"M", q_m},
                            {"Pbar", q_p - q_s},
                            {"Ps", q_s}});
}

void ProtocolSpec::validate() const {
  if (q_v < 0 || q_m < 0 || q_p < 0 || q_s < 0) {
    throw std::invalid_argument("register sizes must be non-negative");
  }
  if (q_s > q_v || q_s > q_p) {
    throw std::invalid_argument("q_s must satisfy q_s <= min(q_v, q_p)");
  }
  if (verifier.num_qubits() != q_v + q_m) {
    throw std::invalid_argument("verifier circuit width must be q_v + q_m");
  }
  if (verifier.has_stateprep()) {
    throw std::invalid_argument("verifier circuits must be gate-only");
  }
  if (output_qubit < 0 || output_qubit >= q_v) {
    throw std::invalid_argument("output qubit must lie in the V register");
  }
  std::vector<bool> seen(q_v + q_m, false);
  for (int q : accept_if_zero) {
    if (q < 0 || q >= q_v + q_m || seen[q]) {
      throw std::invalid_argument("bad accept_if_zero qubit list");
    }
    seen[q] = true;
  }
}

ProverStrategy identity_prover(const ProtocolSpec& spec) {
  const auto d = static_cast<Eigen::Index>(dim_of(spec.q_m + spec.q_p));
  return ProverStrategy{Mat::Identity(d, d)};
}

PureState initial_state(const ProtocolSpec& spec) {
  spec.validate();
  const int total = spec.total_qubits();
  limits::require_pure(total, "initial_state");
  const auto layout = spec.layout();
  const int s_off = layout.offset("S");
  const int ps_off = layout.offset("Ps");
  Vec amps = Vec::Zero(static_cast<Eigen::Index>(dim_of(total)));
  const std::uint64_t pairs = dim_of(spec.q_s);
  const double a = 1.0 / std::sqrt(static_cast<double>(pairs));
  for (std::uint64_t z = 0; z < pairs; ++z) {
    std::uint64_t idx = 0;
    for (int b = 0; b < spec.q_s; ++b) {
      if ((z >> (spec.q_s - 1 - b)) & 1) {
        idx |= std::uint64_t{1} << bit_position(total, s_off + b);
        idx |= std::uint64_t{1} << bit_position(total, ps_off + b);
      }
    }
    amps[static_cast<Eigen::Index>(idx)] = a;
  }
  return PureState(total, std::move(amps));
}

double acceptance_probability(const ProtocolSpec& spec,
                              const ProverStrategy& prover) {
  const PureState psi = run_protocol(spec, prover, true);
  const auto n = static_cast<std::size_t>(psi.amplitudes().size());
  const int total = spec.total_qubits();
  if (!spec.accept_if_zero.empty()) {
    std::vector<int> bits;
    bits.reserve(spec.accept_if_zero.size());
    for (int q : spec.accept_if_zero) bits.push_back(bit_position(total, q));
    return kernels::prob_bits_zero(psi.amplitudes().data(), n, bits);
  }
  return kernels::prob_bit_one(psi.amplitudes().data(), n,
                               bit_position(total, spec.output_qubit));
}

ProtocolSpec build_qsci_verifier(const CircuitDescription& r,
                                 int extra_prover_qubits) {
  const int q_out = r.num_output_qubits();
  const int q_in = r.num_qubits();
  if (q_out < 1) {
    throw std::invalid_argument(
        "build_qsci_verifier: circuit must have at least one output qubit");
  }
  if (r.has_stateprep()) {
    throw std::invalid_argument(
        "build_qsci_verifier: the verifier applies the circuit adjoint, so "
        "the circuit must be gate-only");
  }
  if (extra_prover_qubits < 0) {
    throw std::invalid_argument("extra prover qubits must be non-negative");
  }
  ProtocolSpec spec;
  spec.q_v = q_out + 1;  // flag qubit + S
  spec.q_m = q_in - q_out;
  spec.q_s = q_out;
  spec.q_p = q_out + extra_prover_qubits;
  // R's outputs sit on S (qubits 1..q_out), the rest on M, so shifting every
  // target by one lands R^dag on the (M, S) pair.
  std::vector<int> shift(q_in);
  for (int i = 0; i < q_in; ++i) shift[i] = i + 1;
  spec.verifier =
      remap_circuit(adjoint_circuit(r), shift, q_in + 1, 0);
  spec.output_qubit = 0;
  spec.accept_if_zero = iota_vec(1, q_in);
  spec.validate();
  return spec;
}

ProverStrategy honest_prover(const ProtocolSpec& spec,
                             const CircuitDescription& r) {
  if (spec.q_s != r.num_output_qubits() ||
      spec.q_v + spec.q_m != r.num_qubits() + 1) {
    throw std::invalid_argument(
        "honest_prover: spec does not match the circuit");
  }
  const DensityOperator xi = output_state(r);
  const double d =
      trace_distance(xi, DensityOperator::maximally_mixed(spec.q_s));
  if (d > 1e-6) {
    throw std::invalid_argument(
        "honest_prover: not a yes-instance (distance to maximally mixed is " +
        std::to_string(d) + ")");
  }
  // Target |0>_Vbar (x) R|0> on (S, M) (x) |0...0> over all of P: the honest
  // prover steers the shared entanglement entirely into R's output.
  const PureState target =
      tensor(tensor(PureState::zero(spec.q_v - spec.q_s), evaluate_pure(r)),
             PureState::zero(spec.q_p));
  ProverStrategy prover{uhlmann_unitary(initial_state(spec), target,
                                        iota_vec(0, spec.q_v))};
  return prover;
}

double optimal_cheat_bound(const ProtocolSpec& spec,
                           const CircuitDescription& r) {
  if (spec.q_s != r.num_output_qubits()) {
    throw std::invalid_argument(
        "optimal_cheat_bound: spec does not match the circuit");
  }
  const double f = fidelity(output_state(r),
                            DensityOperator::maximally_mixed(spec.q_s));
  return f * f;
}

DensityOperator verifier_view(const ProtocolSpec& spec,
                              const ProverStrategy& prover) {
  const PureState psi = run_protocol(spec, prover, false);
  return partial_trace(psi, iota_vec(0, spec.q_v + spec.q_m));
}

double zk_audit(const ProtocolSpec& spec, const ProverStrategy& prover,
                const DensityOperator& sim) {
  if (sim.num_qubits() != spec.q_v + spec.q_m) {
    throw std::invalid_argument("zk_audit: simulator width must be q_v + q_m");
  }
  return trace_distance(sim, verifier_view(spec, prover));
}

double decide_via_simulator(const CircuitDescription& verifier,
                            int output_qubit, const DensityOperator& sim) {
  const int width = verifier.num_qubits();
  if (sim.num_qubits() != width) {
    throw std::invalid_argument(
        "decide_via_simulator: simulator width must match the verifier");
  }
  if (output_qubit < 0 || output_qubit >= width) {
    throw std::invalid_argument("decide_via_simulator: bad output qubit");
  }
  Mat rho = sim.matrix();
  apply_circuit_density(rho, width, verifier);
  const std::uint64_t mask = std::uint64_t{1}
                             << bit_position(width, output_qubit);
  double p = 0;
  for (std::uint64_t i = 0; i < dim_of(width); ++i) {
    if (i & mask) p += rho(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(i)).real();
  }
  return std::clamp(p, 0.0, 1.0);
}

CircuitDescription honest_simulator_circuit(const CircuitDescription& r) {
  const int q = r.num_qubits();
  std::vector<int> shift(q);
  for (int i = 0; i < q; ++i) shift[i] = i + 1;
  return remap_circuit(r, shift, q + 1, q + 1);
}

namespace {

// Cheat-search internals. Acceptance of prover U decomposes over an
// orthonormal basis {chi_m} of the acceptance projector's range as
//   f(U) = sum_m |tr(U B_m)|^2,
// with B_m read off the initial state and chi_m slices across the V / MP
// cut. A Givens rotation touching rows i, j changes each trace through four
// matrix entries only, so the optimal 2x2 block has a cheap closed-form
// ascent.
struct CheatObjective {
  Eigen::Index dim_v = 0;
  Eigen::Index dim_mp = 0;
  std::vector<Mat> b;  // one per range basis vector

  double eval(const Mat& u) const {
    double f = 0;
    for (const auto& bm : b) f += std::norm((u * bm).trace());
    return f;
  }
};

CheatObjective build_objective(const ProtocolSpec& spec) {
  const int total = spec.total_qubits();
  CheatObjective obj;
  obj.dim_v = static_cast<Eigen::Index>(dim_of(spec.q_v));
  obj.dim_mp = static_cast<Eigen::Index>(dim_of(spec.q_m + spec.q_p));
  if (obj.dim_mp > 256) {
    throw std::invalid_argument(
        "numeric_cheat_search supports M (x) P dimensions up to 2^8");
  }

  // Free qubits: everything outside the measured acceptance set.
  std::vector<int> measured;
  if (!spec.accept_if_zero.empty()) {
    measured = spec.accept_if_zero;
  } else {
    measured = {spec.output_qubit};
  }
  std::vector<bool> is_measured(total, false);
  for (int q : measured) is_measured[q] = true;
  std::vector<int> free_qubits;
  for (int q = 0; q < total; ++q) {
    if (!is_measured[q]) free_qubits.push_back(q);
  }
  const std::uint64_t rank = dim_of(static_cast<int>(free_qubits.size()));
  if (rank * dim_of(2 * (spec.q_m + spec.q_p)) > (std::uint64_t{1} << 26)) {
    throw std::invalid_argument(
        "numeric_cheat_search: acceptance projector rank is too large");
  }

  const PureState psi0 = initial_state(spec);
  const auto n = static_cast<std::size_t>(psi0.amplitudes().size());
  const CircuitDescription v_adj = adjoint_circuit(spec.verifier);

  // Acceptance event in the computational basis: accept_if_zero qubits all
  // zero, or (general mode) the output qubit set to one.
  const std::uint64_t accept_value =
      spec.accept_if_zero.empty()
          ? std::uint64_t{1} << bit_position(total, spec.output_qubit)
          : 0;

  obj.b.reserve(rank);
  for (std::uint64_t m = 0; m < rank; ++m) {
    std::uint64_t idx = accept_value;
    for (std::size_t j = 0; j < free_qubits.size(); ++j) {
      if ((m >> (free_qubits.size() - 1 - j)) & 1) {
        idx |= std::uint64_t{1} << bit_position(total, free_qubits[j]);
      }
    }
    Vec chi = Vec::Zero(static_cast<Eigen::Index>(n));
    chi[static_cast<Eigen::Index>(idx)] = 1.0;
    for (const auto& g : v_adj.gates()) apply_gate(chi, total, g);

    // B_m[y, x] = sum_v psi0[v, y] conj(chi[v, x]).
    Eigen::Map<const Mat> psi_mat(psi0.amplitudes().data(), obj.dim_mp,
                                  obj.dim_v);
    Eigen::Map<const Mat> chi_mat(chi.data(), obj.dim_mp, obj.dim_v);
    obj.b.push_back(psi_mat * chi_mat.adjoint());
  }
  return obj;
}

// Best unitary 2x2 block for the coordinates (i, j): alternate between the
// optimal dual weights and the polar-optimal block. Monotone in f.
struct BlockResult {
  Mat g = Mat::Identity(2, 2);
  double f = 0;
};

BlockResult best_block(const std::vector<cplx>& trace_rest,
                       const std::vector<Mat>& corners) {
  const std::size_t rank = trace_rest.size();
  BlockResult out;
  Mat g = Mat::Identity(2, 2);
  double f_prev = -1;
  for (int iter = 0; iter < 8; ++iter) {
    // t_m(g) = trace_rest[m] + <g, corners[m]> (entrywise, unconjugated).
    double f = 0;
    Mat w = Mat::Zero(2, 2);
    for (std::size_t m = 0; m < rank; ++m) {
      const cplx t = trace_rest[m] + (g.array() * corners[m].array()).sum();
      f += std::norm(t);
      w += std::conj(t) * corners[m];
    }
    if (f <= f_prev + 1e-15) {
      out.f = f;
      out.g = g;
      return out;
    }
    f_prev = f;
    out.f = f;
    out.g = g;
    // The minorant is Re tr(g w^T); over unitaries its maximizer is the
    // adjoint polar factor of w^T.
    Eigen::JacobiSVD<Mat> svd(w.transpose(),
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    g = svd.matrixV() * svd.matrixU().adjoint();
  }
  return out;
}

}  // namespace

CheatSearchResult numeric_cheat_search(const ProtocolSpec& spec,
                                       const CheatSearchOptions& options) {
  spec.validate();
  if (options.restarts < 1 || options.sweeps < 1) {
    throw std::invalid_argument("cheat search needs restarts, sweeps >= 1");
  }
  const CheatObjective obj = build_objective(spec);
  const Eigen::Index d = obj.dim_mp;
  const std::size_t rank = obj.b.size();
  const Rng master(options.seed);

  CheatSearchResult best;
  best.prover.unitary = Mat::Identity(d, d);
  best.acceptance = -1;

  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng = master.fork(static_cast<std::uint64_t>(restart));
    Mat u = (restart == 0) ? Mat::Identity(d, d)
                           : haar_unitary(static_cast<int>(d), rng);
    std::vector<Mat> c(rank);
    std::vector<cplx> t(rank);
    for (std::size_t m = 0; m < rank; ++m) {
      c[m] = u * obj.b[m];
      t[m] = c[m].trace();
    }
    double f = 0;
    for (std::size_t m = 0; m < rank; ++m) f += std::norm(t[m]);

    std::vector<cplx> trace_rest(rank);
    std::vector<Mat> corners(rank, Mat(2, 2));
    for (int sweep = 0; sweep < options.sweeps; ++sweep) {
      const double f_before = f;
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
          for (std::size_t m = 0; m < rank; ++m) {
            corners[m](0, 0) = c[m](i, i);
            corners[m](0, 1) = c[m](j, i);
            corners[m](1, 0) = c[m](i, j);
            corners[m](1, 1) = c[m](j, j);
            trace_rest[m] = t[m] - c[m](i, i) - c[m](j, j);
          }
          const BlockResult blk = best_block(trace_rest, corners);
          if (blk.f > f + 1e-14) {
            f = blk.f;
            const Mat g = blk.g;
            // Update rows i and j of U and of every C_m.
            const Vec ui = u.row(i).transpose();
            const Vec uj = u.row(j).transpose();
            u.row(i) = (g(0, 0) * ui + g(0, 1) * uj).transpose();
            u.row(j) = (g(1, 0) * ui + g(1, 1) * uj).transpose();
            for (std::size_t m = 0; m < rank; ++m) {
              const Vec ci = c[m].row(i).transpose();
              const Vec cj = c[m].row(j).transpose();
              c[m].row(i) = (g(0, 0) * ci + g(0, 1) * cj).transpose();
              c[m].row(j) = (g(1, 0) * ci + g(1, 1) * cj).transpose();
              t[m] = trace_rest[m] + c[m](i, i) + c[m](j, j);
            }
          }
        }
      }
      if (f - f_before < 1e-12) break;
    }

    // Snap the accumulated rotations back to an exact unitary and score the
    // candidate through the production acceptance path.
    Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ProverStrategy candidate{svd.matrixU() * svd.matrixV().adjoint()};
    const double accept = acceptance_probability(spec, candidate);
    if (accept > best.acceptance) {
      best.acceptance = accept;
      best.prover = std::move(candidate);
    }
  }
  return best;
}

ProtocolSpecFile load_protocol_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open protocol spec: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::map<std::string, std::string> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string line =
        text.substr(pos, eol == std::string::npos ? text.size() - pos
                                                  : eol - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path, line_no, "expected 'key=value'");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  auto need_int = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw ParseError(path, 0, std::string("missing key '") + key + "'");
    }
    int v = 0;
    const auto& s = it->second;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw ParseError(path, 0, std::string("bad integer for '") + key + "'");
    }
    return v;
  };
  auto resolve = [&](const std::string& rel) {
    const fs::path p(rel);
    if (p.is_absolute()) return rel;
    return (fs::path(path).parent_path() / p).string();
  };

  ProtocolSpecFile out;
  out.spec.q_v = need_int("q_v");
  out.spec.q_m = need_int("q_m");
  out.spec.q_p = need_int("q_p");
  out.spec.q_s = need_int("q_s");
  out.spec.output_qubit = need_int("output_qubit");
  if (!kv.count("verifier")) throw ParseError(path, 0, "missing key 'verifier'");
  out.spec.verifier = load_circuit(resolve(kv.at("verifier")));
  if (kv.count("accept_if_zero")) {
    std::istringstream ss(kv.at("accept_if_zero"));
    int q = 0;
    while (ss >> q) out.spec.accept_if_zero.push_back(q);
  }
  if (kv.count("source_circuit")) {
    out.source_circuit = load_circuit(resolve(kv.at("source_circuit")));
  }
  out.spec.validate();
  return out;
}

void save_protocol_spec(const ProtocolSpec& spec, const std::string& path,
                        const CircuitDescription* source_circuit) {
  spec.validate();
  fs::path p(path);
  const std::string stem = (p.parent_path() / p.stem()).string();
  const std::string verifier_file = stem + "_verifier.qc";
  save_circuit(spec.verifier, verifier_file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write protocol spec: " + path);
  out << "q_v=" << spec.q_v << "\nq_m=" << spec.q_m << "\nq_p=" << spec.q_p
      << "\nq_s=" << spec.q_s << "\noutput_qubit=" << spec.output_qubit
      << "\nverifier=" << fs::path(verifier_file).filename().string() << "\n";
  if (!spec.accept_if_zero.empty()) {
    out << "accept_if_zero=";
    for (std::size_t i = 0; i < spec.accept_if_zero.size(); ++i) {
      out << (i ? " " : "") << spec.accept_if_zero[i];
    }
    out << "\n";
  }
  if (source_circuit != nullptr) {
    const std::string source_file = stem + "_source.qc";
    save_circuit(*source_circuit, source_file);
    out << "source_circuit=" << fs::path(source_file).filename().string()
        << "\n";
  }
}

}  // namespace niqzk
