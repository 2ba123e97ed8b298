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

#include "niqzk/problems.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "niqzk/qcore.hpp"

namespace niqzk {

namespace fs = std::filesystem;

namespace {

double format_double_value(double v, char* buf, std::size_t n) {
  std::snprintf(buf, n, "%.12f", v);
  return v;
}

std::string fmt(double v) {
  char buf[48];
  format_double_value(v, buf, sizeof buf);
  return buf;
}

// Single-qubit Bloch vector of rho = (I + r. sigma)/2.
std::array<double, 3> bloch_vector(const DensityOperator& rho) {
  const Mat& m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(),
          (m(0, 0) - m(1, 1)).real()};
}

// One-shot tomography estimate of the Bloch vector: trials split across the
// X, Y, Z bases, each shot a Bernoulli draw from the exact expectation.
std::array<double, 3> sampled_bloch_vector(const DensityOperator& rho,
                                           int trials, Rng& rng) {
  const auto r = bloch_vector(rho);
  std::array<double, 3> est{};
  const int per_axis = trials / 3;
  for (int axis = 0; axis < 3; ++axis) {
    const int shots = (axis == 2) ? trials - 2 * per_axis : per_axis;
    const double p_plus = std::clamp((1.0 + r[axis]) / 2.0, 0.0, 1.0);
    long sum = 0;
    for (int s = 0; s < shots; ++s) sum += rng.bernoulli(p_plus) ? 1 : -1;
    est[axis] = shots > 0 ? static_cast<double>(sum) / shots : 0.0;
  }
  return est;
}

double bloch_norm(const std::array<double, 3>& r) {
  return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

// Threshold comparisons carry a slack far below every promise gap in use,
// so exact-arithmetic verdicts survive ~1e-16 simulation noise.
constexpr double kDecisionSlack = 1e-12;

void require_one_output(int q_out, const char* op) {
  if (q_out != 1) {
    throw std::invalid_argument(std::string(op) +
                                " needs exactly one output qubit, got " +
                                std::to_string(q_out));
  }
}

}  // namespace

std::string_view verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::Accept: return "Accept";
    case VerdictKind::Reject: return "Reject";
    case VerdictKind::PromiseViolated: return "PromiseViolated";
  }
  return "?";
}

void validate_thresholds(double alpha, double beta) {
  if (!(0.0 <= alpha && alpha < beta && beta <= 1.0)) {
    throw std::invalid_argument("thresholds must satisfy 0 <= alpha < beta <= 1");
  }
}

int QsciInstance::num_output_qubits() const {
  if (const auto* c = std::get_if<CircuitDescription>(&source)) {
    return c->num_output_qubits();
  }
  return std::get<ChannelDescription>(source).num_output_qubits();
}

Graph::Graph(int num_vertices, std::vector<std::pair<int, int>> edges)
    : n_(num_vertices), adj_(static_cast<std::size_t>(n_) * n_, 0) {
  if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
      throw std::invalid_argument("edge endpoint out of range");
    }
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    adj_[i * n_ + j] = 1;
    adj_[j * n_ + i] = 1;
  }
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::uint64_t Graph::adjacency_bits() const {
  if (n_ > 11) {
    throw std::invalid_argument("adjacency_bits supports at most 11 vertices");
  }
  std::uint64_t bits = 0;
  int k = 0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j, ++k) {
      if (has_edge(i, j)) bits |= std::uint64_t{1} << k;
    }
  }
  return bits;
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v]) {
      throw std::invalid_argument("not a permutation");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i;
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> img(image_.size());
  for (int i = 0; i < size(); ++i) img[image_[i]] = i;
  return Permutation(std::move(img));
}

bool Permutation::advance() {
  return std::next_permutation(image_.begin(), image_.end());
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
  if (p.size() != g.num_vertices()) {
    throw std::invalid_argument("permutation size differs from vertex count");
  }
  std::vector<std::pair<int, int>> edges;
  for (auto [i, j] : g.edges()) edges.emplace_back(p(i), p(j));
  return Graph(g.num_vertices(), std::move(edges));
}

std::uint64_t automorphism_count(const Graph& g) {
  if (g.num_vertices() > 8) {
    throw std::invalid_argument(
        "automorphism_count enumerates n! permutations; n <= 8 required");
  }
  Permutation p = Permutation::identity(g.num_vertices());
  std::uint64_t count = 0;
  do {
    if (apply_permutation(g, p) == g) ++count;
  } while (p.advance());
  return count;
}

DensityOperator instance_output_state(const QsciInstance& inst) {
  if (const auto* c = std::get_if<CircuitDescription>(&inst.source)) {
    return output_state(*c);
  }
  return channel_output(std::get<ChannelDescription>(inst.source));
}

double distance_to_identity(const QsciInstance& inst) {
  const DensityOperator rho = instance_output_state(inst);
  return trace_distance(rho,
                        DensityOperator::maximally_mixed(rho.num_qubits()));
}

Verdict closeness_verdict(double distance, double alpha, double beta) {
  validate_thresholds(alpha, beta);
  if (distance <= alpha + kDecisionSlack) {
    return {VerdictKind::Accept, distance};
  }
  if (distance >= beta - kDecisionSlack) {
    return {VerdictKind::Reject, distance};
  }
  return {VerdictKind::PromiseViolated, distance};
}

Verdict distinguishability_verdict(double distance, double alpha,
                                   double beta) {
  validate_thresholds(alpha, beta);
  if (distance >= beta - kDecisionSlack) {
    return {VerdictKind::Accept, distance};
  }
  if (distance <= alpha + kDecisionSlack) {
    return {VerdictKind::Reject, distance};
  }
  return {VerdictKind::PromiseViolated, distance};
}

Verdict decide_qsci(const QsciInstance& inst) {
  return closeness_verdict(distance_to_identity(inst), inst.alpha, inst.beta);
}

Verdict decide_qsd(const QsdInstance& inst) {
  validate_thresholds(inst.alpha, inst.beta);
  if (inst.circuit0.num_output_qubits() != inst.circuit1.num_output_qubits()) {
    throw std::invalid_argument("QSD circuits must share the output width");
  }
  const double d = trace_distance(output_state(inst.circuit0),
                                  output_state(inst.circuit1));
  return distinguishability_verdict(d, inst.alpha, inst.beta);
}

Verdict decide_1qsci_exact(const QsciInstance& inst) {
  validate_thresholds(inst.alpha, inst.beta);
  require_one_output(inst.num_output_qubits(), "decide_1qsci");
  const double d = distance_to_identity(inst);
  const double mid = (inst.alpha + inst.beta) / 2.0;
  return {d <= mid ? VerdictKind::Accept : VerdictKind::Reject, d};
}

Verdict decide_1qsci_sampled(const QsciInstance& inst, int trials, Rng& rng) {
  validate_thresholds(inst.alpha, inst.beta);
  require_one_output(inst.num_output_qubits(), "decide_1qsci");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const DensityOperator rho = instance_output_state(inst);
  const double d = bloch_norm(sampled_bloch_vector(rho, trials, rng)) / 2.0;
  const double mid = (inst.alpha + inst.beta) / 2.0;
  return {d <= mid ? VerdictKind::Accept : VerdictKind::Reject, d};
}

Verdict decide_1qsd_exact(const QsdInstance& inst) {
  validate_thresholds(inst.alpha, inst.beta);
  require_one_output(inst.circuit0.num_output_qubits(), "decide_1qsd");
  require_one_output(inst.circuit1.num_output_qubits(), "decide_1qsd");
  const double d = trace_distance(output_state(inst.circuit0),
                                  output_state(inst.circuit1));
  const double mid = (inst.alpha + inst.beta) / 2.0;
  return {d >= mid ? VerdictKind::Accept : VerdictKind::Reject, d};
}

Verdict decide_1qsd_sampled(const QsdInstance& inst, int trials, Rng& rng) {
  validate_thresholds(inst.alpha, inst.beta);
  require_one_output(inst.circuit0.num_output_qubits(), "decide_1qsd");
  require_one_output(inst.circuit1.num_output_qubits(), "decide_1qsd");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  const auto r0 =
      sampled_bloch_vector(output_state(inst.circuit0), trials, rng);
  const auto r1 =
      sampled_bloch_vector(output_state(inst.circuit1), trials, rng);
  const std::array<double, 3> diff = {r0[0] - r1[0], r0[1] - r1[1],
                                      r0[2] - r1[2]};
  const double d = bloch_norm(diff) / 2.0;
  const double mid = (inst.alpha + inst.beta) / 2.0;
  return {d >= mid ? VerdictKind::Accept : VerdictKind::Reject, d};
}

Graph parse_graph(std::string_view text, std::string_view source) {
  int line_no = 0;
  std::size_t pos = 0;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::istringstream ss{std::string(line)};
    std::string head;
    if (!(ss >> head)) continue;
    if (n < 0) {
      int count = 0;
      if (head != "n" || !(ss >> count)) {
        throw ParseError(std::string(source), line_no, "expected 'n <count>'");
      }
      n = count;
      continue;
    }
    if (head != "edge") {
      throw ParseError(std::string(source), line_no, "expected 'edge i j'");
    }
    int i = 0, j = 0;
    if (!(ss >> i >> j)) {
      throw ParseError(std::string(source), line_no, "expected 'edge i j'");
    }
    edges.emplace_back(i, j);
  }
  if (n < 0) {
    throw ParseError(std::string(source), line_no, "missing 'n <count>'");
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(source), line_no, e.what());
  }
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str(), path);
}

std::string serialize_graph(const Graph& g) {
  std::string out = "n " + std::to_string(g.num_vertices()) + "\n";
  for (auto [i, j] : g.edges()) {
    out += "edge " + std::to_string(i) + " " + std::to_string(j) + "\n";
  }
  return out;
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << serialize_graph(g);
}

namespace {

std::map<std::string, std::string> parse_kv(std::string_view text,
                                            std::string_view source) {
  std::map<std::string, std::string> kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(std::string(source), line_no, "expected 'key=value'");
    }
    kv[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  return kv;
}

double kv_double(const std::map<std::string, std::string>& kv,
                 const std::string& key, const std::string& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw ParseError(source, 0, "missing required key '" + key + "'");
  }
  double v = 0;
  const auto& s = it->second;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(source, 0, "bad number for key '" + key + "'");
  }
  return v;
}

std::string resolve(const std::string& base_file, const std::string& rel) {
  const fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(base_file).parent_path() / p).string();
}

void write_kv_file(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  for (const auto& [k, v] : kv) out << k << "=" << v << "\n";
}

std::string stem_path(const std::string& path) {
  fs::path p(path);
  fs::path dir = p.parent_path();
  return (dir / p.stem()).string();
}

std::vector<std::pair<std::string, std::string>> provenance_lines(
    const std::map<std::string, std::string>& provenance) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : provenance) out.emplace_back("provenance." + k, v);
  return out;
}

}  // namespace

LoadedInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto kv = parse_kv(buf.str(), path);

  std::map<std::string, std::string> provenance;
  for (const auto& [k, v] : kv) {
    if (k.rfind("provenance.", 0) == 0) {
      provenance[k.substr(11)] = v;
    }
  }
  const double alpha = kv_double(kv, "alpha", path);
  const double beta = kv_double(kv, "beta", path);
  validate_thresholds(alpha, beta);

  if (kv.count("graph")) {
    return {GnaInstance{alpha, beta, load_graph(resolve(path, kv.at("graph")))},
            std::move(provenance)};
  }
  if (kv.count("circuit0") && kv.count("circuit1")) {
    return {QsdInstance{alpha, beta,
                        load_circuit(resolve(path, kv.at("circuit0"))),
                        load_circuit(resolve(path, kv.at("circuit1")))},
            std::move(provenance)};
  }
  if (kv.count("circuit")) {
    return {QsciInstance{alpha, beta,
                         load_circuit(resolve(path, kv.at("circuit")))},
            std::move(provenance)};
  }
  if (kv.count("channel")) {
    return {QsciInstance{alpha, beta,
                         load_channel(resolve(path, kv.at("channel")))},
            std::move(provenance)};
  }
  throw ParseError(path, 0,
                   "instance needs one of: circuit=, channel=, "
                   "circuit0=/circuit1=, graph=");
}

void save_instance(const QsciInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance) {
  validate_thresholds(inst.alpha, inst.beta);
  const std::string stem = stem_path(path);
  std::vector<std::pair<std::string, std::string>> kv = {
      {"alpha", fmt(inst.alpha)}, {"beta", fmt(inst.beta)}};
  if (const auto* c = std::get_if<CircuitDescription>(&inst.source)) {
    save_circuit(*c, stem + ".qc");
    kv.emplace_back("circuit", fs::path(stem + ".qc").filename().string());
  } else {
    save_channel(std::get<ChannelDescription>(inst.source), stem + ".qch");
    kv.emplace_back("channel", fs::path(stem + ".qch").filename().string());
  }
  for (auto& line : provenance_lines(provenance)) kv.push_back(line);
  write_kv_file(path, kv);
}

void save_instance(const QsdInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance) {
  validate_thresholds(inst.alpha, inst.beta);
  const std::string stem = stem_path(path);
  save_circuit(inst.circuit0, stem + "_0.qc");
  save_circuit(inst.circuit1, stem + "_1.qc");
  std::vector<std::pair<std::string, std::string>> kv = {
      {"alpha", fmt(inst.alpha)},
      {"beta", fmt(inst.beta)},
      {"circuit0", fs::path(stem + "_0.qc").filename().string()},
      {"circuit1", fs::path(stem + "_1.qc").filename().string()}};
  for (auto& line : provenance_lines(provenance)) kv.push_back(line);
  write_kv_file(path, kv);
}

void save_instance(const GnaInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance) {
  validate_thresholds(inst.alpha, inst.beta);
  const std::string stem = stem_path(path);
  save_graph(inst.graph, stem + ".graph");
  std::vector<std::pair<std::string, std::string>> kv = {
      {"alpha", fmt(inst.alpha)},
      {"beta", fmt(inst.beta)},
      {"graph", fs::path(stem + ".graph").filename().string()}};
  for (auto& line : provenance_lines(provenance)) kv.push_back(line);
  write_kv_file(path, kv);
}

}  // namespace niqzk
