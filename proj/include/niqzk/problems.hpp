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

#ifndef NIQZK_PROBLEMS_HPP
#define NIQZK_PROBLEMS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "niqzk/channels.hpp"
#include "niqzk/circuits.hpp"
#include "niqzk/rng.hpp"

namespace niqzk {

enum class VerdictKind { Accept, Reject, PromiseViolated };

std::string_view verdict_name(VerdictKind v);

// Decision plus the computed distance it was derived from. Off-promise
// inputs get an explicit PromiseViolated instead of an arbitrary answer.
struct Verdict {
  VerdictKind kind;
  double witness;
};

// (alpha, beta)-closeness-to-identity instance; the judged state is the
// output of a circuit or of a channel.
struct QsciInstance {
  double alpha;
  double beta;
  std::variant<CircuitDescription, ChannelDescription> source;

  int num_output_qubits() const;
};

// (alpha, beta)-distinguishability instance over a circuit pair.
struct QsdInstance {
  double alpha;
  double beta;
  CircuitDescription circuit0;
  CircuitDescription circuit1;
};

void validate_thresholds(double alpha, double beta);

// Simple undirected graph: symmetric 0/1 adjacency, zero diagonal.
class Graph {
 public:
  Graph(int num_vertices, std::vector<std::pair<int, int>> edges);

  int num_vertices() const { return n_; }
  bool has_edge(int i, int j) const { return adj_[i * n_ + j] != 0; }
  std::vector<std::pair<int, int>> edges() const;
  std::uint64_t adjacency_bits() const;  // upper triangle, row-major

  bool operator==(const Graph& other) const = default;

 private:
  int n_;
  std::vector<std::uint8_t> adj_;
};

class Permutation {
 public:
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[i]; }
  const std::vector<int>& image() const { return image_; }
  Permutation inverse() const;

  // Lexicographically next image array; false after the last one.
  bool advance();

 private:
  std::vector<int> image_;
};

Graph apply_permutation(const Graph& g, const Permutation& p);

// |Aut(G)| by enumeration over all n! permutations; requires n <= 8.
std::uint64_t automorphism_count(const Graph& g);

// Output state of the instance (circuit or channel backed).
DensityOperator instance_output_state(const QsciInstance& inst);

// trace_distance(output state, I/2^q_out).
double distance_to_identity(const QsciInstance& inst);

// Threshold rules shared by the deciders (with a tiny slack so exact
// verdicts survive simulation round-off): closeness accepts small
// distances, distinguishability accepts large ones.
Verdict closeness_verdict(double distance, double alpha, double beta);
Verdict distinguishability_verdict(double distance, double alpha, double beta);

Verdict decide_qsci(const QsciInstance& inst);
Verdict decide_qsd(const QsdInstance& inst);

// BQP deciders for the one-output-qubit restrictions: threshold at
// (alpha+beta)/2. Exact mode simulates; sampled mode estimates the Bloch
// vector by Pauli tomography with `trials` single-shot measurements.
Verdict decide_1qsci_exact(const QsciInstance& inst);
Verdict decide_1qsci_sampled(const QsciInstance& inst, int trials, Rng& rng);
Verdict decide_1qsd_exact(const QsdInstance& inst);
Verdict decide_1qsd_sampled(const QsdInstance& inst, int trials, Rng& rng);

// Graph file format: "n <count>" then "edge i j" lines.
Graph parse_graph(std::string_view text, std::string_view source = "<string>");
Graph load_graph(const std::string& path);
std::string serialize_graph(const Graph& g);
void save_graph(const Graph& g, const std::string& path);

// Instance files: key=value lines (alpha=, beta=, circuit=, channel=,
// circuit0=, circuit1=, graph=) plus optional provenance.* entries.
// Referenced paths are resolved relative to the instance file.
struct GnaInstance {
  double alpha;
  double beta;
  Graph graph;
};

struct LoadedInstance {
  std::variant<QsciInstance, QsdInstance, GnaInstance> value;
  std::map<std::string, std::string> provenance;
};

LoadedInstance load_instance(const std::string& path);

// Writes the instance file along with any referenced circuit/channel files
// (derived names: <stem>.qc / <stem>.qch / <stem>.graph).
void save_instance(const QsciInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance = {});
void save_instance(const QsdInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance = {});
void save_instance(const GnaInstance& inst, const std::string& path,
                   const std::map<std::string, std::string>& provenance = {});

}  // namespace niqzk

#endif
