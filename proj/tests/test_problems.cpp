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

#include <gtest/gtest.h>

#include <filesystem>

#include "niqzk/qcore.hpp"
#include "testutil.hpp"

using namespace niqzk;
namespace tu = testutil;

namespace {

const std::string kFixtures = NIQZK_FIXTURE_DIR;

QsciInstance epr_instance(double alpha, double beta) {
  return {alpha, beta, parse_circuit("qubits 2\nout 1\nH 0\nCNOT 0 1\n")};
}

QsciInstance identity_instance(double alpha, double beta) {
  return {alpha, beta, parse_circuit("qubits 1\nout 1\n")};
}

}  // namespace

TEST(Problems, DistanceToIdentityExamples) {
  EXPECT_NEAR(distance_to_identity(epr_instance(0, 0.25)), 0.0, 1e-12);
  EXPECT_NEAR(distance_to_identity(identity_instance(0, 0.25)), 0.5, 1e-12);
}

TEST(Problems, DecideQsciVerdicts) {
  EXPECT_EQ(decide_qsci(epr_instance(0, 0.25)).kind, VerdictKind::Accept);
  EXPECT_EQ(decide_qsci(identity_instance(0, 0.25)).kind,
            VerdictKind::Reject);
  EXPECT_EQ(decide_qsci(identity_instance(0, 0.7)).kind,
            VerdictKind::PromiseViolated);
  EXPECT_THROW(decide_qsci(identity_instance(0.5, 0.25)),
               std::invalid_argument);
}

TEST(Problems, DecideQsdVerdicts) {
  const auto idc = parse_circuit("qubits 1\nout 1\n");
  const auto flip = parse_circuit("qubits 1\nout 1\nX 0\n");
  EXPECT_EQ(decide_qsd({0, 0.5, idc, idc}).kind, VerdictKind::Reject);
  EXPECT_EQ(decide_qsd({0, 1.0, idc, flip}).kind, VerdictKind::Accept);

  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    // Verdict must be consistent with the trace-distance witness.
    std::vector<GateApplication> g0, g1;
    for (int i = 0; i < 4; ++i) {
      g0.push_back({rng.bernoulli(0.5) ? Gate::H : Gate::T,
                    {static_cast<int>(rng.below(2))},
                    {}});
      g1.push_back({rng.bernoulli(0.5) ? Gate::X : Gate::S,
                    {static_cast<int>(rng.below(2))},
                    {}});
    }
    QsdInstance inst{0.2, 0.8, CircuitDescription(2, 1, g0),
                     CircuitDescription(2, 1, g1)};
    const Verdict v = decide_qsd(inst);
    const double d = trace_distance(output_state(inst.circuit0),
                                    output_state(inst.circuit1));
    EXPECT_NEAR(v.witness, d, 1e-12);
    if (d >= 0.8) {
      EXPECT_EQ(v.kind, VerdictKind::Accept);
    }
    if (d <= 0.2) {
      EXPECT_EQ(v.kind, VerdictKind::Reject);
    }
  }
}

TEST(Problems, Decide1QsciExact) {
  EXPECT_EQ(decide_1qsci_exact(epr_instance(0.25, 0.5)).kind,
            VerdictKind::Accept);
  EXPECT_EQ(decide_1qsci_exact(identity_instance(0.25, 0.5)).kind,
            VerdictKind::Reject);

  const auto two_out = QsciInstance{
      0, 0.5, parse_circuit("qubits 2\nout 2\nH 0\nCNOT 0 1\n")};
  EXPECT_THROW(decide_1qsci_exact(two_out), std::invalid_argument);
}

TEST(Problems, Decide1QsciSampledAgreesWithExact) {
  Rng rng(72);
  int disagreements = 0;
  for (int run = 0; run < 100; ++run) {
    Rng sub = rng.fork(run);
    const auto& inst =
        (run % 2 == 0) ? epr_instance(0.25, 0.5) : identity_instance(0.25, 0.5);
    const Verdict sampled = decide_1qsci_sampled(inst, 10000, sub);
    const Verdict exact = decide_1qsci_exact(inst);
    if (sampled.kind != exact.kind) ++disagreements;
  }
  EXPECT_LE(disagreements, 1);
}

TEST(Problems, Decide1QsdModes) {
  const auto idc = parse_circuit("qubits 1\nout 1\n");
  const auto flip = parse_circuit("qubits 1\nout 1\nX 0\n");
  const QsdInstance far{0.25, 0.75, idc, flip};
  const QsdInstance close{0.25, 0.75, idc, idc};
  EXPECT_EQ(decide_1qsd_exact(far).kind, VerdictKind::Accept);
  EXPECT_EQ(decide_1qsd_exact(close).kind, VerdictKind::Reject);
  Rng rng(73);
  EXPECT_EQ(decide_1qsd_sampled(far, 4000, rng).kind, VerdictKind::Accept);
  EXPECT_EQ(decide_1qsd_sampled(close, 4000, rng).kind, VerdictKind::Reject);
}

TEST(Problems, AutomorphismCounts) {
  const Graph k3 = load_graph(kFixtures + "/k3.graph");
  EXPECT_EQ(automorphism_count(k3), 6u);

  const Graph p4 = load_graph(kFixtures + "/p4.graph");
  EXPECT_EQ(automorphism_count(p4), 2u);

  const Graph rigid = load_graph(kFixtures + "/rigid6.graph");
  EXPECT_EQ(automorphism_count(rigid), 1u);
}

TEST(Problems, AutomorphismCountDividesFactorial) {
  Rng rng(74);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(0.5)) edges.emplace_back(i, j);
      }
    }
    const Graph g(n, edges);
    std::uint64_t factorial = 1;
    for (int i = 2; i <= n; ++i) factorial *= i;
    EXPECT_EQ(factorial % automorphism_count(g), 0u);
  }
}

TEST(Problems, ApplyPermutationProperties) {
  const Graph k3 = load_graph(kFixtures + "/k3.graph");
  const Permutation rot({1, 2, 0});
  EXPECT_EQ(apply_permutation(k3, rot), k3);
  EXPECT_EQ(apply_permutation(k3, Permutation::identity(3)), k3);

  const Graph p4 = load_graph(kFixtures + "/p4.graph");
  const Permutation p({2, 0, 3, 1});
  const Graph moved = apply_permutation(p4, p);
  EXPECT_EQ(apply_permutation(moved, p.inverse()), p4);

  // Degree multiset is preserved.
  auto degrees = [](const Graph& g) {
    std::vector<int> d(g.num_vertices(), 0);
    for (auto [i, j] : g.edges()) {
      ++d[i];
      ++d[j];
    }
    std::sort(d.begin(), d.end());
    return d;
  };
  EXPECT_EQ(degrees(moved), degrees(p4));
}

TEST(Problems, PermutationEnumerationIsLexicographic) {
  Permutation p = Permutation::identity(3);
  std::vector<std::vector<int>> seen = {p.image()};
  while (p.advance()) seen.push_back(p.image());
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_EQ(seen.front(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(seen.back(), (std::vector<int>{2, 1, 0}));
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
}

TEST(Problems, GraphFileRoundTrip) {
  const Graph g = load_graph(kFixtures + "/rigid6.graph");
  const Graph back = parse_graph(serialize_graph(g));
  EXPECT_EQ(back, g);
  EXPECT_THROW(parse_graph("n 2\nedge 0 0\n"), ParseError);
  EXPECT_THROW(parse_graph("edge 0 1\n"), ParseError);
}

TEST(Problems, InstanceFileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "niqzk_inst_test";
  std::filesystem::create_directories(dir);

  const QsciInstance inst = epr_instance(0.0, 0.25);
  const std::string path = (dir / "epr.inst").string();
  save_instance(inst, path, {{"kind", "fixture"}});
  const LoadedInstance loaded = load_instance(path);
  const auto* q = std::get_if<QsciInstance>(&loaded.value);
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(q->alpha, 0.0);
  EXPECT_EQ(q->beta, 0.25);
  EXPECT_NEAR(distance_to_identity(*q), 0.0, 1e-12);
  EXPECT_EQ(loaded.provenance.at("kind"), "fixture");

  const GnaInstance gna{0.0, 0.25, load_graph(kFixtures + "/k3.graph")};
  const std::string gpath = (dir / "k3.inst").string();
  save_instance(gna, gpath);
  const LoadedInstance gloaded = load_instance(gpath);
  const auto* g = std::get_if<GnaInstance>(&gloaded.value);
  ASSERT_NE(g, nullptr);
  EXPECT_EQ(g->graph.num_vertices(), 3);

  std::filesystem::remove_all(dir);
}
