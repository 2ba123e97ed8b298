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

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "niqzk/report.hpp"
#include "niqzk/reductions.hpp"

namespace {

using namespace niqzk;

// Exit codes: 0 accept/success, 1 reject, 2 usage or parse error,
// 3 promise violated, 4 dense-simulation cap exceeded.
constexpr int kExitAccept = 0;
constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPromise = 3;
constexpr int kExitCap = 4;

int verdict_exit_code(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Accept: return kExitAccept;
    case VerdictKind::Reject: return kExitReject;
    case VerdictKind::PromiseViolated: return kExitPromise;
  }
  return kExitUsage;
}

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string json_path;
};

void emit(const RunReport& report, const CommonOptions& common) {
  std::cout << report.render();
  if (!common.json_path.empty()) {
    std::ofstream out(common.json_path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write JSON report: " +
                               common.json_path);
    }
    out << report.render_json();
  }
}

int run_decide(const std::string& instance_path, bool sampled, int trials,
               const CommonOptions& common) {
  RunReport report;
  report.add("command", "decide");
  report.add("instance", instance_path);
  report.add("digest.instance", file_digest(instance_path));
  report.add("mode", sampled ? "sampled" : "exact");
  if (sampled) report.add("trials", trials);
  report.add("seed", common.seed);

  const LoadedInstance loaded = load_instance(instance_path);
  Rng rng(common.seed);
  Verdict verdict{VerdictKind::Reject, 0};

  if (const auto* qsci = std::get_if<QsciInstance>(&loaded.value)) {
    report.add("kind", "qsci");
    report.add("alpha", qsci->alpha);
    report.add("beta", qsci->beta);
    if (sampled) {
      verdict = decide_1qsci_sampled(*qsci, trials, rng);
    } else {
      verdict = decide_qsci(*qsci);
    }
  } else if (const auto* qsd = std::get_if<QsdInstance>(&loaded.value)) {
    report.add("kind", "qsd");
    report.add("alpha", qsd->alpha);
    report.add("beta", qsd->beta);
    if (sampled) {
      verdict = decide_1qsd_sampled(*qsd, trials, rng);
    } else {
      verdict = decide_qsd(*qsd);
    }
  } else {
    const auto& gna = std::get<GnaInstance>(loaded.value);
    if (sampled) {
      throw CLI::ValidationError(
          "decide", "--sampled does not apply to graph instances");
    }
    report.add("kind", "gna");
    report.add("alpha", gna.alpha);
    report.add("beta", gna.beta);
    const GnaOrbitSummary summary = gna_orbit_summary(gna.graph);
    report.add("aut_count", automorphism_count(gna.graph));
    verdict = closeness_verdict(summary.distance, gna.alpha, gna.beta);
  }

  report.add("distance", verdict.witness);
  report.add("verdict", std::string(verdict_name(verdict.kind)));
  emit(report, common);
  return verdict_exit_code(verdict.kind);
}

int run_reduce_gna(const std::string& graph_path, const std::string& out_path,
                   const CommonOptions& common) {
  RunReport report;
  report.add("command", "reduce.gna");
  report.add("graph", graph_path);
  report.add("digest.graph", file_digest(graph_path));
  report.add("seed", common.seed);

  const Graph g = load_graph(graph_path);
  const auto [inst, summary] = gna_to_qsci(g);
  const std::uint64_t aut = automorphism_count(g);

  save_instance(inst, out_path,
                {{"kind", "gna"},
                 {"source", graph_path},
                 {"source_digest", file_digest(graph_path)},
                 {"aut_count", std::to_string(aut)},
                 {"q_l", std::to_string(summary.q_l)},
                 {"blocks", std::to_string(summary.num_blocks)},
                 {"distance", format_significant(summary.distance)}});

  report.add("output", out_path);
  report.add("vertices", summary.num_vertices);
  report.add("q_l", summary.q_l);
  report.add("aut_count", aut);
  report.add("blocks", summary.num_blocks);
  report.add("distance", summary.distance);
  report.add("alpha", inst.alpha);
  report.add("beta", inst.beta);
  emit(report, common);
  return kExitAccept;
}

int run_reduce_bqp(const std::string& circuit_path, int accept_qubit,
                   int repetitions, const std::string& out_path,
                   const CommonOptions& common) {
  RunReport report;
  report.add("command", "reduce.bqp");
  report.add("circuit", circuit_path);
  report.add("digest.circuit", file_digest(circuit_path));
  report.add("seed", common.seed);

  const CircuitDescription c = load_circuit(circuit_path);
  const QsciInstance inst = bqp_to_1qsci(c, accept_qubit, repetitions);
  const double p = acceptance_of(c, accept_qubit);
  const double d = distance_to_identity(inst);
  save_instance(inst, out_path,
                {{"kind", "bqp"},
                 {"source", circuit_path},
                 {"source_digest", file_digest(circuit_path)},
                 {"accept_qubit", std::to_string(accept_qubit)},
                 {"repetitions", std::to_string(repetitions)},
                 {"accept_probability", format_significant(p)},
                 {"distance", format_significant(d)}});

  report.add("output", out_path);
  report.add("accept_qubit", accept_qubit);
  report.add("repetitions", repetitions);
  report.add("accept_probability", p);
  report.add("distance", d);
  emit(report, common);
  return kExitAccept;
}

int run_reduce_amplify(const std::string& instance_path, int repetitions,
                       const std::string& out_path,
                       const CommonOptions& common) {
  RunReport report;
  report.add("command", "reduce.amplify");
  report.add("instance", instance_path);
  report.add("digest.instance", file_digest(instance_path));
  report.add("seed", common.seed);

  const LoadedInstance loaded = load_instance(instance_path);
  const auto* qsci = std::get_if<QsciInstance>(&loaded.value);
  if (qsci == nullptr) {
    throw CLI::ValidationError("reduce amplify",
                               "needs a circuit or channel instance");
  }
  const QsciInstance amplified = amplify(*qsci, repetitions);
  const double d = distance_to_identity(amplified);
  save_instance(amplified, out_path,
                {{"kind", "amplify"},
                 {"source", instance_path},
                 {"source_digest", file_digest(instance_path)},
                 {"repetitions", std::to_string(repetitions)},
                 {"distance", format_significant(d)}});

  report.add("output", out_path);
  report.add("repetitions", repetitions);
  report.add("alpha", amplified.alpha);
  report.add("beta", amplified.beta);
  report.add("distance", d);
  emit(report, common);
  return kExitAccept;
}

int run_reduce_protocol(const std::string& spec_path,
                        const std::string& sim_path,
                        const std::string& out_path,
                        const CommonOptions& common) {
  RunReport report;
  report.add("command", "reduce.protocol");
  report.add("spec", spec_path);
  report.add("digest.spec", file_digest(spec_path));
  report.add("sim", sim_path);
  report.add("digest.sim", file_digest(sim_path));
  report.add("seed", common.seed);

  const ProtocolSpecFile spec_file = load_protocol_spec(spec_path);
  const CircuitDescription sim_circuit = load_circuit(sim_path);
  if (sim_circuit.num_output_qubits() !=
      spec_file.spec.q_v + spec_file.spec.q_m) {
    throw CLI::ValidationError(
        "reduce protocol",
        "simulator circuit must output q_v + q_m qubits");
  }
  const DensityOperator sim = output_state(sim_circuit);
  const QsciInstance inst = protocol_to_qsci(spec_file.spec, sim);
  const double d = distance_to_identity(inst);
  save_instance(inst, out_path,
                {{"kind", "protocol"},
                 {"source", spec_path},
                 {"source_digest", file_digest(spec_path)},
                 {"sim", sim_path},
                 {"sim_digest", file_digest(sim_path)},
                 {"distance", format_significant(d)}});

  report.add("output", out_path);
  report.add("q_s", spec_file.spec.q_s);
  report.add("alpha", inst.alpha);
  report.add("beta", inst.beta);
  report.add("distance", d);
  emit(report, common);
  return kExitAccept;
}

// Loads a protocol from either a spec file or a closeness instance (built
// via the Lemma-1 verifier, optionally amplified to a soundness target).
struct LoadedProtocol {
  ProtocolSpec spec;
  std::optional<CircuitDescription> source;
  int repetitions = 1;
};

LoadedProtocol load_protocol_input(const std::string& spec_path,
                                   const std::string& instance_path,
                                   double target_soundness,
                                   RunReport& report) {
  LoadedProtocol out;
  if (!spec_path.empty()) {
    report.add("spec", spec_path);
    report.add("digest.spec", file_digest(spec_path));
    ProtocolSpecFile f = load_protocol_spec(spec_path);
    out.spec = std::move(f.spec);
    out.source = std::move(f.source_circuit);
    return out;
  }
  report.add("instance", instance_path);
  report.add("digest.instance", file_digest(instance_path));
  const LoadedInstance loaded = load_instance(instance_path);
  const auto* qsci = std::get_if<QsciInstance>(&loaded.value);
  if (qsci == nullptr ||
      !std::holds_alternative<CircuitDescription>(qsci->source)) {
    throw CLI::ValidationError(
        "protocol", "needs a circuit-backed closeness instance");
  }
  if (target_soundness > 0) {
    QsciProtocolReduction red = qsci_to_protocol(*qsci, target_soundness);
    out.spec = std::move(red.spec);
    out.source = std::move(red.amplified_circuit);
    out.repetitions = red.repetitions;
  } else {
    out.source = std::get<CircuitDescription>(qsci->source);
    out.spec = build_qsci_verifier(*out.source);
  }
  return out;
}

int run_protocol_run(const LoadedProtocol& protocol, RunReport& report,
                     const CommonOptions& common) {
  if (!protocol.source.has_value()) {
    throw CLI::ValidationError("protocol run",
                               "spec file lacks a source circuit");
  }
  const ProverStrategy honest =
      honest_prover(protocol.spec, *protocol.source);
  const double acceptance = acceptance_probability(protocol.spec, honest);
  report.add("acceptance", acceptance);
  emit(report, common);
  return kExitAccept;
}

int run_protocol_cheat(const LoadedProtocol& protocol, int restarts,
                       int iters, RunReport& report,
                       const CommonOptions& common) {
  if (!protocol.source.has_value()) {
    throw CLI::ValidationError("protocol cheat",
                               "spec file lacks a source circuit");
  }
  const double bound = optimal_cheat_bound(protocol.spec, *protocol.source);
  const CheatSearchResult found = numeric_cheat_search(
      protocol.spec,
      {.restarts = restarts, .sweeps = iters, .seed = common.seed});
  report.add("cheat_bound", bound);
  report.add("search_acceptance", found.acceptance);
  report.add("gap", bound - found.acceptance);
  emit(report, common);
  return kExitAccept;
}

int run_protocol_zk(const LoadedProtocol& protocol, RunReport& report,
                    const CommonOptions& common) {
  if (!protocol.source.has_value()) {
    throw CLI::ValidationError("protocol zk",
                               "spec file lacks a source circuit");
  }
  const ProverStrategy honest =
      honest_prover(protocol.spec, *protocol.source);
  const DensityOperator sim =
      output_state(honest_simulator_circuit(*protocol.source));
  const double distance = zk_audit(protocol.spec, honest, sim);
  report.add("zk_distance", distance);
  report.add("perfect", distance <= 1e-9 ? "yes" : "no");
  emit(report, common);
  return kExitAccept;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* cap = std::getenv("NIQZK_DIM_CAP")) {
    try {
      limits::set_density_qubit_cap(std::stoi(cap));
    } catch (const std::exception&) {
      std::cerr << "error: bad NIQZK_DIM_CAP value '" << cap << "'\n";
      return kExitUsage;
    }
  }

  CLI::App app{
      "niqzk: simulate and reduce non-interactive quantum zero-knowledge "
      "proof systems with shared EPR pairs"};
  app.require_subcommand(1);

  CommonOptions common;
  bool sampled = false;
  int trials = 10000;

  // decide
  auto* decide = app.add_subcommand(
      "decide", "Decide a promise-problem instance file");
  std::string instance_path;
  decide->add_option("instance", instance_path, "instance file")->required();
  decide->add_flag("--sampled", sampled,
                   "use single-shot tomography instead of exact simulation "
                   "(one-output-qubit instances only)");
  decide->add_option("--trials", trials, "samples for --sampled mode");
  decide->add_option("--seed", common.seed, "random seed");
  decide->add_option("--json", common.json_path, "also write a JSON report");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Emit a reduced instance file");
  reduce->require_subcommand(1);
  std::string graph_path, circuit_path, spec_path, sim_path, out_path;
  int accept_qubit = 0;
  int repetitions = 1;

  auto* rgna = reduce->add_subcommand(
      "gna", "Graph-Non-Automorphism to closeness-to-identity");
  rgna->add_option("--graph", graph_path, "graph file")->required();
  rgna->add_option("-o,--output", out_path, "instance file to write")
      ->required();
  rgna->add_option("--seed", common.seed, "random seed");
  rgna->add_option("--json", common.json_path, "also write a JSON report");

  auto* rbqp = reduce->add_subcommand(
      "bqp", "accept-qubit circuit to one-qubit closeness");
  rbqp->add_option("--circuit", circuit_path, "circuit file")->required();
  rbqp->add_option("--accept-qubit", accept_qubit, "designated accept qubit")
      ->required();
  rbqp->add_option("--repetitions", repetitions,
                   "1 (direct) or 3 (majority vote)");
  rbqp->add_option("-o,--output", out_path, "instance file to write")
      ->required();
  rbqp->add_option("--seed", common.seed, "random seed");
  rbqp->add_option("--json", common.json_path, "also write a JSON report");

  auto* ramp = reduce->add_subcommand("amplify", "parallel repetition");
  ramp->add_option("--instance", instance_path, "instance file")->required();
  ramp->add_option("-r,--repetitions", repetitions, "parallel copies")
      ->required();
  ramp->add_option("-o,--output", out_path, "instance file to write")
      ->required();
  ramp->add_option("--seed", common.seed, "random seed");
  ramp->add_option("--json", common.json_path, "also write a JSON report");

  auto* rprot = reduce->add_subcommand(
      "protocol", "protocol plus simulator to closeness-to-identity");
  rprot->add_option("--spec", spec_path, "protocol spec file")->required();
  rprot->add_option("--sim", sim_path,
                    "circuit preparing the simulator state (q_v + q_m "
                    "output qubits)")
      ->required();
  rprot->add_option("-o,--output", out_path, "instance file to write")
      ->required();
  rprot->add_option("--seed", common.seed, "random seed");
  rprot->add_option("--json", common.json_path, "also write a JSON report");

  // protocol
  auto* protocol = app.add_subcommand(
      "protocol", "Run, attack, or audit a shared-EPR protocol");
  protocol->require_subcommand(1);
  std::string prot_spec_path, prot_instance_path;
  double target_soundness = 0;
  int restarts = 20;
  int iters = 50;

  auto add_protocol_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--spec", prot_spec_path, "protocol spec file");
    cmd->add_option("--instance", prot_instance_path,
                    "circuit-backed closeness instance to build the "
                    "verifier from");
    cmd->add_option("--target-soundness", target_soundness,
                    "amplify the instance until the cheat bound falls below "
                    "this value (0 = no amplification)");
    cmd->add_option("--seed", common.seed, "random seed");
    cmd->add_option("--json", common.json_path, "also write a JSON report");
  };
  auto* prun = protocol->add_subcommand("run", "honest-prover acceptance");
  add_protocol_inputs(prun);
  auto* pcheat = protocol->add_subcommand(
      "cheat", "cheat bound and numeric search");
  add_protocol_inputs(pcheat);
  pcheat->add_option("--restarts", restarts, "search restarts");
  pcheat->add_option("--iters", iters, "coordinate-ascent sweeps per restart");
  auto* pzk = protocol->add_subcommand("zk", "zero-knowledge audit");
  add_protocol_inputs(pzk);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  int exit_code = kExitUsage;
  try {
    if (decide->parsed()) {
      exit_code = run_decide(instance_path, sampled, trials, common);
    } else if (reduce->parsed()) {
      if (rgna->parsed()) {
        exit_code = run_reduce_gna(graph_path, out_path, common);
      } else if (rbqp->parsed()) {
        exit_code = run_reduce_bqp(circuit_path, accept_qubit, repetitions,
                                   out_path, common);
      } else if (ramp->parsed()) {
        exit_code =
            run_reduce_amplify(instance_path, repetitions, out_path, common);
      } else {
        exit_code = run_reduce_protocol(spec_path, sim_path, out_path, common);
      }
    } else if (protocol->parsed()) {
      if (prot_spec_path.empty() == prot_instance_path.empty()) {
        throw CLI::ValidationError(
            "protocol", "give exactly one of --spec or --instance");
      }
      RunReport report;
      const char* sub = prun->parsed() ? "run" : pcheat->parsed() ? "cheat"
                                                                  : "zk";
      report.add("command", std::string("protocol.") + sub);
      const LoadedProtocol loaded = load_protocol_input(
          prot_spec_path, prot_instance_path, target_soundness, report);
      report.add("seed", common.seed);
      report.add("q_v", loaded.spec.q_v);
      report.add("q_m", loaded.spec.q_m);
      report.add("q_p", loaded.spec.q_p);
      report.add("q_s", loaded.spec.q_s);
      if (loaded.repetitions > 1) {
        report.add("repetitions", loaded.repetitions);
      }
      if (prun->parsed()) {
        exit_code = run_protocol_run(loaded, report, common);
      } else if (pcheat->parsed()) {
        exit_code = run_protocol_cheat(loaded, restarts, iters, report, common);
      } else {
        exit_code = run_protocol_zk(loaded, report, common);
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "# wall_ms=" << elapsed.count() << "\n";
  return exit_code;
}
