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
//
// Serial reference vs OpenMP kernels on statevector / density workloads.
// Run with: ./niqzk_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "niqzk/kernels.hpp"
#include "niqzk/rng.hpp"

using namespace niqzk;

namespace {

Vec make_state(int num_qubits, std::uint64_t seed) {
  Rng rng(seed);
  return random_unit_vector(1 << num_qubits, rng);
}

const cplx kHadamard[4] = {M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};

void BM_Apply1qSerial(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 1);
  for (auto _ : state) {
    kernels::serial::apply_1q(amps.data(), amps.size(), q / 2, kHadamard);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * amps.size());
}

void BM_Apply1qParallel(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 1);
  for (auto _ : state) {
    kernels::apply_1q(amps.data(), amps.size(), q / 2, kHadamard);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * amps.size());
}

void BM_ApplyKqSerial(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 2);
  Rng rng(3);
  const Mat u = haar_unitary(8, rng);
  const std::vector<int> bits = {q - 1, q / 2, 0};
  for (auto _ : state) {
    kernels::serial::apply_kq(amps.data(), amps.size(), bits, u);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * amps.size());
}

void BM_ApplyKqParallel(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 2);
  Rng rng(3);
  const Mat u = haar_unitary(8, rng);
  const std::vector<int> bits = {q - 1, q / 2, 0};
  for (auto _ : state) {
    kernels::apply_kq(amps.data(), amps.size(), bits, u);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * amps.size());
}

void BM_ReducedDensitySerial(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 4);
  const std::vector<int> keep = {0, 1, 2, 3};
  for (auto _ : state) {
    Mat rho = kernels::serial::reduced_density(amps.data(), q, keep);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_ReducedDensityParallel(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  Vec amps = make_state(q, 4);
  const std::vector<int> keep = {0, 1, 2, 3};
  for (auto _ : state) {
    Mat rho = kernels::reduced_density(amps.data(), q, keep);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_KronSerial(benchmark::State& state) {
  Rng rng(5);
  const Mat a = random_density_matrix(64, rng);
  const Mat b = random_density_matrix(64, rng);
  for (auto _ : state) {
    Mat c = kernels::serial::kron_mat(a, b);
    benchmark::DoNotOptimize(c.data());
  }
}

void BM_KronParallel(benchmark::State& state) {
  Rng rng(5);
  const Mat a = random_density_matrix(64, rng);
  const Mat b = random_density_matrix(64, rng);
  for (auto _ : state) {
    Mat c = kernels::kron_mat(a, b);
    benchmark::DoNotOptimize(c.data());
  }
}

}  // namespace

BENCHMARK(BM_Apply1qSerial)->Arg(14)->Arg(18)->Arg(22);
BENCHMARK(BM_Apply1qParallel)->Arg(14)->Arg(18)->Arg(22);
BENCHMARK(BM_ApplyKqSerial)->Arg(14)->Arg(18)->Arg(22);
BENCHMARK(BM_ApplyKqParallel)->Arg(14)->Arg(18)->Arg(22);
BENCHMARK(BM_ReducedDensitySerial)->Arg(16)->Arg(20);
BENCHMARK(BM_ReducedDensityParallel)->Arg(16)->Arg(20);
BENCHMARK(BM_KronSerial);
BENCHMARK(BM_KronParallel);

BENCHMARK_MAIN();
