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

#ifndef NIQZK_RNG_HPP
#define NIQZK_RNG_HPP

#include <cstdint>
#include <random>

#include "niqzk/types.hpp"

namespace niqzk {

// Seeded generator with portable derived draws. std::mt19937_64 output is
// fully specified by the standard, and the double conversions below avoid
// std::uniform_real_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  bool bernoulli(double p) { return uniform() < p; }

  double gaussian();

  // Child generator on an independent stream, derived deterministically.
  Rng fork(std::uint64_t stream) const;

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool have_cached_ = false;
  double cached_ = 0;
};

// Haar-distributed unitary (Ginibre matrix, QR, phase fix).
Mat haar_unitary(int dim, Rng& rng);

Vec random_unit_vector(int dim, Rng& rng);

// Full-rank random density matrix (normalized Wishart).
Mat random_density_matrix(int dim, Rng& rng);

}  // namespace niqzk

#endif
