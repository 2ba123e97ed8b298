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

#ifndef NIQZK_STATES_HPP
#define NIQZK_STATES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "niqzk/types.hpp"

namespace niqzk {

// Pure state on a labeled qubit register. Immutable after construction;
// the constructor checks the length and unit-norm invariants.
class PureState {
 public:
  PureState(int num_qubits, Vec amplitudes);

  static PureState zero(int num_qubits);
  static PureState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return dim_of(num_qubits_); }
  const Vec& amplitudes() const { return amps_; }

 private:
  int num_qubits_;
  Vec amps_;
};

// Hermitian, unit-trace operator on a qubit register. The constructor checks
// Hermiticity and trace entrywise and the diagonal for negativity; the full
// spectral positivity check is available as min_eigenvalue() since it costs
// a dense eigendecomposition.
class DensityOperator {
 public:
  DensityOperator(int num_qubits, Mat matrix);

  static DensityOperator maximally_mixed(int num_qubits);
  static DensityOperator zero_state(int num_qubits);
  static DensityOperator from_pure(const PureState& psi);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t dim() const { return dim_of(num_qubits_); }
  const Mat& matrix() const { return m_; }

  double min_eigenvalue() const;

 private:
  int num_qubits_;
  Mat m_;
};

// Named, ordered qubit registers; qubit indices of a register are the
// prefix-sum range in declaration order.
class RegisterPartition {
 public:
  explicit RegisterPartition(
      std::vector<std::pair<std::string, int>> registers);

  int total_qubits() const { return total_; }
  int offset(std::string_view name) const;
  int count(std::string_view name) const;
  std::vector<int> range(std::string_view name) const;

 private:
  std::vector<std::pair<std::string, int>> regs_;
  int total_;
};

}  // namespace niqzk

#endif
