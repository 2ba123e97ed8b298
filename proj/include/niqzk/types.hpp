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

#ifndef NIQZK_TYPES_HPP
#define NIQZK_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace niqzk {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Tolerance hierarchy: algebraic identities are held to kAlgebraTol, composed
// constructions (Uhlmann synthesis, purification round trips) to kBuildTol.
inline constexpr double kAlgebraTol = 1e-9;
inline constexpr double kBuildTol = 1e-7;

// Qubit convention: qubit 0 is the most significant bit of a basis-state
// index, so the bit position of qubit k in a q-qubit index is q - 1 - k.
inline constexpr int bit_position(int num_qubits, int qubit) {
  return num_qubits - 1 - qubit;
}

inline std::uint64_t dim_of(int num_qubits) {
  return std::uint64_t{1} << num_qubits;
}

class DimensionCapError : public std::runtime_error {
 public:
  DimensionCapError(const std::string& what_op, int requested, int cap)
      : std::runtime_error(what_op + ": " + std::to_string(requested) +
                           " qubits exceeds the dense-simulation cap of " +
                           std::to_string(cap)),
        requested_qubits(requested),
        cap_qubits(cap) {}
  int requested_qubits;
  int cap_qubits;
};

class NoUhlmannUnitary : public std::runtime_error {
 public:
  explicit NoUhlmannUnitary(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg),
        line_number(line) {}
  int line_number;
};

// Process-wide dense-simulation limits. Density operators are capped at
// density_qubit_cap() qubits (default 14); pure states at twice that, which
// is what a purification of a cap-sized mixed state needs.
namespace limits {
int density_qubit_cap();
void set_density_qubit_cap(int qubits);
int pure_qubit_cap();
void require_density(int qubits, const char* op);
void require_pure(int qubits, const char* op);
}  // namespace limits

}  // namespace niqzk

#endif
