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

#ifndef NIQZK_QCORE_HPP
#define NIQZK_QCORE_HPP

#include <vector>

#include "niqzk/states.hpp"
#include "niqzk/types.hpp"

namespace niqzk {

// Kronecker products; the left operand's qubits take the more significant
// index positions.
PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Reduced state on the kept qubits (ascending indices keep their relative
// order). The pure-state overload never materializes the full 2^q x 2^q
// operator.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep);
DensityOperator partial_trace(const PureState& psi,
                              const std::vector<int>& keep);

// D(rho, sigma) = (1/2) ||rho - sigma||_1, in [0, 1].
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

// F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1, in [0, 1] (non-squared).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// k EPR pairs on 2k qubits; qubit i and qubit k+i form pair i.
PureState epr_pairs(int k);

// Standard eigen-purification on 2q qubits; tracing out the last q qubits
// recovers rho.
PureState purify(const DensityOperator& rho);

// Unitary U on the non-pivot qubits with (I_pivot (x) U) phi = psi, including
// the global phase. Requires the reduced states on the pivot qubits to agree
// within kBuildTol; throws NoUhlmannUnitary otherwise. The matrix acts on the
// non-pivot qubits in their relative order.
Mat uhlmann_unitary(const PureState& phi, const PureState& psi,
                    const std::vector<int>& pivot);

// rho^(x)r, subject to the density cap.
DensityOperator tensor_power_state(const DensityOperator& rho, int r);

// Qubit relabeling: new_order[i] names the old qubit placed at position i.
DensityOperator reorder_qubits(const DensityOperator& rho,
                               const std::vector<int>& new_order);

// Applies a dense 2^k x 2^k unitary on the listed qubits (first listed qubit
// is the most significant sub-index bit).
PureState apply_on_qubits(const PureState& psi, const std::vector<int>& qubits,
                          const Mat& u);
DensityOperator apply_on_qubits(const DensityOperator& rho,
                                const std::vector<int>& qubits, const Mat& u);

// Eigenvalues of the Hermitian part of m, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Mat& m);

bool is_unitary(const Mat& m, double tol);

}  // namespace niqzk

#endif
