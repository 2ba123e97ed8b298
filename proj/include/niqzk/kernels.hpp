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

#ifndef NIQZK_KERNELS_HPP
#define NIQZK_KERNELS_HPP

#include <cstddef>
#include <span>

#include "niqzk/types.hpp"

// Data-parallel inner loops over amplitude arrays. The functions in
// niqzk::kernels are the OpenMP-parallel production path (they fall back to
// the serial loop below a size cutoff); niqzk::kernels::serial holds the
// plain reference loops that the parallel versions are tested against.
//
// Gate-application kernels speak raw bit positions within a flat index (bit 0
// is the least significant). Callers working in qubit space convert with
// bit_position(). The trace/reduction kernels take qubit indices directly
// because their output ordering contract ("kept qubits keep their relative
// order") lives in qubit space.

namespace niqzk::kernels {

// Amplitude count at or above which the parallel versions actually fork.
inline constexpr std::size_t kParallelCutoff = std::size_t{1} << 12;

namespace serial {

// m is row-major [m00 m01; m10 m11] acting on the given bit.
void apply_1q(cplx* amps, std::size_t n, int bit, const cplx* m);

// m is row-major 4x4; the 2-bit sub-index is (bit_hi << 1) | bit_lo.
void apply_2q(cplx* amps, std::size_t n, int bit_hi, int bit_lo,
              const cplx* m);

// Generic k-bit dense matrix; bits are listed most significant sub-index
// bit first. m is 2^k x 2^k.
void apply_kq(cplx* amps, std::size_t n, std::span<const int> bits,
              const Mat& m);

// Replaces the |0...0> component on the given bits by the sub-state `sub`
// (length 2^k). Every amplitude whose bits are not all zero must already be
// zero on those bits; the caller guarantees this (state-preparation prefix).
void stateprep(cplx* amps, std::size_t n, std::span<const int> bits,
               std::span<const cplx> sub);

// Reduced density matrix of a pure state over the kept qubits (ascending
// qubit indices; kept qubits keep their relative order in the output).
Mat reduced_density(const cplx* amps, int num_qubits,
                    std::span<const int> keep);

// Partial trace of a density matrix over the complement of `keep`.
Mat partial_trace(const Mat& rho, int num_qubits, std::span<const int> keep);

Vec kron_vec(const Vec& a, const Vec& b);
Mat kron_mat(const Mat& a, const Mat& b);

// Probability that all listed bits are zero / that the bit is one.
double prob_bits_zero(const cplx* amps, std::size_t n,
                      std::span<const int> bits);
double prob_bit_one(const cplx* amps, std::size_t n, int bit);

// Zeroes every coherence between basis states that differ on the listed
// qubits (computational-basis measurement without reading the outcome).
void dephase(Mat& rho, int num_qubits, std::span<const int> qubits);

}  // namespace serial

void apply_1q(cplx* amps, std::size_t n, int bit, const cplx* m);
void apply_2q(cplx* amps, std::size_t n, int bit_hi, int bit_lo,
              const cplx* m);
void apply_kq(cplx* amps, std::size_t n, std::span<const int> bits,
              const Mat& m);
void stateprep(cplx* amps, std::size_t n, std::span<const int> bits,
               std::span<const cplx> sub);
Mat reduced_density(const cplx* amps, int num_qubits,
                    std::span<const int> keep);
Mat partial_trace(const Mat& rho, int num_qubits, std::span<const int> keep);
Vec kron_vec(const Vec& a, const Vec& b);
Mat kron_mat(const Mat& a, const Mat& b);
double prob_bits_zero(const cplx* amps, std::size_t n,
                      std::span<const int> bits);
double prob_bit_one(const cplx* amps, std::size_t n, int bit);
void dephase(Mat& rho, int num_qubits, std::span<const int> qubits);

}  // namespace niqzk::kernels

#endif
