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

#include "niqzk/kernels.hpp"

#include <cassert>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace niqzk::kernels {

namespace {

using std::int64_t;
using std::size_t;

// Inserts a zero bit at position `bit`, shifting higher bits up.
inline size_t expand_zero(size_t packed, int bit) {
  const size_t low = (size_t{1} << bit) - 1;
  return ((packed & ~low) << 1) | (packed & low);
}

// Offset of sub-index s scattered onto the listed bit positions
// (bits[0] is the most significant sub-index bit).
std::vector<size_t> scatter_offsets(std::span<const int> bits) {
  const int k = static_cast<int>(bits.size());
  std::vector<size_t> offs(size_t{1} << k, 0);
  for (size_t s = 0; s < offs.size(); ++s) {
    size_t v = 0;
    for (int j = 0; j < k; ++j) {
      if ((s >> (k - 1 - j)) & 1) v |= size_t{1} << bits[j];
    }
    offs[s] = v;
  }
  return offs;
}

// Base index of group g: g's bits spread over the positions NOT listed in
// `sorted_bits` (ascending).
inline size_t group_base(size_t g, std::span<const int> sorted_bits) {
  size_t x = g;
  for (int b : sorted_bits) x = expand_zero(x, b);
  return x;
}

std::vector<int> sorted_copy(std::span<const int> bits) {
  std::vector<int> s(bits.begin(), bits.end());
  std::sort(s.begin(), s.end());
  return s;
}

// Bit positions of the kept qubits, most significant output bit first.
std::vector<int> keep_bits(int num_qubits, std::span<const int> keep) {
  std::vector<int> bits;
  bits.reserve(keep.size());
  for (int q : keep) bits.push_back(bit_position(num_qubits, q));
  return bits;
}

std::vector<int> complement_bits(int num_qubits, std::span<const int> keep) {
  std::vector<bool> kept(num_qubits, false);
  for (int q : keep) kept[q] = true;
  std::vector<int> bits;
  for (int q = 0; q < num_qubits; ++q) {
    if (!kept[q]) bits.push_back(bit_position(num_qubits, q));
  }
  return bits;
}

constexpr size_t kReduceChunks = 256;

}  // namespace

namespace serial {

void apply_1q(cplx* amps, size_t n, int bit, const cplx* m) {
  const size_t stride = size_t{1} << bit;
  const size_t low = stride - 1;
  const size_t pairs = n >> 1;
  for (size_t k = 0; k < pairs; ++k) {
    const size_t i0 = ((k & ~low) << 1) | (k & low);
    const size_t i1 = i0 | stride;
    const cplx a = amps[i0];
    const cplx b = amps[i1];
    amps[i0] = m[0] * a + m[1] * b;
    amps[i1] = m[2] * a + m[3] * b;
  }
}

void apply_2q(cplx* amps, size_t n, int bit_hi, int bit_lo, const cplx* m) {
  assert(bit_hi != bit_lo);
  const int p_lo = std::min(bit_hi, bit_lo);
  const int p_hi = std::max(bit_hi, bit_lo);
  const size_t hi = size_t{1} << bit_hi;
  const size_t lo = size_t{1} << bit_lo;
  const size_t groups = n >> 2;
  for (size_t g = 0; g < groups; ++g) {
    const size_t base = expand_zero(expand_zero(g, p_lo), p_hi);
    const size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
    cplx v[4];
    for (int s = 0; s < 4; ++s) v[s] = amps[idx[s]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] =
          m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] +
          m[4 * r + 3] * v[3];
    }
  }
}

void apply_kq(cplx* amps, size_t n, std::span<const int> bits, const Mat& m) {
  const int k = static_cast<int>(bits.size());
  const size_t sub = size_t{1} << k;
  assert(static_cast<size_t>(m.rows()) == sub);
  const auto offs = scatter_offsets(bits);
  const auto sorted = sorted_copy(bits);
  const size_t groups = n >> k;
  std::vector<cplx> in(sub), out(sub);
  for (size_t g = 0; g < groups; ++g) {
    const size_t base = group_base(g, sorted);
    for (size_t s = 0; s < sub; ++s) in[s] = amps[base | offs[s]];
    for (size_t r = 0; r < sub; ++r) {
      cplx acc = 0;
      for (size_t c = 0; c < sub; ++c) acc += m(r, c) * in[c];
      out[r] = acc;
    }
    for (size_t s = 0; s < sub; ++s) amps[base | offs[s]] = out[s];
  }
}

void stateprep(cplx* amps, size_t n, std::span<const int> bits,
               std::span<const cplx> sub) {
  const int k = static_cast<int>(bits.size());
  assert(sub.size() == (size_t{1} << k));
  const auto offs = scatter_offsets(bits);
  const auto sorted = sorted_copy(bits);
  const size_t groups = n >> k;
  for (size_t g = 0; g < groups; ++g) {
    const size_t base = group_base(g, sorted);
    const cplx v = amps[base];
    for (size_t s = 0; s < sub.size(); ++s) amps[base | offs[s]] = sub[s] * v;
  }
}

Mat reduced_density(const cplx* amps, int num_qubits,
                    std::span<const int> keep) {
  const auto kb = keep_bits(num_qubits, keep);
  const auto tb = complement_bits(num_qubits, keep);
  const auto koffs = scatter_offsets(kb);
  const auto toffs = scatter_offsets(tb);
  const size_t dk = koffs.size();
  Mat out(dk, dk);
  for (size_t b = 0; b < dk; ++b) {
    for (size_t a = 0; a < dk; ++a) {
      cplx acc = 0;
      for (size_t e : toffs) acc += amps[koffs[a] | e] * std::conj(amps[koffs[b] | e]);
      out(a, b) = acc;
    }
  }
  return out;
}

Mat partial_trace(const Mat& rho, int num_qubits, std::span<const int> keep) {
  const auto kb = keep_bits(num_qubits, keep);
  const auto tb = complement_bits(num_qubits, keep);
  const auto koffs = scatter_offsets(kb);
  const auto toffs = scatter_offsets(tb);
  const size_t dk = koffs.size();
  Mat out(dk, dk);
  for (size_t b = 0; b < dk; ++b) {
    for (size_t a = 0; a < dk; ++a) {
      cplx acc = 0;
      for (size_t e : toffs) acc += rho(koffs[a] | e, koffs[b] | e);
      out(a, b) = acc;
    }
  }
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (int64_t i = 0; i < a.size(); ++i) {
    for (int64_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

Mat kron_mat(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int64_t ja = 0; ja < a.cols(); ++ja) {
    for (int64_t jb = 0; jb < b.cols(); ++jb) {
      for (int64_t ia = 0; ia < a.rows(); ++ia) {
        for (int64_t ib = 0; ib < b.rows(); ++ib) {
          out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
        }
      }
    }
  }
  return out;
}

double prob_bits_zero(const cplx* amps, size_t n, std::span<const int> bits) {
  size_t mask = 0;
  for (int b : bits) mask |= size_t{1} << b;
  double p = 0;
  for (size_t i = 0; i < n; ++i) {
    if ((i & mask) == 0) p += std::norm(amps[i]);
  }
  return p;
}

double prob_bit_one(const cplx* amps, size_t n, int bit) {
  const size_t mask = size_t{1} << bit;
  double p = 0;
  for (size_t i = 0; i < n; ++i) {
    if (i & mask) p += std::norm(amps[i]);
  }
  return p;
}

void dephase(Mat& rho, int num_qubits, std::span<const int> qubits) {
  size_t mask = 0;
  for (int q : qubits) mask |= size_t{1} << bit_position(num_qubits, q);
  const size_t d = static_cast<size_t>(rho.rows());
  for (size_t c = 0; c < d; ++c) {
    for (size_t r = 0; r < d; ++r) {
      if ((r & mask) != (c & mask)) rho(r, c) = 0;
    }
  }
}

}  // namespace serial

void apply_1q(cplx* amps, size_t n, int bit, const cplx* m) {
  if (n < kParallelCutoff) return serial::apply_1q(amps, n, bit, m);
  const size_t stride = size_t{1} << bit;
  const size_t low = stride - 1;
  const int64_t pairs = static_cast<int64_t>(n >> 1);
#pragma omp parallel for schedule(static)
  for (int64_t k = 0; k < pairs; ++k) {
    const size_t i0 = ((static_cast<size_t>(k) & ~low) << 1) |
                      (static_cast<size_t>(k) & low);
    const size_t i1 = i0 | stride;
    const cplx a = amps[i0];
    const cplx b = amps[i1];
    amps[i0] = m[0] * a + m[1] * b;
    amps[i1] = m[2] * a + m[3] * b;
  }
}

void apply_2q(cplx* amps, size_t n, int bit_hi, int bit_lo, const cplx* m) {
  if (n < kParallelCutoff) return serial::apply_2q(amps, n, bit_hi, bit_lo, m);
  const int p_lo = std::min(bit_hi, bit_lo);
  const int p_hi = std::max(bit_hi, bit_lo);
  const size_t hi = size_t{1} << bit_hi;
  const size_t lo = size_t{1} << bit_lo;
  const int64_t groups = static_cast<int64_t>(n >> 2);
#pragma omp parallel for schedule(static)
  for (int64_t g = 0; g < groups; ++g) {
    const size_t base =
        expand_zero(expand_zero(static_cast<size_t>(g), p_lo), p_hi);
    const size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
    cplx v[4];
    for (int s = 0; s < 4; ++s) v[s] = amps[idx[s]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] =
          m[4 * r] * v[0] + m[4 * r + 1] * v[1] + m[4 * r + 2] * v[2] +
          m[4 * r + 3] * v[3];
    }
  }
}

void apply_kq(cplx* amps, size_t n, std::span<const int> bits, const Mat& m) {
  const int k = static_cast<int>(bits.size());
  const size_t sub = size_t{1} << k;
  if ((n >> k) < kParallelCutoff / 4) return serial::apply_kq(amps, n, bits, m);
  const auto offs = scatter_offsets(bits);
  const auto sorted = sorted_copy(bits);
  const int64_t groups = static_cast<int64_t>(n >> k);
#pragma omp parallel
  {
    std::vector<cplx> in(sub), out(sub);
#pragma omp for schedule(static)
    for (int64_t g = 0; g < groups; ++g) {
      const size_t base = group_base(static_cast<size_t>(g), sorted);
      for (size_t s = 0; s < sub; ++s) in[s] = amps[base | offs[s]];
      for (size_t r = 0; r < sub; ++r) {
        cplx acc = 0;
        for (size_t c = 0; c < sub; ++c) acc += m(r, c) * in[c];
        out[r] = acc;
      }
      for (size_t s = 0; s < sub; ++s) amps[base | offs[s]] = out[s];
    }
  }
}

void stateprep(cplx* amps, size_t n, std::span<const int> bits,
               std::span<const cplx> sub) {
  if ((n >> bits.size()) < kParallelCutoff) {
    return serial::stateprep(amps, n, bits, sub);
  }
  const auto offs = scatter_offsets(bits);
  const auto sorted = sorted_copy(bits);
  const int64_t groups = static_cast<int64_t>(n >> bits.size());
#pragma omp parallel for schedule(static)
  for (int64_t g = 0; g < groups; ++g) {
    const size_t base = group_base(static_cast<size_t>(g), sorted);
    const cplx v = amps[base];
    for (size_t s = 0; s < sub.size(); ++s) amps[base | offs[s]] = sub[s] * v;
  }
}

Mat reduced_density(const cplx* amps, int num_qubits,
                    std::span<const int> keep) {
  const auto kb = keep_bits(num_qubits, keep);
  const auto tb = complement_bits(num_qubits, keep);
  const auto koffs = scatter_offsets(kb);
  const auto toffs = scatter_offsets(tb);
  const size_t dk = koffs.size();
  if (dk * dk * toffs.size() < kParallelCutoff) {
    return serial::reduced_density(amps, num_qubits, keep);
  }
  Mat out(dk, dk);
  const int64_t entries = static_cast<int64_t>(dk * dk);
#pragma omp parallel for schedule(static)
  for (int64_t e = 0; e < entries; ++e) {
    const size_t a = static_cast<size_t>(e) % dk;
    const size_t b = static_cast<size_t>(e) / dk;
    cplx acc = 0;
    for (size_t t : toffs) acc += amps[koffs[a] | t] * std::conj(amps[koffs[b] | t]);
    out(a, b) = acc;
  }
  return out;
}

Mat partial_trace(const Mat& rho, int num_qubits, std::span<const int> keep) {
  const auto kb = keep_bits(num_qubits, keep);
  const auto tb = complement_bits(num_qubits, keep);
  const auto koffs = scatter_offsets(kb);
  const auto toffs = scatter_offsets(tb);
  const size_t dk = koffs.size();
  if (dk * dk * toffs.size() < kParallelCutoff) {
    return serial::partial_trace(rho, num_qubits, keep);
  }
  Mat out(dk, dk);
  const int64_t entries = static_cast<int64_t>(dk * dk);
#pragma omp parallel for schedule(static)
  for (int64_t e = 0; e < entries; ++e) {
    const size_t a = static_cast<size_t>(e) % dk;
    const size_t b = static_cast<size_t>(e) / dk;
    cplx acc = 0;
    for (size_t t : toffs) acc += rho(koffs[a] | t, koffs[b] | t);
    out(a, b) = acc;
  }
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  const size_t total = static_cast<size_t>(a.size()) * b.size();
  if (total < kParallelCutoff) return serial::kron_vec(a, b);
  Vec out(total);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < a.size(); ++i) {
    for (int64_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

Mat kron_mat(const Mat& a, const Mat& b) {
  const size_t total = static_cast<size_t>(a.size()) * b.size();
  if (total < kParallelCutoff) return serial::kron_mat(a, b);
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
#pragma omp parallel for schedule(static)
  for (int64_t ja = 0; ja < a.cols(); ++ja) {
    for (int64_t jb = 0; jb < b.cols(); ++jb) {
      for (int64_t ia = 0; ia < a.rows(); ++ia) {
        for (int64_t ib = 0; ib < b.rows(); ++ib) {
          out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
        }
      }
    }
  }
  return out;
}

// The probability reductions sum fixed chunks and then combine the chunk
// totals in index order, so results are bit-identical for any thread count.
double prob_bits_zero(const cplx* amps, size_t n, std::span<const int> bits) {
  if (n < kParallelCutoff) return serial::prob_bits_zero(amps, n, bits);
  size_t mask = 0;
  for (int b : bits) mask |= size_t{1} << b;
  const size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
  std::vector<double> part(kReduceChunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t c = 0; c < static_cast<int64_t>(kReduceChunks); ++c) {
    const size_t lo = static_cast<size_t>(c) * chunk;
    const size_t hi = std::min(n, lo + chunk);
    double local = 0;
    for (size_t i = lo; i < hi; ++i) {
      if ((i & mask) == 0) local += std::norm(amps[i]);
    }
    part[c] = local;
  }
  double p = 0;
  for (double v : part) p += v;
  return p;
}

double prob_bit_one(const cplx* amps, size_t n, int bit) {
  if (n < kParallelCutoff) return serial::prob_bit_one(amps, n, bit);
  const size_t mask = size_t{1} << bit;
  const size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
  std::vector<double> part(kReduceChunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int64_t c = 0; c < static_cast<int64_t>(kReduceChunks); ++c) {
    const size_t lo = static_cast<size_t>(c) * chunk;
    const size_t hi = std::min(n, lo + chunk);
    double local = 0;
    for (size_t i = lo; i < hi; ++i) {
      if (i & mask) local += std::norm(amps[i]);
    }
    part[c] = local;
  }
  double p = 0;
  for (double v : part) p += v;
  return p;
}

void dephase(Mat& rho, int num_qubits, std::span<const int> qubits) {
  const size_t d = static_cast<size_t>(rho.rows());
  if (d * d < kParallelCutoff) return serial::dephase(rho, num_qubits, qubits);
  size_t mask = 0;
  for (int q : qubits) mask |= size_t{1} << bit_position(num_qubits, q);
#pragma omp parallel for schedule(static)
  for (int64_t c = 0; c < static_cast<int64_t>(d); ++c) {
    for (size_t r = 0; r < d; ++r) {
      if ((r & mask) != (static_cast<size_t>(c) & mask)) rho(r, c) = 0;
    }
  }
}

}  // namespace niqzk::kernels
