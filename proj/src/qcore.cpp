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

#include "niqzk/qcore.hpp"

#include <algorithm>
#include <cmath>

#include "niqzk/kernels.hpp"

namespace niqzk {

namespace {

void check_same_width(const DensityOperator& a, const DensityOperator& b,
                      const char* op) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument(std::string(op) + ": qubit counts differ (" +
                                std::to_string(a.num_qubits()) + " vs " +
                                std::to_string(b.num_qubits()) + ")");
  }
}

std::vector<int> checked_sorted_subset(int num_qubits,
                                       const std::vector<int>& qubits,
                                       const char* op) {
  std::vector<int> s = qubits;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= num_qubits) {
      throw std::invalid_argument(std::string(op) + ": qubit index " +
                                  std::to_string(s[i]) + " out of range");
    }
    if (i > 0 && s[i] == s[i - 1]) {
      throw std::invalid_argument(std::string(op) + ": duplicate qubit index " +
                                  std::to_string(s[i]));
    }
  }
  return s;
}

std::vector<int> complement_of(int num_qubits, const std::vector<int>& sorted) {
  std::vector<int> out;
  out.reserve(num_qubits - sorted.size());
  std::size_t j = 0;
  for (int q = 0; q < num_qubits; ++q) {
    if (j < sorted.size() && sorted[j] == q) {
      ++j;
    } else {
      out.push_back(q);
    }
  }
  return out;
}

// Offset of sub-index s scattered onto the qubits' bit positions, first
// listed qubit most significant.
std::vector<std::uint64_t> qubit_scatter(int num_qubits,
                                         const std::vector<int>& qubits) {
  const int k = static_cast<int>(qubits.size());
  std::vector<std::uint64_t> offs(std::uint64_t{1} << k, 0);
  for (std::uint64_t s = 0; s < offs.size(); ++s) {
    std::uint64_t v = 0;
    for (int j = 0; j < k; ++j) {
      if ((s >> (k - 1 - j)) & 1) {
        v |= std::uint64_t{1} << bit_position(num_qubits, qubits[j]);
      }
    }
    offs[s] = v;
  }
  return offs;
}

// Positive square root of a density matrix via eigendecomposition.
Mat matrix_sqrt_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// Orthonormal columns spanning the orthogonal complement of col(b).
Mat orthonormal_complement(const Mat& b) {
  const Eigen::Index d = b.rows();
  const Eigen::Index r = b.cols();
  if (r == 0) return Mat::Identity(d, d);
  Mat padded(d, r + d);
  padded.leftCols(r) = b;
  padded.rightCols(d) = Mat::Identity(d, d);
  Eigen::HouseholderQR<Mat> qr(padded);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  return q.rightCols(d - r);
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

PureState tensor(const PureState& a, const PureState& b) {
  const int q = a.num_qubits() + b.num_qubits();
  limits::require_pure(q, "tensor");
  return PureState(q, kernels::kron_vec(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  const int q = a.num_qubits() + b.num_qubits();
  limits::require_density(q, "tensor");
  return DensityOperator(q, kernels::kron_mat(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<int>& keep) {
  const auto sorted =
      checked_sorted_subset(rho.num_qubits(), keep, "partial_trace");
  Mat out = kernels::partial_trace(rho.matrix(), rho.num_qubits(), sorted);
  // Re-symmetrize: the contraction can leave ~1e-16 Hermiticity drift.
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityOperator(static_cast<int>(sorted.size()), std::move(out));
}

DensityOperator partial_trace(const PureState& psi,
                              const std::vector<int>& keep) {
  const auto sorted =
      checked_sorted_subset(psi.num_qubits(), keep, "partial_trace");
  limits::require_density(static_cast<int>(sorted.size()), "partial_trace");
  Mat out = kernels::reduced_density(psi.amplitudes().data(), psi.num_qubits(),
                                     sorted);
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityOperator(static_cast<int>(sorted.size()), std::move(out));
}

double trace_distance(const DensityOperator& rho,
                      const DensityOperator& sigma) {
  check_same_width(rho, sigma, "trace_distance");
  const Eigen::VectorXd lam =
      hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return std::clamp(0.5 * lam.cwiseAbs().sum(), 0.0, 1.0);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  check_same_width(rho, sigma, "fidelity");
  const Mat root = matrix_sqrt_psd(rho.matrix());
  const Eigen::VectorXd lam =
      hermitian_eigenvalues(root * sigma.matrix() * root);
  return std::clamp(lam.cwiseMax(0.0).cwiseSqrt().sum(), 0.0, 1.0);
}

PureState epr_pairs(int k) {
  if (k < 0) throw std::invalid_argument("epr_pairs: negative pair count");
  limits::require_pure(2 * k, "epr_pairs");
  const std::uint64_t half = dim_of(k);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(half * half));
  const double a = 1.0 / std::sqrt(static_cast<double>(half));
  for (std::uint64_t z = 0; z < half; ++z) {
    v[static_cast<Eigen::Index>(z * half + z)] = a;
  }
  return PureState(2 * k, std::move(v));
}

PureState purify(const DensityOperator& rho) {
  const int q = rho.num_qubits();
  limits::require_pure(2 * q, "purify");
  Eigen::SelfAdjointEigenSolver<Mat> es(
      (rho.matrix() + rho.matrix().adjoint()) / 2.0);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const std::uint64_t d = dim_of(q);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(d * d));
  // Ancilla label 0 gets the largest eigenvalue, so pure inputs purify to
  // |psi>|0...0>.
  for (std::uint64_t i = 0; i < d; ++i) {
    const auto src = static_cast<Eigen::Index>(d - 1 - i);
    const double c = std::sqrt(lam[src]);
    if (c == 0.0) continue;
    for (std::uint64_t x = 0; x < d; ++x) {
      v[static_cast<Eigen::Index>(x * d + i)] =
          c * es.eigenvectors()(static_cast<Eigen::Index>(x), src);
    }
  }
  v /= v.norm();
  return PureState(2 * q, std::move(v));
}

Mat uhlmann_unitary(const PureState& phi, const PureState& psi,
                    const std::vector<int>& pivot) {
  if (phi.num_qubits() != psi.num_qubits()) {
    throw std::invalid_argument("uhlmann_unitary: qubit counts differ");
  }
  const int q = phi.num_qubits();
  const auto piv = checked_sorted_subset(q, pivot, "uhlmann_unitary");
  const auto rest = complement_of(q, piv);
  const auto poffs = qubit_scatter(q, piv);
  const auto roffs = qubit_scatter(q, rest);
  const Eigen::Index da = static_cast<Eigen::Index>(poffs.size());
  const Eigen::Index db = static_cast<Eigen::Index>(roffs.size());

  // Reshape both states across the pivot / non-pivot cut.
  Mat m_phi(da, db), m_psi(da, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < db; ++b) {
      const auto idx = static_cast<Eigen::Index>(poffs[a] | roffs[b]);
      m_phi(a, b) = phi.amplitudes()[idx];
      m_psi(a, b) = psi.amplitudes()[idx];
    }
  }

  const Mat red_phi = m_phi * m_phi.adjoint();
  const Mat red_psi = m_psi * m_psi.adjoint();
  const Eigen::VectorXd gap = hermitian_eigenvalues(red_phi - red_psi);
  if (0.5 * gap.cwiseAbs().sum() > kBuildTol) {
    throw NoUhlmannUnitary(
        "reduced states on the pivot qubits differ by trace distance " +
        std::to_string(0.5 * gap.cwiseAbs().sum()));
  }

  // One shared eigenbasis of the pivot-side reduced state defines both
  // Schmidt frames, so degenerate and null subspaces need no matching.
  Eigen::SelfAdjointEigenSolver<Mat> es((red_phi + red_phi.adjoint()) / 2.0);
  constexpr double kRankTol = 1e-12;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < da; ++i) {
    if (es.eigenvalues()[i] > kRankTol) support.push_back(i);
  }
  const Eigen::Index r = static_cast<Eigen::Index>(support.size());
  Mat b_phi(db, r), b_psi(db, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::Index i = support[j];
    const double s = std::sqrt(es.eigenvalues()[i]);
    const Vec a_conj = es.eigenvectors().col(i).conjugate();
    b_phi.col(j) = (m_phi.transpose() * a_conj) / s;
    b_psi.col(j) = (m_psi.transpose() * a_conj) / s;
  }

  const Mat c_phi = orthonormal_complement(b_phi);
  const Mat c_psi = orthonormal_complement(b_psi);
  Mat u = b_psi * b_phi.adjoint() + c_psi * c_phi.adjoint();

  // Snap to the nearest unitary (polar factor).
  Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

DensityOperator tensor_power_state(const DensityOperator& rho, int r) {
  if (r < 1) throw std::invalid_argument("tensor_power_state: r must be >= 1");
  limits::require_density(r * rho.num_qubits(), "tensor_power_state");
  Mat out = rho.matrix();
  for (int i = 1; i < r; ++i) out = kernels::kron_mat(out, rho.matrix());
  return DensityOperator(r * rho.num_qubits(), std::move(out));
}

DensityOperator reorder_qubits(const DensityOperator& rho,
                               const std::vector<int>& new_order) {
  const int q = rho.num_qubits();
  if (static_cast<int>(new_order.size()) != q) {
    throw std::invalid_argument("reorder_qubits: order length mismatch");
  }
  std::vector<bool> seen(q, false);
  for (int v : new_order) {
    if (v < 0 || v >= q || seen[v]) {
      throw std::invalid_argument("reorder_qubits: not a permutation");
    }
    seen[v] = true;
  }
  const std::uint64_t d = dim_of(q);
  std::vector<std::uint64_t> map(d);
  for (std::uint64_t i = 0; i < d; ++i) {
    std::uint64_t old_idx = 0;
    for (int k = 0; k < q; ++k) {
      if ((i >> bit_position(q, k)) & 1) {
        old_idx |= std::uint64_t{1} << bit_position(q, new_order[k]);
      }
    }
    map[i] = old_idx;
  }
  Mat out(d, d);
  for (std::uint64_t c = 0; c < d; ++c) {
    for (std::uint64_t r = 0; r < d; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rho.matrix()(static_cast<Eigen::Index>(map[r]),
                       static_cast<Eigen::Index>(map[c]));
    }
  }
  return DensityOperator(q, std::move(out));
}

PureState apply_on_qubits(const PureState& psi, const std::vector<int>& qubits,
                          const Mat& u) {
  const int q = psi.num_qubits();
  std::vector<int> bits;
  bits.reserve(qubits.size());
  for (int k : qubits) {
    if (k < 0 || k >= q) {
      throw std::invalid_argument("apply_on_qubits: qubit index out of range");
    }
    bits.push_back(bit_position(q, k));
  }
  if (u.rows() != static_cast<Eigen::Index>(std::uint64_t{1} << qubits.size()) ||
      u.rows() != u.cols()) {
    throw std::invalid_argument("apply_on_qubits: matrix dimension mismatch");
  }
  Vec amps = psi.amplitudes();
  kernels::apply_kq(amps.data(), static_cast<std::size_t>(amps.size()), bits,
                    u);
  return PureState(q, std::move(amps));
}

DensityOperator apply_on_qubits(const DensityOperator& rho,
                                const std::vector<int>& qubits, const Mat& u) {
  const int q = rho.num_qubits();
  std::vector<int> row_bits, col_bits;
  for (int k : qubits) {
    if (k < 0 || k >= q) {
      throw std::invalid_argument("apply_on_qubits: qubit index out of range");
    }
    row_bits.push_back(bit_position(q, k));
    col_bits.push_back(q + bit_position(q, k));
  }
  if (u.rows() != static_cast<Eigen::Index>(std::uint64_t{1} << qubits.size()) ||
      u.rows() != u.cols()) {
    throw std::invalid_argument("apply_on_qubits: matrix dimension mismatch");
  }
  // Column-major rho viewed as a flat 2^{2q} array: row bits are the low q
  // positions, so U rho U^dag is U on the row bits and conj(U) on the column
  // bits.
  Mat m = rho.matrix();
  const std::size_t n = static_cast<std::size_t>(m.size());
  kernels::apply_kq(m.data(), n, row_bits, u);
  kernels::apply_kq(m.data(), n, col_bits, u.conjugate());
  m = (m + m.adjoint().eval()) / 2.0;
  return DensityOperator(q, std::move(m));
}

}  // namespace niqzk
