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

#include "niqzk/states.hpp"

#include <atomic>
#include <cmath>

namespace niqzk {

namespace limits {

namespace {
std::atomic<int> g_density_cap{14};
}

int density_qubit_cap() { return g_density_cap.load(); }

void set_density_qubit_cap(int qubits) {
  if (qubits < 1 || qubits > 30) {
    throw std::invalid_argument("density qubit cap must be in [1, 30]");
  }
  g_density_cap.store(qubits);
}

int pure_qubit_cap() { return 2 * density_qubit_cap(); }

void require_density(int qubits, const char* op) {
  if (qubits > density_qubit_cap()) {
    throw DimensionCapError(op, qubits, density_qubit_cap());
  }
}

void require_pure(int qubits, const char* op) {
  if (qubits > pure_qubit_cap()) {
    throw DimensionCapError(op, qubits, pure_qubit_cap());
  }
}

}  // namespace limits

PureState::PureState(int num_qubits, Vec amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits_ < 0) throw std::invalid_argument("negative qubit count");
  if (static_cast<std::uint64_t>(amps_.size()) != dim_of(num_qubits_)) {
    throw std::invalid_argument("amplitude vector length is not 2^num_qubits");
  }
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kAlgebraTol) {
    throw std::invalid_argument("pure state is not normalized (|norm^2 - 1| = " +
                                std::to_string(std::abs(norm2 - 1.0)) + ")");
  }
}

PureState PureState::zero(int num_qubits) { return basis(num_qubits, 0); }

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim_of(num_qubits)));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return PureState(num_qubits, std::move(v));
}

DensityOperator::DensityOperator(int num_qubits, Mat matrix)
    : num_qubits_(num_qubits), m_(std::move(matrix)) {
  if (num_qubits_ < 0) throw std::invalid_argument("negative qubit count");
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits_));
  if (m_.rows() != d || m_.cols() != d) {
    throw std::invalid_argument("density matrix dimension is not 2^q x 2^q");
  }
  double herm_err = 0;
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r <= c; ++r) {
      herm_err = std::max(herm_err, std::abs(m_(r, c) - std::conj(m_(c, r))));
    }
  }
  if (herm_err > kAlgebraTol) {
    throw std::invalid_argument("density matrix is not Hermitian (err = " +
                                std::to_string(herm_err) + ")");
  }
  const double tr_err = std::abs(m_.trace() - cplx(1.0));
  if (tr_err > kAlgebraTol) {
    throw std::invalid_argument("density matrix trace differs from 1 by " +
                                std::to_string(tr_err));
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (m_(i, i).real() < -kAlgebraTol) {
      throw std::invalid_argument("density matrix has a negative diagonal entry");
    }
  }
}

DensityOperator DensityOperator::maximally_mixed(int num_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  return DensityOperator(num_qubits,
                         Mat::Identity(d, d) / static_cast<double>(d));
}

DensityOperator DensityOperator::zero_state(int num_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  Mat m = Mat::Zero(d, d);
  m(0, 0) = 1.0;
  return DensityOperator(num_qubits, std::move(m));
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.num_qubits(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es((m_ + m_.adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RegisterPartition::RegisterPartition(
    std::vector<std::pair<std::string, int>> registers)
    : regs_(std::move(registers)), total_(0) {
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    if (regs_[i].second < 0) {
      throw std::invalid_argument("register '" + regs_[i].first +
                                  "' has a negative qubit count");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (regs_[j].first == regs_[i].first) {
        throw std::invalid_argument("duplicate register name '" +
                                    regs_[i].first + "'");
      }
    }
    total_ += regs_[i].second;
  }
}

int RegisterPartition::offset(std::string_view name) const {
  int off = 0;
  for (const auto& [n, c] : regs_) {
    if (n == name) return off;
    off += c;
  }
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

int RegisterPartition::count(std::string_view name) const {
  for (const auto& [n, c] : regs_) {
    if (n == name) return c;
  }
  throw std::invalid_argument("unknown register '" + std::string(name) + "'");
}

std::vector<int> RegisterPartition::range(std::string_view name) const {
  const int off = offset(name);
  const int cnt = count(name);
  std::vector<int> out(cnt);
  for (int i = 0; i < cnt; ++i) out[i] = off + i;
  return out;
}

}  // namespace niqzk
