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

#include <gtest/gtest.h>

#include <cmath>

#include "niqzk/rng.hpp"
#include "testutil.hpp"

using namespace niqzk;
namespace tu = testutil;

namespace {

PureState ket(std::initializer_list<cplx> amps) {
  Vec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (cplx a : amps) v[i++] = a;
  int q = 0;
  while ((Eigen::Index{1} << q) < v.size()) ++q;
  return PureState(q, std::move(v));
}

}  // namespace

TEST(States, PureStateValidatesNormAndLength) {
  Vec bad(2);
  bad << 1.0, 1.0;
  EXPECT_THROW(PureState(1, bad), std::invalid_argument);
  EXPECT_THROW(PureState(2, Vec::Ones(3)), std::invalid_argument);
  EXPECT_NO_THROW(PureState::zero(0));
}

TEST(States, DensityOperatorValidatesHermitianTrace) {
  Mat m(2, 2);
  m << cplx(0.5), cplx(0.3, 0.1), cplx(0.3, 0.2), cplx(0.5);
  EXPECT_THROW(DensityOperator(1, m), std::invalid_argument);
  m << cplx(0.7), cplx(0, 0.1), cplx(0, -0.1), cplx(0.7);
  EXPECT_THROW(DensityOperator(1, m), std::invalid_argument);
}

TEST(States, RegisterPartitionRanges) {
  RegisterPartition layout({{"V", 2}, {"M", 1}, {"P", 3}});
  EXPECT_EQ(layout.total_qubits(), 6);
  EXPECT_EQ(layout.offset("M"), 2);
  EXPECT_EQ(layout.range("P"), (std::vector<int>{3, 4, 5}));
  EXPECT_THROW(layout.offset("X"), std::invalid_argument);
  EXPECT_THROW(RegisterPartition({{"A", 1}, {"A", 2}}), std::invalid_argument);
}

TEST(Qcore, TensorBasisStates) {
  const PureState zero = PureState::zero(1);
  const PureState one = PureState::basis(1, 1);
  const PureState z1 = tensor(zero, one);
  EXPECT_EQ(z1.num_qubits(), 2);
  EXPECT_NEAR(std::abs(z1.amplitudes()[1] - cplx(1.0)), 0.0, 1e-15);
}

TEST(Qcore, TensorWithScalarStateIsIdentity) {
  Rng rng(31);
  const DensityOperator rho = tu::random_density(2, rng);
  const DensityOperator scalar(0, Mat::Ones(1, 1));
  const DensityOperator out = tensor(rho, scalar);
  EXPECT_LT(tu::max_abs_diff(out.matrix(), rho.matrix()), 1e-15);
}

TEST(Qcore, TensorOfMaximallyMixed) {
  const DensityOperator half = DensityOperator::maximally_mixed(1);
  const DensityOperator quarter = tensor(half, half);
  EXPECT_LT(
      tu::max_abs_diff(quarter.matrix(), Mat::Identity(4, 4) / 4.0), 1e-15);
}

TEST(Qcore, PartialTraceOfEprPairIsMaximallyMixed) {
  const DensityOperator red =
      partial_trace(DensityOperator::from_pure(epr_pairs(1)), {0});
  EXPECT_LT(tu::max_abs_diff(red.matrix(), Mat::Identity(2, 2) / 2.0), 1e-15);
}

TEST(Qcore, PartialTraceOfProductState) {
  const PureState s01 = PureState::basis(2, 1);  // |01>
  const DensityOperator red = partial_trace(s01, {1});
  Mat want = Mat::Zero(2, 2);
  want(1, 1) = 1.0;
  EXPECT_LT(tu::max_abs_diff(red.matrix(), want), 1e-15);
}

TEST(Qcore, PartialTraceMatchesIndexContractionOracle) {
  Rng rng(32);
  const PureState psi = tu::random_state(3, rng);
  const DensityOperator red = partial_trace(psi, {0, 2});
  const Mat full = psi.amplitudes() * psi.amplitudes().adjoint();
  EXPECT_LT(tu::max_abs_diff(red.matrix(),
                             tu::naive_partial_trace(full, 3, {0, 2})),
            1e-12);
  EXPECT_NEAR(red.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_GT(red.min_eigenvalue(), -1e-12);
}

TEST(Qcore, PartialTraceRejectsOutOfRange) {
  Rng rng(33);
  const DensityOperator rho = tu::random_density(2, rng);
  EXPECT_THROW(partial_trace(rho, {2}), std::invalid_argument);
}

TEST(Qcore, TraceDistanceExamples) {
  Rng rng(34);
  const DensityOperator rho = tu::random_density(2, rng);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-12);

  const DensityOperator p0 = DensityOperator::zero_state(1);
  const DensityOperator p1 =
      DensityOperator::from_pure(PureState::basis(1, 1));
  EXPECT_NEAR(trace_distance(p0, p1), 1.0, 1e-12);
  // Eigenvalues of |0><0| - I/2 are diag(1/2, -1/2).
  EXPECT_NEAR(trace_distance(p0, DensityOperator::maximally_mixed(1)), 0.5,
              1e-12);
}

TEST(Qcore, TraceDistanceIsAMetric) {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 1 + static_cast<int>(rng.below(3));
    const DensityOperator a = tu::random_density(q, rng);
    const DensityOperator b = tu::random_density(q, rng);
    const DensityOperator c = tu::random_density(q, rng);
    const double dab = trace_distance(a, b);
    EXPECT_EQ(dab, trace_distance(b, a));
    EXPECT_LE(trace_distance(a, c), dab + trace_distance(b, c) + kAlgebraTol);
    EXPECT_GE(dab, 0.0);
    EXPECT_LE(dab, 1.0);
  }
}

TEST(Qcore, TraceDistanceUnitaryInvariance) {
  Rng rng(36);
  for (int trial = 0; trial < 25; ++trial) {
    const int q = 1 + static_cast<int>(rng.below(3));
    const DensityOperator a = tu::random_density(q, rng);
    const DensityOperator b = tu::random_density(q, rng);
    const Mat u = haar_unitary(1 << q, rng);
    const DensityOperator ua(q, u * a.matrix() * u.adjoint());
    const DensityOperator ub(q, u * b.matrix() * u.adjoint());
    EXPECT_NEAR(trace_distance(ua, ub), trace_distance(a, b), kAlgebraTol);
  }
}

TEST(Qcore, DistancesAreMonotoneUnderPartialTrace) {
  Rng rng(37);
  for (int trial = 0; trial < 25; ++trial) {
    const DensityOperator a = tu::random_density(3, rng);
    const DensityOperator b = tu::random_density(3, rng);
    const std::vector<int> keep = {0, 2};
    const double d_full = trace_distance(a, b);
    const double d_red =
        trace_distance(partial_trace(a, keep), partial_trace(b, keep));
    EXPECT_LE(d_red, d_full + kAlgebraTol);
    const double f_full = fidelity(a, b);
    const double f_red =
        fidelity(partial_trace(a, keep), partial_trace(b, keep));
    EXPECT_GE(f_red, f_full - kAlgebraTol);
  }
}

TEST(Qcore, FidelityExamples) {
  Rng rng(38);
  const DensityOperator rho = tu::random_density(2, rng);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-9);

  const DensityOperator p0 = DensityOperator::zero_state(1);
  const DensityOperator p1 =
      DensityOperator::from_pure(PureState::basis(1, 1));
  EXPECT_NEAR(fidelity(p0, p1), 0.0, 1e-9);
  EXPECT_NEAR(fidelity(p0, DensityOperator::maximally_mixed(1)), M_SQRT1_2,
              1e-9);
}

TEST(Qcore, FuchsVanDeGraafSandwich) {
  Rng rng(39);
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 1 + static_cast<int>(rng.below(3));
    const DensityOperator a = tu::random_density(q, rng);
    const DensityOperator b = tu::random_density(q, rng);
    const double d = trace_distance(a, b);
    const double f = fidelity(a, b);
    EXPECT_LE(1.0 - f, d + kAlgebraTol);
    EXPECT_LE(d, std::sqrt(1.0 - f * f) + kAlgebraTol);
  }
}

TEST(Qcore, FidelityIsMultiplicativeOverTensorPowers) {
  Rng rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator a = tu::random_density(1, rng);
    const DensityOperator b = tu::random_density(1, rng);
    const double f = fidelity(a, b);
    for (int r = 2; r <= 3; ++r) {
      EXPECT_NEAR(fidelity(tensor_power_state(a, r), tensor_power_state(b, r)),
                  std::pow(f, r), kBuildTol);
    }
  }
}

TEST(Qcore, EprPairs) {
  EXPECT_EQ(epr_pairs(0).num_qubits(), 0);
  EXPECT_NEAR(std::abs(epr_pairs(0).amplitudes()[0]), 1.0, 1e-15);

  const PureState pair = epr_pairs(1);
  Vec want(4);
  want << M_SQRT1_2, 0, 0, M_SQRT1_2;
  EXPECT_LT(tu::max_abs_diff(pair.amplitudes(), want), 1e-15);

  const DensityOperator verifier_half =
      partial_trace(epr_pairs(2), {0, 1});
  EXPECT_LT(tu::max_abs_diff(verifier_half.matrix(),
                             Mat::Identity(4, 4) / 4.0),
            1e-12);
  const DensityOperator prover_half = partial_trace(epr_pairs(2), {2, 3});
  EXPECT_LT(
      tu::max_abs_diff(prover_half.matrix(), Mat::Identity(4, 4) / 4.0),
      1e-12);
}

TEST(Qcore, PurifyRoundTrip) {
  // purify(|0><0|) is |00> up to a global phase.
  const PureState zz = purify(DensityOperator::zero_state(1));
  EXPECT_NEAR(std::abs(zz.amplitudes()[0]), 1.0, 1e-12);

  const PureState mixed_purified = purify(DensityOperator::maximally_mixed(1));
  const DensityOperator back = partial_trace(mixed_purified, {0});
  EXPECT_LT(tu::max_abs_diff(back.matrix(), Mat::Identity(2, 2) / 2.0), 1e-12);

  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int q = 1 + static_cast<int>(rng.below(3));
    const DensityOperator rho = tu::random_density(q, rng);
    const PureState psi = purify(rho);
    ASSERT_EQ(psi.num_qubits(), 2 * q);
    std::vector<int> keep(q);
    for (int i = 0; i < q; ++i) keep[i] = i;
    EXPECT_LT(
        tu::max_abs_diff(partial_trace(psi, keep).matrix(), rho.matrix()),
        kAlgebraTol);
  }
}

TEST(Qcore, UhlmannIdentityCase) {
  Rng rng(42);
  const PureState phi = tu::random_state(3, rng);
  const Mat u = uhlmann_unitary(phi, phi, {0});
  EXPECT_TRUE(is_unitary(u, kBuildTol));
  const PureState mapped = apply_on_qubits(phi, {1, 2}, u);
  EXPECT_LT(tu::max_abs_diff(mapped.amplitudes(), phi.amplitudes()), kBuildTol);
}

TEST(Qcore, UhlmannBitFlipCase) {
  const PureState phi = epr_pairs(1);
  const PureState psi = ket({0, M_SQRT1_2, M_SQRT1_2, 0});
  const Mat u = uhlmann_unitary(phi, psi, {0});
  EXPECT_TRUE(is_unitary(u, kBuildTol));
  const PureState mapped = apply_on_qubits(phi, {1}, u);
  EXPECT_LT(tu::max_abs_diff(mapped.amplitudes(), psi.amplitudes()), kBuildTol);
}

TEST(Qcore, UhlmannConstructiveRoundTrip) {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState phi = tu::random_state(3, rng);
    const Mat v = haar_unitary(4, rng);
    const PureState psi = apply_on_qubits(phi, {1, 2}, v);
    const Mat u = uhlmann_unitary(phi, psi, {0});
    EXPECT_TRUE(is_unitary(u, kBuildTol));
    const PureState mapped = apply_on_qubits(phi, {1, 2}, u);
    EXPECT_LT(tu::max_abs_diff(mapped.amplitudes(), psi.amplitudes()),
              kBuildTol);
  }
}

TEST(Qcore, UhlmannRejectsMismatchedReductions) {
  const PureState zz = PureState::zero(2);
  const PureState one_zero = PureState::basis(2, 2);  // |10>
  EXPECT_THROW(uhlmann_unitary(zz, one_zero, {0}), NoUhlmannUnitary);
}

TEST(Qcore, TensorPowerState) {
  Rng rng(44);
  const DensityOperator rho = tu::random_density(1, rng);
  EXPECT_LT(tu::max_abs_diff(tensor_power_state(rho, 1).matrix(), rho.matrix()),
            1e-15);
  EXPECT_LT(tu::max_abs_diff(
                tensor_power_state(DensityOperator::maximally_mixed(1), 3)
                    .matrix(),
                Mat::Identity(8, 8) / 8.0),
            1e-15);
}

TEST(Qcore, TensorPowerAmplifiesDistanceFromMixed) {
  Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho = tu::random_density(1, rng);
    const DensityOperator mixed = DensityOperator::maximally_mixed(1);
    const double d = trace_distance(rho, mixed);
    for (int r = 2; r <= 4; ++r) {
      const double dr =
          trace_distance(tensor_power_state(rho, r),
                         DensityOperator::maximally_mixed(r));
      EXPECT_GE(dr, 1.0 - std::pow(1.0 - d * d, r / 2.0) - kAlgebraTol);
    }
  }
}

TEST(Qcore, TensorPowerRespectsDimensionCap) {
  const DensityOperator rho = DensityOperator::maximally_mixed(4);
  EXPECT_THROW(tensor_power_state(rho, 4), DimensionCapError);
}

TEST(Qcore, ReorderQubitsSwapsIndices) {
  // |01> reordered with order {1,0} becomes |10>.
  const DensityOperator rho =
      DensityOperator::from_pure(PureState::basis(2, 1));
  const DensityOperator out = reorder_qubits(rho, {1, 0});
  Mat want = Mat::Zero(4, 4);
  want(2, 2) = 1.0;
  EXPECT_LT(tu::max_abs_diff(out.matrix(), want), 1e-15);
}

TEST(Qcore, ReorderQubitsRoundTrip) {
  Rng rng(46);
  const DensityOperator rho = tu::random_density(3, rng);
  const std::vector<int> order = {2, 0, 1};
  std::vector<int> inverse(3);
  for (int i = 0; i < 3; ++i) inverse[order[i]] = i;
  const DensityOperator back = reorder_qubits(reorder_qubits(rho, order),
                                              inverse);
  EXPECT_LT(tu::max_abs_diff(back.matrix(), rho.matrix()), 1e-15);
}
