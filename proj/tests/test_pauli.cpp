// Copyright 2026 The tetronsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tetron/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

using namespace tetron;

TEST(PauliString, ParsePrintRoundTrip) {
  for (const char* s : {"X", "-ZY", "XI", "IIYZ", "-I"}) {
    EXPECT_EQ(PauliString::parse(s).str(), s);
  }
  EXPECT_EQ(PauliString::parse("+XZ").str(), "XZ");
  EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString::parse(""), std::invalid_argument);
}

TEST(PauliString, MatrixBasics) {
  CMatrix z = pauli_matrix(PauliString::parse("Z")).matrix();
  EXPECT_EQ(z(0, 0), cplx(1));
  EXPECT_EQ(z(1, 1), cplx(-1));
  EXPECT_EQ(z(0, 1), cplx(0));
  EXPECT_TRUE(pauli_matrix(PauliString::parse("II")).matrix().isApprox(CMatrix::Identity(4, 4)));
  // qubit 0 is the left kron factor
  CMatrix xi = pauli_matrix(PauliString::parse("XI")).matrix();
  EXPECT_EQ(xi(2, 0), cplx(1));
  EXPECT_EQ(xi(1, 0), cplx(0));
}

TEST(PauliString, ProductPhaseMatchesMatrices) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      PauliString a = testutil::random_pauli(n, rng);
      PauliString b = testutil::random_pauli(n, rng);
      PauliProduct ab = multiply(a, b);
      CMatrix lhs = pauli_matrix(a).matrix() * pauli_matrix(b).matrix();
      CMatrix rhs = ab.phase.value() * pauli_matrix(ab.pauli).matrix();
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14) << a.str() << " * " << b.str();
    }
  }
  // X Z = -i Y, Z X = +i Y, so XZ = -ZX
  PauliProduct xz = multiply(PauliString::parse("X"), PauliString::parse("Z"));
  PauliProduct zx = multiply(PauliString::parse("Z"), PauliString::parse("X"));
  EXPECT_EQ(xz.pauli.str(), "Y");
  EXPECT_EQ(xz.phase.value(), cplx(0, -1));
  EXPECT_EQ(zx.phase.value(), cplx(0, 1));
}

TEST(PauliString, CommutesAgreesWithCommutator) {
  for (int n = 1; n <= 3; ++n) {
    int count = 1 << (2 * n);
    for (int i = 0; i < count; ++i) {
      for (int j = 0; j < count; ++j) {
        PauliString p = pauli_basis_element(n, i), q = pauli_basis_element(n, j);
        CMatrix a = pauli_matrix(p).matrix(), b = pauli_matrix(q).matrix();
        bool dense = (a * b - b * a).norm() < 1e-12;
        EXPECT_EQ(commutes(p, q), dense);
      }
    }
  }
  EXPECT_FALSE(commutes(PauliString::parse("X"), PauliString::parse("Z")));
  EXPECT_TRUE(commutes(PauliString::parse("XX"), PauliString::parse("ZZ")));
  EXPECT_THROW(commutes(PauliString::parse("X"), PauliString::parse("XX")), std::invalid_argument);
}

TEST(Projector, Properties) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + int(rng() % 3);
    PauliString p = testutil::random_pauli(n, rng);
    if (p.is_identity_letters()) continue;
    for (int s : {+1, -1}) {
      CMatrix pi = projector(p, s).matrix();
      EXPECT_LT((pi * pi - pi).cwiseAbs().maxCoeff(), 1e-14);
    }
    CMatrix sum = projector(p, 1).matrix() + projector(p, -1).matrix();
    EXPECT_LT((sum - CMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_TRUE(projector(PauliString::parse("Z"), 1).matrix().isApprox(
      (CMatrix(2, 2) << 1, 0, 0, 0).finished()));
  // XX = -1 subspace: eigenvalues {1,1,0,0}, eigenvectors odd under XX
  CMatrix pm = projector(PauliString::parse("XX"), -1).matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pm);
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-14);
  EXPECT_NEAR(es.eigenvalues()(3), 1.0, 1e-14);
  EXPECT_NEAR(pm.trace().real(), 2.0, 1e-14);
  CMatrix xx = pauli_matrix(PauliString::parse("XX")).matrix();
  EXPECT_LT((xx * pm + pm).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(projector(PauliString::parse("II"), 1), std::invalid_argument);
}

TEST(Superoperator, IdentityAndDepolarizing) {
  Superoperator id = channel_to_superop([](const DenseOperator& r) { return r; }, 1);
  EXPECT_TRUE(id.transfer_matrix().isApprox(RMatrix::Identity(4, 4)));
  double p = 0.3;
  // dep(rho) = (1 - 4p/3) rho + (4p/3) I/2 written out directly
  Superoperator dep = channel_to_superop(
      [p](const DenseOperator& r) {
        DenseOperator mixed(1, r.trace() * CMatrix::Identity(2, 2) / 2.0);
        return DenseOperator(1, (1 - 4 * p / 3) * r.matrix() + (4 * p / 3) * mixed.matrix());
      },
      1);
  RMatrix expect = RMatrix::Identity(4, 4) * (1 - 4 * p / 3);
  expect(0, 0) = 1.0;
  EXPECT_LT((dep.transfer_matrix() - expect).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(dep.is_trace_preserving());
}

TEST(Superoperator, SGateRotatesXY) {
  CMatrix s(2, 2);
  s << 1, 0, 0, cplx(0, 1);
  Superoperator r = Superoperator::unitary(DenseOperator(1, s));
  // S X S^dag = Y, S Y S^dag = -X
  RMatrix expect = RMatrix::Zero(4, 4);
  expect(0, 0) = 1;
  expect(2, 1) = 1;
  expect(1, 2) = -1;
  expect(3, 3) = 1;
  EXPECT_LT((r.transfer_matrix() - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Superoperator, CompositionIsMatrixProduct) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + trial % 2;
    DenseOperator u1 = testutil::random_unitary(n, rng), u2 = testutil::random_unitary(n, rng);
    double p = 0.2 * testutil::uniform(rng);
    auto noisy = [&](const DenseOperator& r) {
      DenseOperator mixed(n, r.trace() * CMatrix::Identity(r.dimension(), r.dimension()) / double(r.dimension()));
      return DenseOperator(n, (1 - p) * (u1 * r * u1.adjoint()).matrix() + p * mixed.matrix());
    };
    auto unit = [&](const DenseOperator& r) { return u2 * r * u2.adjoint(); };
    Superoperator a = channel_to_superop(noisy, n), b = channel_to_superop(unit, n);
    Superoperator ab = channel_to_superop([&](const DenseOperator& r) { return noisy(unit(r)); }, n);
    EXPECT_LT(((a * b).transfer_matrix() - ab.transfer_matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Fidelity, ClosedFormMatchesHaarAverage) {
  std::mt19937_64 rng(99);
  CMatrix s(2, 2);
  s << 1, 0, 0, cplx(0, 1);
  DenseOperator sg(1, s);
  EXPECT_NEAR(average_gate_fidelity(Superoperator::unitary(sg), sg), 1.0, 1e-10);

  double p = 0.3;
  auto dep = [p](const DenseOperator& r) {
    CMatrix out = (1 - p) * r.matrix();
    for (const char* l : {"X", "Y", "Z"}) {
      CMatrix m = pauli_matrix(PauliString::parse(l)).matrix();
      out += (p / 3) * m * r.matrix() * m;
    }
    return DenseOperator(1, out);
  };
  Superoperator sd = channel_to_superop(dep, 1);
  DenseOperator id = DenseOperator::identity(1);
  double closed = average_gate_fidelity(sd, id);
  EXPECT_NEAR(closed, 1 - 2 * p / 3, 1e-12);

  // Haar Monte Carlo over 2e4 pure states
  double acc = 0.0;
  const int samples = 20000;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXcd psi = testutil::random_state(1, rng);
    DenseOperator rho = DenseOperator::pure(psi);
    acc += (psi.adjoint() * dep(rho).matrix() * psi)(0, 0).real();
  }
  EXPECT_NEAR(acc / samples, closed, 2e-3);

  // Random unitary vs noisy version of itself
  DenseOperator u = testutil::random_unitary(1, rng);
  auto noisy_u = [&](const DenseOperator& r) { return dep(u * r * u.adjoint()); };
  double f = average_gate_fidelity(channel_to_superop(noisy_u, 1), u);
  acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXcd psi = testutil::random_state(1, rng);
    Eigen::VectorXcd target = u.matrix() * psi;
    acc += (target.adjoint() * noisy_u(DenseOperator::pure(psi)).matrix() * target)(0, 0).real();
  }
  EXPECT_NEAR(acc / samples, f, 2e-3);

  // fully depolarizing floor
  auto full = [](const DenseOperator& r) { return DenseOperator(1, r.trace() * CMatrix::Identity(2, 2) / 2.0); };
  EXPECT_NEAR(average_gate_fidelity(channel_to_superop(full, 1), u), 0.5, 1e-12);
}

TEST(Fidelity, SubnormalizedNeedsFlag) {
  auto half = [](const DenseOperator& r) { return DenseOperator(1, 0.5 * r.matrix()); };
  Superoperator h = channel_to_superop(half, 1);
  EXPECT_THROW(average_gate_fidelity(h, DenseOperator::identity(1)), std::invalid_argument);
  EXPECT_NEAR(average_gate_fidelity(h, DenseOperator::identity(1), Normalization::kConditionOnSuccess), 1.0, 1e-12);
}
