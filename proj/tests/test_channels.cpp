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

#include "tetron/channels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tetron/state.hpp"
#include "test_util.hpp"

using namespace tetron;

namespace {

CMatrix P(const char* s) { return pauli_matrix(PauliString::parse(s)).matrix(); }

DenseOperator ket(const char* label) {
  // product of |0>,|1>,|+>,|->
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (const char* c = label; *c; ++c) {
    Eigen::VectorXcd q(2);
    double r = 1 / std::sqrt(2.0);
    switch (*c) {
      case '0': q << 1, 0; break;
      case '1': q << 0, 1; break;
      case '+': q << r, r; break;
      default: q << r, -r; break;
    }
    Eigen::VectorXcd out(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) out.segment(2 * i, 2) = v(i) * q;
    v = out;
  }
  return DenseOperator::pure(v);
}

// Independent Kraus-sum oracles written from the model's formulas.
CMatrix dep1_oracle(const CMatrix& r, double p) {
  CMatrix out = (1 - p) * r;
  for (const char* l : {"X", "Y", "Z"}) out += (p / 3) * P(l) * r * P(l);
  return out;
}

CMatrix choi(const ChannelProgram& c) {
  int n = c.num_qubits();
  Eigen::Index d = Eigen::Index(1) << n;
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1;
      out.block(i * d, j * d, d, d) = c(DenseOperator(n, e)).matrix();
    }
  }
  return out;
}

}  // namespace

TEST(NoiseFormulas, AssignmentFromSnr) {
  EXPECT_DOUBLE_EQ(p_a_from_snr(0.0), 0.5);
  // independent erf evaluation via the Maclaurin series
  auto erf_series = [](double x) {
    double sum = 0, term = x;
    for (int n = 0; n < 200; ++n) {
      sum += term / (2 * n + 1);
      term *= -x * x / (n + 1);
    }
    return 2 / std::sqrt(M_PI) * sum;
  };
  for (double snr : {0.52, 1.0, 3.7}) {
    EXPECT_NEAR(p_a_from_snr(snr), 0.5 * (1 - erf_series(snr / std::sqrt(2.0))), 1e-12);
  }
  EXPECT_NEAR(p_a_from_snr(3.7), 1.078e-4, 0.001e-4);
  EXPECT_NEAR(p_a_from_snr(0.52), 0.3015, 1e-3);
  EXPECT_THROW(p_a_from_snr(-1), std::invalid_argument);
  double prev = 1;
  for (double s = 0; s < 6; s += 0.25) {
    EXPECT_LT(p_a_from_snr(s), prev);
    prev = p_a_from_snr(s);
  }
}

TEST(NoiseFormulas, LifetimeChain) {
  EXPECT_EQ(p1_from_lifetime(0.0, 1.0), 0.0);
  EXPECT_NEAR(p1_from_lifetime(1.0, 1e-300), 0.75, 1e-15);
  EXPECT_THROW(p1_from_lifetime(1.0, 0.0), std::invalid_argument);
  double t = t_life_delta(50e-9, 12.0);
  EXPECT_NEAR(t, 50e-9 * std::exp(12.0), 1e-18);
  EXPECT_NEAR(t, 8.14e-3, 0.01e-3);
  EXPECT_NEAR(p1_from_lifetime(1e-6, t), 9.2e-5, 0.05e-5);
  EXPECT_DOUBLE_EQ(t_life_delta(50e-9, 0.0), 50e-9);
  EXPECT_LT(t_life_delta(50e-9, 3), t_life_delta(50e-9, 4));
  double prev = -1;
  for (double tau = 0; tau < 1e-5; tau += 1e-6) {
    EXPECT_GT(p1_from_lifetime(tau, t), prev);
    prev = p1_from_lifetime(tau, t);
  }
}

TEST(NoiseFormulas, SplittingAndRotation) {
  EXPECT_NEAR(t_life_eps(1.0, 2.0, 1.0, 1.0) * 4, t_life_eps(1.0, 1.0, 1.0, 1.0), 1e-15);
  EXPECT_DOUBLE_EQ(t_life_eps(3.0, 3.0, 0.25, 0.75), 1.0);
  EXPECT_NEAR(t_life_eps(1.0, 1.0, 2.0, 6.0), t_life_eps(1.0, 1.0, 1.0, 3.0) / 2, 1e-15);
  EXPECT_THROW(t_life_eps(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(t_life_eps(1.0, 1.0, 0.0, 0.0), std::invalid_argument);

  EXPECT_DOUBLE_EQ(eps_res_wire(50e-6, 0.0), 50e-6);
  double eps = eps_res_wire(50e-6, 20.0);
  EXPECT_NEAR(eps, 1.03e-13, 0.01e-13);
  EXPECT_GT(eps_res_wire(50e-6, 19.0), eps);
  EXPECT_EQ(theta_from_eps(0.0, 1e-6), 0.0);
  double th = theta_from_eps(eps, 1e-6);
  EXPECT_NEAR(th, 1.566e-4, 0.005e-4);
  EXPECT_NEAR(theta_from_eps(eps, 2e-6), 2 * th, 1e-18);
  EXPECT_NEAR(twirl_p1_increment(0.1), std::sin(0.1) * std::sin(0.1), 1e-16);
}

TEST(NoiseFormulas, DeriveNoiseRegime) {
  PhysicalParams ph;
  ph.snr = 3.7;
  ph.delta_over_kT = 12;
  ph.L_over_xi = 20;
  ph.delta = 50e-6;
  ph.tau_elph = 50e-9;
  ph.tau_meas = 1e-6;
  NoiseDerivation d = derive_noise(ph);
  EXPECT_NEAR(d.noise.p_a, 1.1e-4, 0.05e-4);
  EXPECT_NEAR(d.noise.p1, 9.2e-5, 0.05e-5);
  EXPECT_NEAR(d.noise.theta, 1.6e-4, 0.05e-4);

  PhysicalParams inf = ph;
  inf.snr = INFINITY;
  EXPECT_EQ(derive_noise(inf).noise.p_a, 0.0);
  PhysicalParams l0 = ph;
  l0.L_over_xi = 0;
  EXPECT_NEAR(derive_noise(l0).noise.theta, 50e-6 * 1e-6 / kHbarEvS, 1e-9);

  // parallel lifetimes
  PhysicalParams both = ph;
  both.eps_mst = 1e-6;
  both.psd_plus = 1e15;
  both.psd_minus = 1e15;
  NoiseDerivation db = derive_noise(both);
  ASSERT_TRUE(db.t_life_eps.has_value());
  EXPECT_NEAR(1 / db.t_life, 1 / *db.t_life_delta + 1 / *db.t_life_eps, 1e-9 / db.t_life);

  PhysicalParams missing = ph;
  missing.snr.reset();
  try {
    derive_noise(missing);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("snr"), std::string::npos);
  }
}

TEST(Channels, AssignmentExamples) {
  DenseOperator zero = ket("0");
  auto plus = assignment_channel(PauliString::parse("Z"), +1, 0.0)(zero);
  EXPECT_NEAR(plus.trace().real(), 1.0, 1e-15);
  EXPECT_LT(testutil::max_abs_diff(plus, zero), 1e-15);
  EXPECT_NEAR(assignment_channel(PauliString::parse("Z"), -1, 0.0)(zero).trace().real(), 0.0, 1e-15);
  auto flip = assignment_channel(PauliString::parse("Z"), -1, 0.1)(zero);
  EXPECT_NEAR(flip.trace().real(), 0.1, 1e-15);
  EXPECT_LT(testutil::max_abs_diff(flip, DenseOperator(1, 0.1 * zero.matrix())), 1e-15);
}

TEST(Channels, Depolarizing) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    DenseOperator r = testutil::random_density(1, rng);
    DenseOperator out = depolarize1(0.75)(r);
    EXPECT_LT(testutil::max_abs_diff(out, DenseOperator(1, CMatrix::Identity(2, 2) / 2.0)), 1e-14);
    EXPECT_LT((depolarize1(0.3)(r).matrix() - dep1_oracle(r.matrix(), 0.3)).cwiseAbs().maxCoeff(), 1e-14);
    DenseOperator r2 = testutil::random_density(2, rng);
    EXPECT_LT(testutil::max_abs_diff(depolarize2(0.0)(r2), r2), 1e-15);
  }
  DenseOperator plus = ket("+");
  EXPECT_NEAR((P("X") * depolarize1(0.3)(plus).matrix()).trace().real(), 0.6, 1e-14);
  EXPECT_NEAR(channel_to_superop(depolarize1(0.3).as_map(), 1).transfer_matrix()(3, 3), 0.6, 1e-14);
  // two-qubit transfer eigenvalues: weight-1 Paulis 1 - 4p/3, weight-2 1 - 8p/9... derived from
  // the nine-term sum by counting anticommuting factors
  double p = 0.3;
  Superoperator s2 = channel_to_superop(depolarize2(p).as_map(), 2);
  EXPECT_NEAR(s2.transfer_matrix()(1, 1), 1 - 4 * p / 3, 1e-14);   // IX
  EXPECT_NEAR(s2.transfer_matrix()(5, 5), 1 - 8 * p / 9, 1e-14);   // XX
}

TEST(Channels, Idle) {
  DenseOperator plus = ket("+");
  EXPECT_LT(testutil::max_abs_diff(idle_channel(0, 0)(plus), plus), 1e-15);
  EXPECT_LT(testutil::max_abs_diff(idle_channel(0, M_PI / 2)(plus), ket("-")), 1e-12);
  DenseOperator out = idle_channel(0.05, 0.1)(plus);
  EXPECT_NEAR((P("X") * out.matrix()).trace().real(), (1 - 4 * 0.05 / 3) * std::cos(0.2), 1e-14);
  // e^{i theta Z} direction: <Y> = -sin(2 theta) on |+>
  EXPECT_NEAR((P("Y") * idle_channel(0, 0.1)(plus).matrix()).trace().real(), -std::sin(0.2), 1e-14);
}

TEST(Channels, MeasurementCompleteness) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 30; ++k) {
    NoiseParams n{0.5 * testutil::uniform(rng), 0.75 * testutil::uniform(rng), 0.9 * testutil::uniform(rng),
                  3.0 * testutil::uniform(rng)};
    DenseOperator r1 = testutil::random_density(1, rng);
    PauliString p1 = testutil::random_nontrivial_pauli(1, rng);
    double t = meas1_channel(p1, 1, n.p_a, n.p1)(r1).trace().real() +
               meas1_channel(p1, -1, n.p_a, n.p1)(r1).trace().real();
    EXPECT_NEAR(t, 1.0, 1e-12);
    DenseOperator r2 = testutil::random_density(2, rng);
    PauliString pq;
    do pq = testutil::random_nontrivial_pauli(2, rng);
    while (pq.weight() != 2);
    DenseOperator sum = meas2_channel(pq, 1, n.p_a, n.p1, n.p2, n.theta)(r2) +
                        meas2_channel(pq, -1, n.p_a, n.p1, n.p2, n.theta)(r2);
    EXPECT_NEAR(sum.trace().real(), 1.0, 1e-12);
  }
  EXPECT_THROW(meas2_channel(PauliString::parse("ZI"), 1, 0, 0, 0, 0), std::invalid_argument);
}

TEST(Channels, MeasurementReductions) {
  DenseOperator r = ket("+");
  auto pure = meas1_channel(PauliString::parse("X"), 1, 0, 0)(r);
  EXPECT_LT(testutil::max_abs_diff(pure, r), 1e-15);
  auto a = meas1_channel(PauliString::parse("Z"), -1, 0.2, 0)(ket("0"));
  auto b = assignment_channel(PauliString::parse("Z"), -1, 0.2)(ket("0"));
  EXPECT_LT(testutil::max_abs_diff(a, b), 1e-15);
  DenseOperator zz = ket("00");
  auto m = meas2_channel(PauliString::parse("ZZ"), 1, 0, 0, 0, 0)(zz);
  EXPECT_LT(testutil::max_abs_diff(m, zz), 1e-15);
}

TEST(Channels, Meas2P2OnlyMatchesHandComposition) {
  double p2 = 0.2;
  DenseOperator zz = ket("00");
  CMatrix r = zz.matrix();
  auto dep2 = [&](const CMatrix& x, double p) {
    CMatrix out = (1 - p) * x;
    for (const char* a : {"X", "Y", "Z"})
      for (const char* b : {"X", "Y", "Z"}) {
        std::string s = std::string(a) + b;
        CMatrix m = P(s.c_str());
        out += (p / 9) * m * x * m;
      }
    return out;
  };
  CMatrix pi = projector(PauliString::parse("ZZ"), 1).matrix();
  CMatrix oracle = dep2(pi * dep2(r, p2 / 2) * pi, p2 / 2);
  auto got = meas2_channel(PauliString::parse("ZZ"), 1, 0, 0, p2, 0)(zz);
  EXPECT_LT((got.matrix() - oracle).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Channels, TracePreservingAndCompletelyPositive) {
  std::mt19937_64 rng(23);
  std::vector<ChannelProgram> tp = {depolarize1(0.2), depolarize2(0.4), idle_channel(0.1, 0.3),
                                    timed_coupling_rotation(PauliString::parse("Y"), 0.7), z_phase(0.2)};
  for (const auto& c : tp) {
    for (int k = 0; k < 100; ++k) {
      DenseOperator r = testutil::random_density(c.num_qubits(), rng);
      EXPECT_NEAR(c(r).trace().real(), 1.0, 1e-12);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(choi(c));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
  std::vector<ChannelProgram> meas = {
      assignment_channel(PauliString::parse("X"), -1, 0.1), meas1_channel(PauliString::parse("Y"), 1, 0.2, 0.3),
      meas2_channel(PauliString::parse("YZ"), -1, 0.05, 0.1, 0.3, 0.4)};
  for (const auto& c : meas) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(choi(c));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    for (int k = 0; k < 20; ++k) {
      DenseOperator r = testutil::random_density(c.num_qubits(), rng);
      EXPECT_LE(c(r).trace().real(), 1.0 + 1e-12);
    }
  }
}

TEST(Channels, TGateAnchor) {
  DenseOperator plus = ket("+");
  Eigen::VectorXcd t(2);
  t << 1 / std::sqrt(2.0), std::polar(1 / std::sqrt(2.0), M_PI / 4);
  for (double delta : {0.0, 0.05, 0.1}) {
    auto out = timed_coupling_rotation(PauliString::parse("Z"), M_PI / 8 + delta)(plus);
    double f = (t.adjoint() * out.matrix() * t)(0, 0).real();
    EXPECT_NEAR(f, 1 - std::sin(delta) * std::sin(delta), 1e-10);
  }
  EXPECT_LT(testutil::max_abs_diff(timed_coupling_rotation(PauliString::parse("X"), 0)(plus), plus), 1e-15);
  EXPECT_THROW(timed_coupling_rotation(PauliString::parse("XX"), 0.1), std::invalid_argument);
}

TEST(States, PauliBasisMatchesDense) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + trial % 4;
    DenseOperator r = testutil::random_density(n, rng);
    PauliState ps = PauliState::from_dense(r);
    EXPECT_LT(testutil::max_abs_diff(ps.to_dense(), r), 1e-13);
    DenseState ds(r);
    for (int step = 0; step < 6; ++step) {
      Primitive op;
      PauliString p = testutil::random_nontrivial_pauli(n, rng);
      switch (rng() % 3) {
        case 0: {
          PauliMix m;
          m.terms.emplace_back(PauliString(n), 0.5);
          m.terms.emplace_back(p, 0.3);
          m.terms.emplace_back(testutil::random_pauli(n, rng), 0.2);
          op = m;
          break;
        }
        case 1: op = Assign{p, (rng() & 1) ? 1 : -1, 0.3 * testutil::uniform(rng)}; break;
        default: op = Rotate{p, 3 * testutil::uniform(rng)}; break;
      }
      ps.apply(op);
      ds.apply(op);
      EXPECT_LT(testutil::max_abs_diff(ps.to_dense(), ds.to_dense()), 1e-13);
    }
    PauliString obs = testutil::random_pauli(n, rng);
    EXPECT_NEAR(ps.expectation(obs), ds.expectation(obs), 1e-13);
    EXPECT_NEAR(ps.trace(), ds.trace(), 1e-13);
    if (n >= 2) {
      int q = int(rng() % n);
      EXPECT_LT(testutil::max_abs_diff(ps.partial_trace(q).to_dense(), ds.partial_trace(q).to_dense()), 1e-13);
    }
  }
}

TEST(States, ProductConstructors) {
  std::vector<std::array<double, 4>> b = {{1, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}};
  DenseOperator expect = ket("+01");
  EXPECT_LT(testutil::max_abs_diff(DenseState::product(b).to_dense(), expect), 1e-15);
  EXPECT_LT(testutil::max_abs_diff(PauliState::product(b).to_dense(), expect), 1e-15);
  EXPECT_EQ(PauliState::product(b).support_size(), 8u);
}
