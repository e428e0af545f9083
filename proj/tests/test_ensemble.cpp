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

#include "tetron/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tetron/isg.hpp"
#include "oracles/random_circuits.hpp"
#include "test_util.hpp"

using namespace tetron;

namespace {

std::array<double, 4> kZero = {1, 0, 0, 1};
std::array<double, 4> kPlus = {1, 1, 0, 0};

template <class S>
TrajectoryEnsemble<S> product_ensemble(const std::vector<std::array<double, 4>>& b) {
  return init_ensemble(static_cast<int>(b.size()), S::product(b));
}

// Ideal branch weights by direct projector products over all outcome vectors.
std::vector<std::pair<std::vector<int>, DenseOperator>> projector_oracle(const Circuit& c, const DenseOperator& rho0) {
  std::vector<std::pair<std::vector<int>, DenseOperator>> out;
  std::vector<Operation> meas;
  for (auto& st : c.steps)
    for (auto& op : st.ops)
      if (op_slot(op) >= 0) meas.push_back(op);
  int k = static_cast<int>(meas.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    DenseOperator r = rho0;
    std::vector<int> s(k);
    for (int i = 0; i < k; ++i) {
      s[i] = ((mask >> (k - 1 - i)) & 1) ? +1 : -1;
      DenseOperator pi = projector(op_pauli(meas[i], c.width), s[i]);
      r = pi * r * pi;
    }
    out.emplace_back(s, r);
  }
  return out;
}

}  // namespace

TEST(Ensemble, InitChecks) {
  DenseOperator zz = DenseState::product({kZero, kZero}).to_dense();
  auto e = init_ensemble<DenseState>(2, zz);
  EXPECT_EQ(e.size(), 1u);
  EXPECT_NEAR(acceptance_rate(e), 1.0, 1e-15);
  auto m = init_ensemble<DenseState>(2, DenseOperator(2, CMatrix::Identity(4, 4) / 4.0));
  EXPECT_NEAR(acceptance_rate(m), 1.0, 1e-15);
  EXPECT_THROW(init_ensemble<DenseState>(2, DenseOperator(2, CMatrix::Identity(4, 4))), std::invalid_argument);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(init_ensemble<DenseState>(1, DenseOperator(1, bad)), std::invalid_argument);
}

TEST(Ensemble, ApplyStepExamples) {
  CircuitBuilder b(1);
  int s = b.m1('Z', 0);
  Circuit c = b.build();
  auto e = apply_step(product_ensemble<DenseState>({kZero}), c.steps[0], NoiseParams{});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e.branches.at({+1}).trace(), 1.0, 1e-15);
  EXPECT_NEAR(e.branches.at({-1}).trace(), 0.0, 1e-15);
  EXPECT_EQ(e.slots, std::vector<int>{s});

  auto p = apply_step(product_ensemble<PauliState>({kPlus}), c.steps[0], NoiseParams{});
  EXPECT_NEAR(p.branches.at({+1}).trace(), 0.5, 1e-15);
  EXPECT_NEAR(p.branches.at({-1}).trace(), 0.5, 1e-15);

  CircuitBuilder b2(2);
  b2.m2("ZZ", 0, 1);
  Circuit c2 = b2.build();
  NoiseParams n;
  n.p_a = 0.1;
  auto z2 = apply_step(product_ensemble<DenseState>({kZero, kZero}), c2.steps[0], n);
  EXPECT_NEAR(z2.branches.at({+1}).trace(), 0.9, 1e-15);
  EXPECT_NEAR(z2.branches.at({-1}).trace(), 0.1, 1e-15);

  // refilling a slot is an error
  EXPECT_THROW(apply_step(z2, c2.steps[0], n), std::invalid_argument);
}

TEST(Ensemble, IdleQubitsGetIdleNoise) {
  CircuitBuilder b(2);
  b.m1('X', 0);
  Circuit c = b.build();
  NoiseParams n;
  n.p1 = 0.3;
  auto e = apply_step(product_ensemble<PauliState>({kPlus, kPlus}), c.steps[0], n);
  // qubit 1 idles once: <X> shrinks by 1 - 4p/3
  PauliState tot = total_state(e);
  EXPECT_NEAR(tot.expectation(PauliString::parse("IX")), 1 - 4 * 0.3 / 3, 1e-14);
  // rotation marks a qubit busy
  CircuitBuilder r(1);
  r.rot('Z', 0, M_PI / 8);
  auto er = apply_step(product_ensemble<PauliState>({kPlus}), r.build().steps[0], n);
  EXPECT_NEAR(total_state(er).expectation(PauliString::parse("X")), std::cos(M_PI / 4), 1e-14);
}

TEST(Ensemble, NoiselessMatchesProjectorProducts) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int width : {2, 3}) {
    for (int trial = 0; trial < 25; ++trial) {
      Circuit c = oracle::random_circuit(width, 3, 4, rng, false);
      DenseOperator rho0 = testutil::random_density(width, rng);
      auto oracle = projector_oracle(c, rho0);
      auto de = init_ensemble<DenseState>(width, rho0);
      auto pe = init_ensemble<PauliState>(width, rho0);
      for (auto& st : c.steps) {
        de = apply_step(std::move(de), st, NoiseParams{});
        pe = apply_step(std::move(pe), st, NoiseParams{});
      }
      ASSERT_EQ(de.size(), oracle.size());
      for (auto& [s, r] : oracle) {
        OutcomeRecord rec(s.begin(), s.end());
        EXPECT_LT(testutil::max_abs_diff(de.branches.at(rec).to_dense(), r), 1e-12);
        auto it = pe.branches.find(rec);
        ASSERT_NE(it, pe.branches.end());
        EXPECT_LT(testutil::max_abs_diff(it->second.to_dense(), r), 1e-12);
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 50);
}

TEST(Ensemble, PruneMarginalizeExamples) {
  CircuitBuilder b(1);
  int s0 = b.m1('Z', 0);
  Circuit c = b.build();
  auto e = apply_step(product_ensemble<DenseState>({kPlus}), c.steps[0], NoiseParams{});
  auto m = marginalize_outcomes(e, {s0});
  EXPECT_EQ(m.size(), 1u);
  EXPECT_NEAR(acceptance_rate(m), 1.0, 1e-15);
  EXPECT_THROW(marginalize_outcomes(e, {s0}, {Detector{{s0}, +1}}), std::invalid_argument);
  EXPECT_THROW(prune_detected(m, {Detector{{s0}, +1}}), std::invalid_argument);
  EXPECT_THROW(prune_detected(e, {Detector{{7}, +1}}), std::invalid_argument);

  auto keep = prune_detected(e, {Detector{{s0}, +1}});
  EXPECT_EQ(keep.size(), 1u);
  EXPECT_NEAR(acceptance_rate(keep), 0.5, 1e-15);

  // a detector that nothing satisfies empties the ensemble
  auto z = apply_step(product_ensemble<DenseState>({kZero}), c.steps[0], NoiseParams{});
  auto none = prune_detected(prune_detected(z, {Detector{{s0}, +1}}), {Detector{{s0}, -1}});
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(acceptance_rate(none), 0.0);
  EXPECT_THROW(expectation(none, PauliString::parse("Z")), std::invalid_argument);
}

TEST(Ensemble, PruneAndMarginalizeCommuteOnDisjointSlots) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    CircuitBuilder b(3);
    int a = b.m2("ZZ", 0, 1);
    int c1 = b.m1('X', 2);
    b.step();
    int d = b.m2("ZZ", 0, 1);
    int f = b.m1('Y', 2);
    Circuit c = b.build();
    NoiseParams n{0.1 * testutil::uniform(rng), 0.2 * testutil::uniform(rng), 0.2 * testutil::uniform(rng), 0.3};
    auto e = init_ensemble<DenseState>(3, testutil::random_density(3, rng));
    for (auto& st : c.steps) e = apply_step(std::move(e), st, n);
    std::vector<Detector> det = {Detector{{a, d}, +1}};
    auto x = marginalize_outcomes(prune_detected(e, det), {c1, f});
    auto y = prune_detected(marginalize_outcomes(e, {c1, f}, det), det);
    ASSERT_EQ(x.size(), y.size());
    for (auto& [rec, st] : x.branches) {
      EXPECT_LT(testutil::max_abs_diff(st.to_dense(), y.branches.at(rec).to_dense()), 1e-15);
    }
  }
}

TEST(Ensemble, ExpectationTableForRepetitionStates) {
  // Bell state with a ZI error, then |00> with an XX error
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  DenseOperator z = pauli_matrix(PauliString::parse("ZI"));
  auto e1 = init_ensemble<PauliState>(2, z * DenseOperator::pure(bell) * z);
  EXPECT_NEAR(expectation(e1, PauliString::parse("ZZ")), 1.0, 1e-12);
  EXPECT_NEAR(expectation(e1, PauliString::parse("ZI")), 0.0, 1e-12);
  EXPECT_NEAR(expectation(e1, PauliString::parse("XX")), -1.0, 1e-12);
  auto zero = DenseState::product({kZero, kZero}).to_dense();
  DenseOperator xx = pauli_matrix(PauliString::parse("XX"));
  auto e2 = init_ensemble<PauliState>(2, xx * zero * xx);
  EXPECT_NEAR(expectation(e2, PauliString::parse("ZZ")), 1.0, 1e-12);
  EXPECT_NEAR(expectation(e2, PauliString::parse("ZI")), -1.0, 1e-12);
  EXPECT_NEAR(expectation(e2, PauliString::parse("XX")), 0.0, 1e-12);
}

TEST(Ensemble, RunCircuitSchedulesAgree) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    int width = 3 + trial % 3;
    Circuit c = oracle::random_circuit(width, 5, 10, rng, false);
    c.detectors = derive_detectors(c, product_stabilizers(width, 'Z'));
    NoiseParams n{0.05, 0.05, 0.05, 0.0};
    std::vector<std::array<double, 4>> b(width, kZero);
    RunOptions eager, step, never;
    step.schedule = MarginalizeSchedule::kEndOfStep;
    never.schedule = MarginalizeSchedule::kNever;
    auto e1 = run_circuit(c, product_ensemble<PauliState>(b), n, eager);
    auto e2 = run_circuit(c, product_ensemble<PauliState>(b), n, step);
    auto e3 = run_circuit(c, product_ensemble<DenseState>(b), n, never);
    EXPECT_NEAR(acceptance_rate(e1), acceptance_rate(e3), 1e-12);
    EXPECT_NEAR(acceptance_rate(e2), acceptance_rate(e3), 1e-12);
    EXPECT_LT(testutil::max_abs_diff(total_state(e1).to_dense(), total_state(e3).to_dense()), 1e-12);
    EXPECT_LT(testutil::max_abs_diff(total_state(e2).to_dense(), total_state(e3).to_dense()), 1e-12);
  }
}

TEST(Ensemble, AcceptanceMatchesBruteForceEnumeration) {
  // 2-round idle ladder on a 2x2 block, p_a only, versus enumerating every
  // outcome vector and checking each detector by hand.
  CircuitBuilder b(4);
  for (int r = 0; r < 2; ++r) {
    b.step();
    b.m2("XX", 0, 1);
    b.m2("XX", 2, 3);
    b.step();
    b.m2("ZZ", 0, 2);
    b.m2("ZZ", 1, 3);
  }
  Circuit c = b.build();
  c.detectors = derive_detectors(c, product_stabilizers(4, 'Z'));
  ASSERT_FALSE(c.detectors.empty());
  NoiseParams n;
  n.p_a = 0.01;
  std::vector<std::array<double, 4>> init(4, kZero);
  auto e = run_circuit(c, product_ensemble<PauliState>(init), n);

  auto full = init_ensemble(4, DenseState::product(init));
  for (auto& st : c.steps) full = apply_step(std::move(full), st, n);
  ASSERT_EQ(full.size(), 256u);
  double ok = 0;
  for (auto& [rec, st] : full.branches) {
    bool fired = false;
    for (auto& d : c.resolved_detectors()) {
      int par = 1;
      for (int s : d.slots) par *= full.value(rec, s);
      fired |= par != d.expected;
    }
    if (!fired) ok += st.trace();
  }
  EXPECT_LT(ok, 1.0);
  EXPECT_NEAR(acceptance_rate(e), ok, 1e-12);
}

TEST(Ensemble, MonteCarloMatchesExact) {
  CircuitBuilder b(2);
  b.m2("ZZ", 0, 1);
  b.step();
  b.m1('X', 0);
  Circuit c = b.build();
  NoiseParams n{0.1, 0.1, 0.1, 0.0};
  std::vector<std::array<double, 4>> init = {kPlus, kZero};
  auto e = run_circuit(c, product_ensemble<DenseState>(init), n, RunOptions{{0, 1}});
  std::mt19937_64 rng(42);
  std::map<std::pair<int, int>, int> counts;
  const int shots = 20000;
  for (int k = 0; k < shots; ++k) {
    auto r = sample_circuit(c, DenseState::product(init), n, rng);
    counts[{r.outcomes[0], r.outcomes[1]}]++;
  }
  for (auto& [rec, st] : e.branches) {
    double p = st.trace();
    double f = counts[{rec[0], rec[1]}] / double(shots);
    EXPECT_NEAR(f, p, 4 * std::sqrt(p * (1 - p) / shots) + 1e-9);
  }
}

TEST(CircuitText, RoundTrip) {
  CircuitBuilder b(3);
  int s0 = b.m1('X', 0);
  int s1 = b.m2("ZY", 1, 2);
  b.step();
  b.rot('Z', 0, M_PI / 8);
  b.idle(1);
  int s2 = b.m1('Y', 2);
  b.detector({s0, s1});
  b.detector({s2}, -1);
  Circuit c = b.build();
  c.detectors.push_back(Detector{{s1, s2}, +1, true});
  std::string text = c.to_text();
  Circuit back = Circuit::parse(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.to_text(), text);
}

TEST(CircuitText, Diagnostics) {
  EXPECT_THROW(Circuit::parse("M1 X q0 -> s0\n"), CircuitParseError);
  try {
    Circuit::parse("step\nM1 X q0 -> s0\nM2 ZZ q0 q1 -> s1\n");
    FAIL();
  } catch (const CircuitParseError& e) {
    EXPECT_NE(std::string(e.what()).find("twice"), std::string::npos);
  }
  try {
    Circuit::parse("step\n\nM1 Q q0 -> s0\n");
    FAIL();
  } catch (const CircuitParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(Circuit::parse("step\nM1 X q0 -> s0\nstep\nM1 X q0 -> s0\n"), CircuitParseError);
  EXPECT_THROW(Circuit::parse("step\nM1 X q0 -> s0\nDET s4 = +1\n"), CircuitParseError);
  EXPECT_THROW(Circuit::parse("step\nM2 ZI q0 q1 -> s0\n"), CircuitParseError);
}

TEST(Stabilizers, RepetitionCodeDetectors) {
  CircuitBuilder b(2);
  int a = b.m1('X', 0);
  int c0 = b.m1('X', 1);
  b.step();
  int z1 = b.m2("ZZ", 0, 1);
  b.step();
  int z2 = b.m2("ZZ", 0, 1);
  Circuit c = b.build();
  auto det = derive_detectors(c, product_stabilizers(2, 'X'));
  ASSERT_EQ(det.size(), 3u);
  EXPECT_EQ(det[0].slots, std::vector<int>{a});
  EXPECT_EQ(det[1].slots, std::vector<int>{c0});
  EXPECT_EQ(det[2].slots, (std::vector<int>{z1, z2}));
  EXPECT_EQ(det[2].expected, +1);
}

TEST(Stabilizers, InferenceSigns) {
  StabilizerTracker t(2);
  t.add_stabilizer(PauliString::parse("-ZZ"));
  auto inf = t.infer(PauliString::parse("ZZ"));
  ASSERT_TRUE(inf);
  EXPECT_EQ(inf->expected, -1);
  EXPECT_TRUE(inf->slots.empty());
  EXPECT_FALSE(t.infer(PauliString::parse("XX")));
  // XX then ZZ measured: YY = -XX.ZZ is inferred from both outcomes
  StabilizerTracker u(2);
  u.measure(PauliString::parse("XX"), 0);
  u.measure(PauliString::parse("ZZ"), 1);
  auto yy = u.infer(PauliString::parse("YY"));
  ASSERT_TRUE(yy);
  EXPECT_EQ(yy->slots, (std::vector<int>{0, 1}));
  EXPECT_EQ(yy->expected, -1);
  EXPECT_THROW(u.add_stabilizer(PauliString::parse("XI")), std::invalid_argument);
}
