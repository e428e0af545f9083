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

#include "tetron/regression.hpp"

#include <cmath>
#include <limits>

#include "tetron/braiding.hpp"
#include "tetron/mbqb.hpp"
#include "tetron/qed.hpp"

#ifndef TETRON_VERSION
#define TETRON_VERSION "unknown"
#endif

namespace tetron {

const char* library_version() { return TETRON_VERSION; }

namespace {

void add(std::vector<RegressionCheck>& out, const char* module, std::string name, double value, double expected,
         double tol) {
  RegressionCheck c{module, std::move(name), value, expected, tol, false};
  c.passed = std::isfinite(value) && std::abs(value - expected) <= tol;
  out.push_back(c);
}

}  // namespace

std::vector<RegressionCheck> regression_checks() {
  std::vector<RegressionCheck> out;

  // mbqb: closed forms for the assignment-only and degenerate instruments.
  MetricEstimates m = mbqb_metrics(instruments_from_noise(NoiseParams{0.05, 0, 0, 0}));
  add(out, "mbqb", "err_a(p_a=0.05)", m.err_a, 2 * 0.05 * 0.95, 1e-12);
  add(out, "mbqb", "err_b(p_a=0.05)", m.err_b, 0.0, 1e-12);
  MetricEstimates r = mbqb_metrics(randomizing_instruments());
  add(out, "mbqb", "err_a(randomizing)", r.err_a, 0.5, 1e-12);
  add(out, "mbqb", "err_b(randomizing)", r.err_b, 0.0, 1e-12);
  MetricEstimates i = mbqb_metrics(identical_instruments());
  add(out, "mbqb", "err_a(identical)", i.err_a, 0.0, 1e-12);
  add(out, "mbqb", "err_b(identical)", i.err_b, 0.5, 1e-12);
  add(out, "mbqb", "reset_distance(noiseless)", reset_distance(reset_superop(NoiseParams{})), 0.0, 1e-12);

  // braiding
  for (CliffordClass c : nontrivial_clifford_classes()) {
    SequenceIdentityReport rep = verify_sequence_identity(c);
    add(out, "braiding", std::string("sequence_identity[") + to_string(c) + "]",
        rep.passed ? rep.max_deviation : std::numeric_limits<double>::infinity(), 0.0, kSequenceIdentityTol);
    add(out, "braiding", std::string("F[") + to_string(c) + "](0,0)", class_fidelity(c, NoiseParams{}), 1.0, 1e-12);
  }
  add(out, "braiding", "F[S](pa=0.02,p1=0.05,p2=0.1)", class_fidelity(CliffordClass::kS, NoiseParams{0.02, 0.05, 0.1, 0}),
      0.788941215895168, 1e-9);
  add(out, "tgate", "F(delta=0.05)", tgate_experiment(0.05).fidelity, 1 - std::sin(0.05) * std::sin(0.05), 1e-10);

  // qed
  DecayExperimentSpec s;
  s.rounds_grid = {2, 4, 6};
  add(out, "qed", "gamma_phys_ZI(noiseless)", decay_experiment(s).rate, 0.0, 1e-10);
  s.level = Level::kLogical;
  add(out, "qed", "gamma_log_XX(noiseless)", decay_experiment(s).rate, 0.0, 1e-10);
  add(out, "qed", "lambda(equal rates)", lambda_metrics(0.1, 0.1, 0.1, 0.1).lambda, 1.0, 1e-15);

  // noise derivation chain
  PhysicalParams ph;
  ph.snr = 3.7;
  ph.delta_over_kT = 12;
  ph.L_over_xi = 20;
  ph.delta = 50e-6;
  ph.tau_elph = 50e-9;
  ph.tau_meas = 1e-6;
  NoiseDerivation d = derive_noise(ph);
  add(out, "channels", "p_a(snr=3.7)", d.noise.p_a, 1.1e-4, 0.05e-4);
  add(out, "channels", "p1(regime)", d.noise.p1, 9.2e-5, 0.05e-5);
  add(out, "channels", "theta(regime)", d.noise.theta, 1.6e-4, 0.05e-4);
  ph.snr = std::numeric_limits<double>::infinity();
  add(out, "channels", "p_a(snr=inf)", derive_noise(ph).noise.p_a, 0.0, 0.0);

  // lifetime: depolarizing idle gives flip rate 2 p1 / 3 per step.
  LifetimeResult lt = lifetime_experiment('Z', {2, 4, 6, 8}, NoiseParams{0, 0.03, 0, 0});
  add(out, "mbqb", "lifetime flip rate(p1=0.03)", lt.flip_rate, 0.02, 1e-12);
  return out;
}

}  // namespace tetron
