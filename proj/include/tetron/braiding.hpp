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

// Measurement-only single-qubit Cliffords on an (auxiliary, computational)
// pair. Qubit 0 is the auxiliary, qubit 1 the computational qubit.
//
// Sequences are stored in application order: element 0 is measured first.

#ifndef TETRON_BRAIDING_HPP_
#define TETRON_BRAIDING_HPP_

#include <functional>
#include <string>
#include <vector>

#include "tetron/channels.hpp"
#include "tetron/circuit.hpp"
#include "tetron/pauli.hpp"

namespace tetron {

enum class CliffordClass { kIdentity, kH, kS, kHSH, kSH, kHS };

const char* to_string(CliffordClass c);
// Accepts "1"/"I"/"Identity", "H", "S", "HSH", "SH", "HS".
CliffordClass parse_clifford_class(const std::string& name);
std::vector<CliffordClass> all_clifford_classes();
std::vector<CliffordClass> nontrivial_clifford_classes();

// Representative unitary of the class (HSH means H S H as a matrix product).
DenseOperator class_unitary(CliffordClass c);

struct ClassSequence {
  CliffordClass cls = CliffordClass::kIdentity;
  std::vector<PauliString> measurements;  // two-qubit strings, application order
};

ClassSequence sequence_for(CliffordClass c);

// Signless Pauli C(s) on the computational qubit such that the projector
// product equals |X_{s_last}><X_{s_0}| (x) C(s) U_class up to a scalar. The
// frame is undone by applying C(s) after the sequence.
PauliString pauli_correction(CliffordClass c, const std::vector<int>& outcomes);

using CorrectionRule = std::function<PauliString(const std::vector<int>&)>;

struct SequenceIdentityReport {
  CliffordClass cls = CliffordClass::kIdentity;
  int outcome_vectors = 0;
  int zero_branches = 0;  // projector product vanishes
  double max_deviation = 0;  // ||M - lambda T||_F / ||M||_F
  std::vector<std::vector<int>> failures;
  bool passed = false;
};

inline constexpr double kSequenceIdentityTol = 1e-12;

SequenceIdentityReport verify_sequence_identity(CliffordClass c);
// Same check with a substitute correction rule.
SequenceIdentityReport verify_sequence_identity(CliffordClass c, const CorrectionRule& rule);

// Sequence as a two-qubit circuit, one measurement per step.
Circuit class_circuit(CliffordClass c);

// Pauli-corrected, outcome-summed channel on the computational qubit, from
// process tomography with four pure inputs and the auxiliary in |+>.
Superoperator simulate_class(CliffordClass c, const NoiseParams& noise);

double class_fidelity(CliffordClass c, const NoiseParams& noise);

struct FidelityPoint {
  double p1 = 0, pa = 0, p2 = 0;
  double fidelity = 0;
};

struct FidelityScan {
  CliffordClass cls = CliffordClass::kS;
  std::vector<double> p1_grid, pa_grid;
  double p2 = 0;
  std::vector<FidelityPoint> points;  // p1 outer, pa inner

  const FidelityPoint& at(std::size_t i1, std::size_t ia) const { return points[i1 * pa_grid.size() + ia]; }
  // Header p1,pa,p2,class,fidelity; 12 significant digits.
  std::string to_csv() const;
};

// 21 points on [0, 0.2].
std::vector<double> default_fidelity_grid();

FidelityScan fidelity_scan(CliffordClass c, const std::vector<double>& p1_grid, const std::vector<double>& pa_grid,
                           double p2, int workers = 1);

// ---------------------------------------------------------------------------
// Gate-set experiments: randomized reset, prepare P by measurement, run the
// class (or nothing), measure Q.

struct GatesetCircuit {
  Circuit circuit;
  char prep = 'X';
  char meas = 'X';
  bool reference = false;
  int prep_slot = -1;
  int final_slot = -1;
  std::vector<int> class_slots;  // outcomes feeding the Pauli correction
};

std::vector<GatesetCircuit> gateset_experiment_suite(CliffordClass c);

struct GatesetEstimate {
  Superoperator map;        // reconstructed class channel
  Superoperator reference;  // reconstructed no-op
  double residual = 0;      // Frobenius residual of the class data fit
};

// Runs the suite exactly and solves with the gauge fixed to ideal
// preparations.
GatesetEstimate gateset_reconstruct(CliffordClass c, const NoiseParams& noise);

// ---------------------------------------------------------------------------

struct TStateResult {
  double delta = 0;
  double fidelity = 0;  // <psi_T| rho |psi_T>
  double expected = 0;  // cos^2(delta) for the noiseless rotation
};

// |+> followed by a timed-coupling Z rotation by pi/8 + delta, run through
// the circuit simulator.
TStateResult tgate_experiment(double delta, const NoiseParams& noise = {});

}  // namespace tetron

#endif  // TETRON_BRAIDING_HPP_
