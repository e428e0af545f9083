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

// Ladder-code error detection and repetition-code decay experiments.

#ifndef TETRON_QED_HPP_
#define TETRON_QED_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tetron/channels.hpp"
#include "tetron/circuit.hpp"
#include "tetron/ensemble.hpp"

namespace tetron {

// N x 2 array of qubits, q(r, c) = 2 r + c. Each patch is a 2x2 block
// starting at a row.
struct LadderLayout {
  int rows = 2;
  std::vector<int> patch_rows = {0};

  int width() const { return 2 * rows; }
  int qubit(int r, int c) const { return 2 * r + c; }
  void validate() const;

  static LadderLayout single_patch() { return {2, {0}}; }
  static LadderLayout two_patches() { return {4, {0, 2}}; }
};

enum class Level { kPhysical, kLogical };
// Which repetition-code logical is tracked. kXX starts from |++> (Bell after
// the first ZZ) and tracks XX; kZI starts from |00> and tracks ZI.
enum class RepObservable { kXX, kZI };

const char* to_string(Level l);
const char* to_string(RepObservable o);

// Idle ladder code on one 2x2 patch: X step then Z step per round. Detectors
// come from stabilizer bookkeeping with no prior knowledge of the state.
Circuit idle_ladder_circuit(int rounds);

struct LogicalZZCircuit {
  Circuit circuit;
  // For each round, the slots whose product is the Zbar Zbar outcome.
  std::vector<std::vector<int>> zz_slots;
  // Sign relating that product to Zbar Zbar.
  std::vector<int> zz_sign;
};

// Four-step Zbar Zbar circuit on the 4x2 array: XX rows, ZZ within patches,
// XX rows, YY across the middle. Detectors derived from an empty ISG.
LogicalZZCircuit logical_zz_circuit(int rounds);

// Zbar Zbar on the middle four qubits, as a Pauli on the 8-qubit register.
PauliString logical_zz_operator();

// Observable tracked by the decay experiment.
PauliString repcode_observable(Level level, RepObservable obs);

struct RepcodeCircuit {
  Circuit circuit;
  // Index of the last step of each round; round k ends at round_end[k-1].
  std::vector<int> round_end;
};

// Preparation layer (single-qubit measurements in the prep basis on every
// qubit) followed by `rounds` code rounds. Detectors are derived from the
// product-state stabilizers of the exact initial state.
RepcodeCircuit repcode_circuit(Level level, RepObservable obs, int rounds);

// Exact product initial state for the experiment.
PauliState repcode_initial_state(Level level, RepObservable obs);

// Prep layer plus one round, post-selected. Throws std::runtime_error when
// nothing is accepted.
PauliEnsemble prepare_repcode_state(RepObservable obs, Level level, const NoiseParams& noise);

struct DecayExperimentSpec {
  Level level = Level::kPhysical;
  RepObservable observable = RepObservable::kXX;
  std::vector<int> rounds_grid = {2, 4, 6, 8, 10};
  NoiseParams noise;
  std::int64_t shots = 0;  // 0 = exact
  std::uint64_t seed = 0;
  // Exact mode engine: branches keyed by open-detector parities (default), or
  // by live outcome slots with the given marginalization schedule.
  bool slot_keyed = false;
  MarginalizeSchedule schedule = MarginalizeSchedule::kEager;

  void validate() const;
};

inline constexpr double kFitTolerance = 1e-10;

struct DecayFit {
  double rate = 0.0;       // gamma per round
  double intercept = 0.0;  // ln A
  double residual = 0.0;   // rms of log residuals
  std::vector<int> rounds;
  std::vector<double> expectation;
  std::vector<double> acceptance;
  bool flagged = false;
  std::string flag;
};

// Fits |y| = A exp(-gamma N) by least squares on log |y|.
DecayFit fit_decay(const std::vector<int>& rounds, const std::vector<double>& values);

DecayFit decay_experiment(const DecayExperimentSpec& spec);

struct LambdaMetrics {
  double lambda = 1.0;
  double lambda_x = 1.0;
  double lambda_z = 1.0;
  bool flagged = false;  // a zero or invalid denominator
  std::string flag;
};

// fits = {physical XX, physical ZI, logical XX, logical ZI}.
LambdaMetrics lambda_metrics(const DecayFit& phys_xx, const DecayFit& phys_zi, const DecayFit& log_xx,
                             const DecayFit& log_zi);
LambdaMetrics lambda_metrics(double g_xx, double g_zi, double g_lxx, double g_lzi);

struct ScanPoint {
  double p1 = 0, p2 = 0, pa = 0;
  LambdaMetrics metrics;
  double accept_phys = 0, accept_log = 0;
  double gamma[4] = {0, 0, 0, 0};  // phys XX, phys ZI, log XX, log ZI
};

struct ContourPoint {
  double p1 = 0, p2 = 0;
  bool clipped = false;  // Lambda > 1 up to the top of the p2 grid
};

struct ScanResult {
  std::vector<double> p1_grid, p2_grid;
  double p_a = 0;
  std::vector<ScanPoint> points;  // row-major: p1 outer, p2 inner
  std::vector<ContourPoint> contour;
  std::optional<ContourPoint> optimum;  // p1 maximizing the admissible p2
  bool optimum_interior = false;

  const ScanPoint& at(std::size_t i1, std::size_t i2) const { return points[i1 * p2_grid.size() + i2]; }
  std::string to_csv() const;
  std::string contour_csv() const;
};

struct ScanOptions {
  std::vector<int> rounds_grid = {2, 4, 6, 8, 10};
  int workers = 1;
  double theta = 0.0;
};

// 25 log-spaced points on [1e-4, 1e-1].
std::vector<double> default_scan_grid();

ScanResult improvement_scan(const std::vector<double>& p1_grid, const std::vector<double>& p2_grid, double p_a,
                            const ScanOptions& opt = {});

// Upper Lambda = 1 boundary per p1 column, interpolated in log p2.
std::vector<ContourPoint> lambda_contour(const ScanResult& r);

}  // namespace tetron

#endif  // TETRON_QED_HPP_
