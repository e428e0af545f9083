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

// Measurement-based qubit benchmarking: X/Z instrument sequences, the
// err_a / err_b metrics and rebit gate-set tomography.
//
// Single-qubit maps are Superoperators on the Pauli basis (I, X, Y, Z). A
// state is carried as v = (tr rho, <X>, <Y>, <Z>) (unnormalized), so that
// v' = R v and the outcome probability of a map is v'[0].

#ifndef TETRON_MBQB_HPP_
#define TETRON_MBQB_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tetron/channels.hpp"
#include "tetron/pauli.hpp"

namespace tetron {

// Outcome-resolved operations of one single-qubit measurement.
struct Instrument {
  Superoperator plus;
  Superoperator minus;

  const Superoperator& outcome(int s) const { return s > 0 ? plus : minus; }
  Superoperator total() const;  // outcome-summed channel
};

struct InstrumentSet {
  Instrument x;
  Instrument z;

  const Instrument& basis(char b) const;
  // The same protocol with the X and Z labels exchanged.
  InstrumentSet swapped() const { return {z, x}; }
};

// Noisy X and Z measurements of the noise model (meas1 channels).
InstrumentSet instruments_from_noise(const NoiseParams& noise);
// Ideal projections followed by a classical readout flip with probability p_f.
InstrumentSet readout_flip_instruments(double p_f);
// Outcome is a fair coin and the state is left alone.
InstrumentSet randomizing_instruments();
// Both labels perform the same ideal Z measurement.
InstrumentSet identical_instruments();

Superoperator ptm_of(const ChannelProgram& single_qubit_program);

// R = (X* Z* + Z* X*) / 2 where M* sums the outcomes of M.
Superoperator reset_superop(const InstrumentSet& inst);
Superoperator reset_superop(const NoiseParams& noise);
// Largest trace distance between R(rho) and I/2 over the six Pauli
// eigenstates.
double reset_distance(const Superoperator& reset);

struct MeasurementSequence {
  std::string labels;         // over {X, Z}
  std::vector<int> variants;  // optional physical-loop tags, same length or empty

  std::size_t size() const { return labels.size(); }
  void validate() const;
};

// Cyclic binary de Bruijn sequence of length 2^k over {X, Z} (X = 0).
MeasurementSequence generate_debruijn(int k);

// One conditional probability Pr(P_r | Q_s; reset ordering).
struct ConditionalEntry {
  char reset_first = 'Z';  // first measurement of the reset pair
  char q = 'X';            // conditioning basis
  int s = +1;              // conditioning outcome
  char p = 'X';            // tested basis
  std::array<double, 2> pr = {0, 0};  // Pr(r = +1), Pr(r = -1)
  double cond_prob = 0;                // Pr(Q_s) after the reset
  // Sampled mode only.
  std::int64_t count = 0;      // occurrences of the conditioning outcome
  std::int64_t plus_count = 0; // ... followed by P_+
  double half_width = 0;       // 95% Wilson half-width on pr[0]
  bool flagged = false;        // conditioning probability (or count) is zero
};

struct SubsequenceTable {
  // 16 entries, index = ((o * 2 + iq) * 2 + is) * 2 + ip with o = 0 for a
  // Z-first reset, iq/ip = 0 for X, is = 0 for s = +1.
  std::vector<ConditionalEntry> entries;
  bool exact = true;
  std::int64_t shots = 0;  // sequence steps in sampled mode
  std::uint64_t seed = 0;

  static int index(char reset_first, char q, int s, char p);
  const ConditionalEntry& at(char reset_first, char q, int s, char p) const;
};

struct StatisticsOptions {
  std::int64_t shots = 0;  // 0 = exact, otherwise sequence length in steps
  std::uint64_t seed = 0;
  int workers = 1;
  int k = 4;  // de Bruijn word length for the sampled sequence
  std::int64_t batch_steps = 1 << 16;
};

SubsequenceTable subsequence_statistics(const InstrumentSet& inst, const StatisticsOptions& opt = {});
SubsequenceTable subsequence_statistics(const NoiseParams& noise, const StatisticsOptions& opt = {});

// err_a = max_{P,s} |mean_o Pr(P_+ | P_s; o) - [s = +1]|
double estimate_err_a(const SubsequenceTable& t);
// err_b = max_{P != Q, s} |mean_o Pr(P_+ | Q_s; o) - 1/2|
double estimate_err_b(const SubsequenceTable& t);

struct MetricEstimates {
  double err_a = 0, err_b = 0;
  // One standard deviation from the Wilson intervals of the maximizing
  // entries; zero in exact mode.
  double err_a_sigma = 0, err_b_sigma = 0;
  double reset_distance = 0;
  SubsequenceTable table;
};

MetricEstimates mbqb_metrics(const InstrumentSet& inst, const StatisticsOptions& opt = {});

// 95% Wilson score interval (center, half-width).
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n);

// ---------------------------------------------------------------------------
// Rebit tomography on (1, x, z).

using RebitMatrix = Eigen::Matrix3d;

// Rows/columns (I, X, Z) of a single-qubit transfer matrix.
RebitMatrix rebit_block(const Superoperator& s);

struct RebitMap {
  std::string name;
  RebitMatrix map = RebitMatrix::Zero();
  double residual = 0;  // Frobenius norm of the unexplained part of the data
};

struct RebitGateSet {
  std::vector<RebitMap> ops;
  RebitMap noop;
  // Estimated effects (rows X+, X-, Z+, Z-) in the target-prep gauge.
  Eigen::Matrix<double, 4, 3> effects = Eigen::Matrix<double, 4, 3>::Zero();
};

struct NamedOperation {
  std::string name;
  Superoperator op;
};

struct GstOptions {
  std::int64_t shots = 0;  // per (prep, effect basis) experiment; 0 = exact
  std::uint64_t seed = 0;
};

// Preparations: reset then an X or Z measurement, post-selected on its
// outcome. Effects: the outcomes of a final X or Z measurement. The gauge is
// fixed by taking the preparations to be the ideal rebit eigenstates.
RebitGateSet rebit_gst(const InstrumentSet& inst, const std::vector<NamedOperation>& ops,
                       const GstOptions& opt = {});
// The four instrument outcome operations X+, X-, Z+, Z- of the noise model.
RebitGateSet rebit_gst(const NoiseParams& noise, const GstOptions& opt = {});

// ---------------------------------------------------------------------------

struct LifetimeResult {
  char basis = 'Z';
  std::vector<int> idle_steps;
  std::vector<double> agreement;  // Pr(consecutive outcomes agree)
  double decay = 0;               // Gamma in 2A - 1 = C exp(-Gamma k)
  double flip_rate = 0;           // (1 - exp(-Gamma)) / 2 per idle step
  double intercept = 0;
  double residual = 0;
  bool flagged = false;
  std::string flag;
};

LifetimeResult lifetime_experiment(char basis, const std::vector<int>& idle_steps, const NoiseParams& noise);

}  // namespace tetron

#endif  // TETRON_MBQB_HPP_
