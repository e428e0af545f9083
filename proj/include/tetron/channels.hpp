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

#ifndef TETRON_CHANNELS_HPP_
#define TETRON_CHANNELS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tetron/pauli.hpp"

namespace tetron {

// Reduced Planck constant in eV s.
inline constexpr double kHbarEvS = 6.582119569e-16;

struct NoiseParams {
  double p_a = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double theta = 0.0;

  void validate() const;
  static NoiseParams noiseless() { return {}; }
};

// Missing optional fields are reported by derive_noise with the formula that
// needs them.
struct PhysicalParams {
  std::optional<double> snr;
  std::optional<double> tau_meas;       // s
  std::optional<double> delta_over_kT;
  std::optional<double> L_over_xi;
  std::optional<double> delta;          // eV
  std::optional<double> tau_elph;       // s
  std::optional<double> eps_mst;        // eV
  std::optional<double> eps_res;        // eV, overrides the wire estimate
  std::optional<double> psd_plus;       // 1/(eV s)
  std::optional<double> psd_minus;
  double p2 = 0.0;                      // no closed formula, taken as given

  void validate() const;
};

double p_a_from_snr(double snr);
double p1_from_lifetime(double tau_meas, double t_life);
double t_life_delta(double tau_elph, double delta_over_kT);
double t_life_eps(double eps_mst, double eps_res, double psd_plus, double psd_minus);
double eps_res_wire(double delta, double L_over_xi);
double theta_from_eps(double eps_res, double tau);
// Pauli-twirl estimate of the extra depolarizing weight from a coherent
// rotation by theta. Not applied automatically.
double twirl_p1_increment(double theta);

// Breakdown of derive_noise for audit output.
struct NoiseDerivation {
  NoiseParams noise;
  double t_life = 0.0;
  std::optional<double> t_life_delta;
  std::optional<double> t_life_eps;
  double eps_res = 0.0;
};

NoiseDerivation derive_noise(const PhysicalParams& phys);

// ---------------------------------------------------------------------------
// Channel programs: sequences of primitive maps on named qubits, applied in
// order. The same program runs on any state representation.

// rho -> sum_k w_k P_k rho P_k
struct PauliMix {
  std::vector<std::pair<PauliString, double>> terms;
};

// rho -> (1 - p_a) Pi_s rho Pi_s + p_a Pi_{-s} rho Pi_{-s}, Pi_s = (1 + s P)/2
struct Assign {
  PauliString pauli;
  int outcome = +1;
  double p_a = 0.0;
};

// rho -> U rho U^dagger with U = exp(-i angle P)
struct Rotate {
  PauliString axis;
  double angle = 0.0;
};

using Primitive = std::variant<PauliMix, Assign, Rotate>;

class ChannelProgram {
 public:
  ChannelProgram() = default;
  explicit ChannelProgram(int num_qubits) : n_(num_qubits) {}

  int num_qubits() const { return n_; }
  const std::vector<Primitive>& ops() const { return ops_; }

  ChannelProgram& then(Primitive op);
  ChannelProgram& then(const ChannelProgram& next);
  // Relabels local qubit i to qubits[i] of a width-`width` register.
  ChannelProgram on(int width, const std::vector<int>& qubits) const;
  bool empty() const { return ops_.empty(); }

  DenseOperator operator()(const DenseOperator& rho) const;
  DenseMap as_map() const;

 private:
  int n_ = 0;
  std::vector<Primitive> ops_;
};

ChannelProgram identity_channel(int num_qubits);
ChannelProgram assignment_channel(const PauliString& p, int s, double p_a);
ChannelProgram depolarize1(double p1);
ChannelProgram depolarize2(double p2);
// exp(i theta Z) rho exp(-i theta Z)
ChannelProgram z_phase(double theta);
ChannelProgram idle_channel(double p1, double theta);
ChannelProgram meas1_channel(const PauliString& p, int s, double p_a, double p1);
ChannelProgram meas2_channel(const PauliString& pq, int s, double p_a, double p1, double p2,
                             double theta);
// U = exp(-i phi axis); phi = pi/8 about Z maps |+> to T|+>.
ChannelProgram timed_coupling_rotation(const PauliString& axis, double phi);

// Outcome-independent pieces of a measurement so both outcomes can share the
// leading noise: full channel = post . Assign(pauli, s, p_a) . pre.
struct MeasurementSplit {
  ChannelProgram pre;
  PauliString pauli;
  double p_a = 0.0;
  ChannelProgram post;
};

MeasurementSplit meas1_split(const PauliString& p, double p_a, double p1);
MeasurementSplit meas2_split(const PauliString& pq, double p_a, double p1, double p2, double theta);

}  // namespace tetron

#endif  // TETRON_CHANNELS_HPP_
