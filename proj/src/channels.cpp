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

#include <cmath>
#include <stdexcept>

#include "tetron/state.hpp"

namespace tetron {

namespace {

void check_range(const char* name, double v, double lo, double hi, bool hi_open = false) {
  if (!(v >= lo) || (hi_open ? !(v < hi) : !(v <= hi))) {
    throw std::invalid_argument(std::string(name) + " = " + std::to_string(v) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + (hi_open ? ")" : "]"));
  }
}

void check_nonneg(const char* name, const std::optional<double>& v) {
  if (v && !(*v >= 0.0)) throw std::invalid_argument(std::string(name) + " must be nonnegative");
}

}  // namespace

void NoiseParams::validate() const {
  check_range("p_a", p_a, 0.0, 0.5);
  check_range("p1", p1, 0.0, 0.75);
  check_range("p2", p2, 0.0, 15.0 / 16.0);
  check_range("theta", theta, 0.0, M_PI, true);
}

void PhysicalParams::validate() const {
  check_nonneg("snr", snr);
  check_nonneg("tau_meas_s", tau_meas);
  check_nonneg("delta_over_kT", delta_over_kT);
  check_nonneg("L_over_xi", L_over_xi);
  check_nonneg("delta_eV", delta);
  check_nonneg("tau_elph_s", tau_elph);
  check_nonneg("eps_mst_eV", eps_mst);
  check_nonneg("eps_res_eV", eps_res);
  check_nonneg("psd_plus", psd_plus);
  check_nonneg("psd_minus", psd_minus);
  if (tau_meas && !(*tau_meas > 0.0)) throw std::invalid_argument("tau_meas_s must be positive");
  check_range("p2", p2, 0.0, 15.0 / 16.0);
}

double p_a_from_snr(double snr) {
  if (!(snr >= 0.0)) throw std::invalid_argument("p_a_from_snr: snr must be nonnegative");
  return 0.5 * std::erfc(snr / std::sqrt(2.0));
}

double p1_from_lifetime(double tau_meas, double t_life) {
  if (!(t_life > 0.0)) throw std::invalid_argument("p1_from_lifetime: t_life must be positive");
  if (!(tau_meas >= 0.0)) throw std::invalid_argument("p1_from_lifetime: tau_meas must be nonnegative");
  return 0.75 * -std::expm1(-tau_meas / t_life);
}

double t_life_delta(double tau_elph, double delta_over_kT) {
  if (!(tau_elph > 0.0) || !(delta_over_kT >= 0.0)) {
    throw std::invalid_argument("t_life_delta: inputs must be positive");
  }
  return tau_elph * std::exp(delta_over_kT);
}

double t_life_eps(double eps_mst, double eps_res, double psd_plus, double psd_minus) {
  if (!(eps_res > 0.0)) throw std::invalid_argument("t_life_eps: eps_res must be positive");
  double s = psd_plus + psd_minus;
  if (!(s > 0.0)) throw std::invalid_argument("t_life_eps: psd_plus + psd_minus must be positive");
  double r = eps_mst / eps_res;
  return r * r / s;
}

double eps_res_wire(double delta, double L_over_xi) {
  if (!(delta >= 0.0) || !(L_over_xi >= 0.0)) throw std::invalid_argument("eps_res_wire: inputs must be nonnegative");
  return delta * std::exp(-L_over_xi);
}

double theta_from_eps(double eps_res, double tau) {
  if (!(eps_res >= 0.0) || !(tau >= 0.0)) throw std::invalid_argument("theta_from_eps: inputs must be nonnegative");
  return eps_res * tau / kHbarEvS;
}

double twirl_p1_increment(double theta) {
  double s = std::sin(theta);
  return s * s;
}

NoiseDerivation derive_noise(const PhysicalParams& phys) {
  phys.validate();
  auto need = [](const std::optional<double>& v, const char* field, const char* use) {
    if (!v) throw std::invalid_argument(std::string("missing field ") + field + " (needed by " + use + ")");
    return *v;
  };
  NoiseDerivation out;
  out.noise.p_a = p_a_from_snr(need(phys.snr, "snr", "assignment error p_a = [1 - erf(snr/sqrt(2))]/2"));
  double tau = need(phys.tau_meas, "tau_meas_s", "p1 = (3/4)(1 - exp(-tau_meas/T_life))");

  if (phys.eps_res) {
    out.eps_res = *phys.eps_res;
  } else {
    const char* use = "residual splitting eps_res = delta exp(-L/xi)";
    out.eps_res = eps_res_wire(need(phys.delta, "delta_eV", use), need(phys.L_over_xi, "L_over_xi", use));
  }

  double rate = 0.0;
  if (phys.tau_elph || phys.delta_over_kT) {
    const char* use = "quasiparticle lifetime T = tau_elph exp(delta/kT)";
    out.t_life_delta = t_life_delta(need(phys.tau_elph, "tau_elph_s", use),
                                    need(phys.delta_over_kT, "delta_over_kT", use));
    rate += 1.0 / *out.t_life_delta;
  }
  if (phys.eps_mst || phys.psd_plus || phys.psd_minus) {
    const char* use = "splitting-noise lifetime T = (eps_mst/eps_res)^2 / (S(+eps_mst) + S(-eps_mst))";
    out.t_life_eps = t_life_eps(need(phys.eps_mst, "eps_mst_eV", use), out.eps_res,
                                need(phys.psd_plus, "psd_plus", use), need(phys.psd_minus, "psd_minus", use));
    rate += 1.0 / *out.t_life_eps;
  }
  if (rate <= 0.0) {
    throw std::invalid_argument(
        "missing field tau_elph_s/delta_over_kT or eps_mst_eV/psd_plus/psd_minus (needed by the lifetime in "
        "p1 = (3/4)(1 - exp(-tau_meas/T_life)))");
  }
  out.t_life = 1.0 / rate;
  out.noise.p1 = p1_from_lifetime(tau, out.t_life);
  out.noise.theta = theta_from_eps(out.eps_res, tau);
  out.noise.p2 = phys.p2;
  return out;
}

// ---------------------------------------------------------------------------

ChannelProgram& ChannelProgram::then(Primitive op) {
  ops_.push_back(std::move(op));
  return *this;
}

ChannelProgram& ChannelProgram::then(const ChannelProgram& next) {
  if (next.n_ != n_) throw std::invalid_argument("ChannelProgram: width mismatch");
  ops_.insert(ops_.end(), next.ops_.begin(), next.ops_.end());
  return *this;
}

ChannelProgram ChannelProgram::on(int width, const std::vector<int>& qubits) const {
  if (static_cast<int>(qubits.size()) != n_) throw std::invalid_argument("ChannelProgram::on: qubit count mismatch");
  ChannelProgram out(width);
  const int* q = qubits.data();
  for (const Primitive& op : ops_) {
    if (auto* m = std::get_if<PauliMix>(&op)) {
      PauliMix r;
      for (auto& [p, w] : m->terms) r.terms.emplace_back(p.embed(width, q), w);
      out.ops_.push_back(std::move(r));
    } else if (auto* a = std::get_if<Assign>(&op)) {
      out.ops_.push_back(Assign{a->pauli.embed(width, q), a->outcome, a->p_a});
    } else {
      auto& r = std::get<Rotate>(op);
      out.ops_.push_back(Rotate{r.axis.embed(width, q), r.angle});
    }
  }
  return out;
}

DenseOperator ChannelProgram::operator()(const DenseOperator& rho) const {
  if (rho.num_qubits() != n_) throw std::invalid_argument("ChannelProgram: state width mismatch");
  DenseState s(rho);
  s.apply(*this);
  return s.to_dense();
}

DenseMap ChannelProgram::as_map() const {
  ChannelProgram copy = *this;
  return [copy](const DenseOperator& rho) { return copy(rho); };
}

ChannelProgram identity_channel(int num_qubits) { return ChannelProgram(num_qubits); }

ChannelProgram assignment_channel(const PauliString& p, int s, double p_a) {
  if (p.is_identity_letters()) throw std::invalid_argument("assignment_channel: cannot measure the identity");
  if (s != 1 && s != -1) throw std::invalid_argument("assignment_channel: outcome must be +1 or -1");
  check_range("p_a", p_a, 0.0, 0.5);
  ChannelProgram c(p.num_qubits());
  c.then(Assign{p, s, p_a});
  return c;
}

ChannelProgram depolarize1(double p1) {
  check_range("p1", p1, 0.0, 0.75);
  ChannelProgram c(1);
  if (p1 == 0.0) return c;
  PauliMix m;
  m.terms.emplace_back(PauliString::parse("I"), 1.0 - p1);
  for (const char* l : {"X", "Y", "Z"}) m.terms.emplace_back(PauliString::parse(l), p1 / 3.0);
  c.then(std::move(m));
  return c;
}

ChannelProgram depolarize2(double p2) {
  check_range("p2", p2, 0.0, 15.0 / 16.0);
  ChannelProgram c(2);
  if (p2 == 0.0) return c;
  PauliMix m;
  m.terms.emplace_back(PauliString::parse("II"), 1.0 - p2);
  for (char a : {'X', 'Y', 'Z'})
    for (char b : {'X', 'Y', 'Z'}) m.terms.emplace_back(PauliString::parse(std::string{a, b}), p2 / 9.0);
  c.then(std::move(m));
  return c;
}

ChannelProgram z_phase(double theta) {
  ChannelProgram c(1);
  if (theta != 0.0) c.then(Rotate{PauliString::parse("Z"), -theta});
  return c;
}

ChannelProgram idle_channel(double p1, double theta) {
  ChannelProgram c = z_phase(theta);
  c.then(depolarize1(p1));
  return c;
}

MeasurementSplit meas1_split(const PauliString& p, double p_a, double p1) {
  if (p.num_qubits() != 1 || p.is_identity_letters()) {
    throw std::invalid_argument("meas1: expects a single non-identity letter");
  }
  check_range("p_a", p_a, 0.0, 0.5);
  ChannelProgram half = depolarize1(p1 / 2.0);
  return {half, p, p_a, half};
}

MeasurementSplit meas2_split(const PauliString& pq, double p_a, double p1, double p2, double theta) {
  if (pq.num_qubits() != 2 || pq.weight() != 2) throw std::invalid_argument("meas2: Pauli must have weight 2");
  check_range("p_a", p_a, 0.0, 0.5);
  ChannelProgram half(2);
  ChannelProgram ph = z_phase(theta / 2.0);
  half.then(ph.on(2, {0})).then(ph.on(2, {1}));
  half.then(depolarize2(p2 / 2.0));
  ChannelProgram d1 = depolarize1(p1 / 2.0);
  half.then(d1.on(2, {0})).then(d1.on(2, {1}));
  return {half, pq, p_a, half};
}

namespace {

ChannelProgram join(const MeasurementSplit& m, int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("measurement outcome must be +1 or -1");
  ChannelProgram c = m.pre;
  c.then(Assign{m.pauli, s, m.p_a});
  c.then(m.post);
  return c;
}

}  // namespace

ChannelProgram meas1_channel(const PauliString& p, int s, double p_a, double p1) {
  return join(meas1_split(p, p_a, p1), s);
}

ChannelProgram meas2_channel(const PauliString& pq, int s, double p_a, double p1, double p2, double theta) {
  return join(meas2_split(pq, p_a, p1, p2, theta), s);
}

ChannelProgram timed_coupling_rotation(const PauliString& axis, double phi) {
  if (axis.weight() != 1 || axis.num_qubits() != 1) {
    throw std::invalid_argument("timed_coupling_rotation: axis must be a single-qubit Pauli");
  }
  ChannelProgram c(1);
  c.then(Rotate{axis, phi});
  return c;
}

}  // namespace tetron
