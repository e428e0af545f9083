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

#include "tetron/braiding.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tetron/ensemble.hpp"
#include "tetron/sweep.hpp"

namespace tetron {

namespace {

struct ClassInfo {
  CliffordClass cls;
  const char* name;
  std::vector<const char*> seq;
};

const std::vector<ClassInfo>& class_table() {
  static const std::vector<ClassInfo> t = {
      {CliffordClass::kIdentity, "I", {}},
      {CliffordClass::kH, "H", {"XI", "ZY", "YI", "XI"}},
      {CliffordClass::kS, "S", {"XI", "ZZ", "YI", "XI"}},
      {CliffordClass::kHSH, "HSH", {"XI", "ZZ", "ZY", "XI"}},
      {CliffordClass::kSH, "SH", {"XI", "ZZ", "ZY", "YI", "XI"}},
      {CliffordClass::kHS, "HS", {"XI", "ZY", "ZZ", "YI", "XI"}},
  };
  return t;
}

const ClassInfo& info(CliffordClass c) {
  for (const ClassInfo& i : class_table())
    if (i.cls == c) return i;
  throw std::invalid_argument("unknown Clifford class");
}

// 1 when (1 + sign * prod) / 2 = 1.
int bit(int sign, int prod) { return (1 + sign * prod) / 2; }

PauliString letter(char l) { return PauliString::parse(std::string(1, l)); }

PauliString times(const PauliString& a, const PauliString& b) { return multiply(a, b).pauli; }

PauliString power(char l, int e) { return e ? letter(l) : PauliString::parse("I"); }

DenseOperator hadamard() {
  CMatrix h(2, 2);
  double r = 1 / std::sqrt(2.0);
  h << r, r, r, -r;
  return DenseOperator(1, h);
}

DenseOperator phase_s() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = 1;
  s(1, 1) = cplx(0, 1);
  return DenseOperator(1, s);
}

Eigen::VectorXcd x_ket(int s) {
  Eigen::VectorXcd v(2);
  v << 1, double(s);
  return v / std::sqrt(2.0);
}

SequenceIdentityReport verify_with(CliffordClass c, const CorrectionRule& rule) {
  ClassSequence seq = sequence_for(c);
  SequenceIdentityReport r;
  r.cls = c;
  std::size_t n = seq.measurements.size();
  if (n == 0) {
    r.passed = true;
    return r;
  }
  DenseOperator u = class_unitary(c);
  std::vector<DenseOperator> plus, minus;
  for (const PauliString& m : seq.measurements) {
    plus.push_back(projector(m, +1));
    minus.push_back(projector(m, -1));
  }
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = (bits >> i) & 1 ? -1 : +1;
    ++r.outcome_vectors;
    CMatrix m = CMatrix::Identity(4, 4);
    for (std::size_t i = 0; i < n; ++i) m = (s[i] > 0 ? plus[i] : minus[i]).matrix() * m;
    double mn = m.norm();
    if (mn < 1e-12) {
      ++r.zero_branches;
      continue;
    }
    CMatrix aux = x_ket(s[n - 1]) * x_ket(s[0]).adjoint();
    CMatrix comp = pauli_matrix(rule(s).unsigned_part()).matrix() * u.matrix();
    CMatrix t = kron(DenseOperator(1, aux), DenseOperator(1, comp)).matrix();
    cplx lambda = (t.adjoint() * m).trace() / (t.adjoint() * t).trace();
    double dev = (m - lambda * t).norm() / mn;
    r.max_deviation = std::max(r.max_deviation, dev);
    if (!(dev < kSequenceIdentityTol)) r.failures.push_back(s);
  }
  r.passed = r.failures.empty();
  return r;
}

// Outcomes of the class slots, in measurement order.
std::vector<int> class_outcomes(const DenseEnsemble& e, const OutcomeRecord& rec, const std::vector<int>& slots) {
  std::vector<int> s;
  s.reserve(slots.size());
  for (int k : slots) s.push_back(e.value(rec, k));
  return s;
}

// C rho C on a single-qubit dense operator.
DenseOperator conjugate(const PauliString& c, const DenseOperator& rho) {
  DenseOperator p = pauli_matrix(c.unsigned_part());
  return p * rho * p;
}

RunOptions keep_everything() {
  RunOptions o;
  o.prune = false;
  o.schedule = MarginalizeSchedule::kNever;
  return o;
}

}  // namespace

const char* to_string(CliffordClass c) { return info(c).name; }

CliffordClass parse_clifford_class(const std::string& name) {
  if (name == "1" || name == "Identity" || name == "identity") return CliffordClass::kIdentity;
  for (const ClassInfo& i : class_table())
    if (name == i.name) return i.cls;
  throw std::invalid_argument("unknown Clifford class '" + name + "' (expected I, H, S, HSH, SH or HS)");
}

std::vector<CliffordClass> all_clifford_classes() {
  std::vector<CliffordClass> v;
  for (const ClassInfo& i : class_table()) v.push_back(i.cls);
  return v;
}

std::vector<CliffordClass> nontrivial_clifford_classes() {
  std::vector<CliffordClass> v = all_clifford_classes();
  v.erase(v.begin());
  return v;
}

DenseOperator class_unitary(CliffordClass c) {
  DenseOperator h = hadamard(), s = phase_s();
  switch (c) {
    case CliffordClass::kIdentity: return DenseOperator::identity(1);
    case CliffordClass::kH: return h;
    case CliffordClass::kS: return s;
    case CliffordClass::kHSH: return h * s * h;
    case CliffordClass::kSH: return s * h;
    case CliffordClass::kHS: return h * s;
  }
  throw std::invalid_argument("unknown Clifford class");
}

ClassSequence sequence_for(CliffordClass c) {
  ClassSequence s;
  s.cls = c;
  for (const char* m : info(c).seq) s.measurements.push_back(PauliString::parse(m));
  return s;
}

PauliString pauli_correction(CliffordClass c, const std::vector<int>& s) {
  std::size_t n = info(c).seq.size();
  if (s.size() != n) {
    throw std::invalid_argument(std::string("pauli_correction: class ") + to_string(c) + " needs " +
                                std::to_string(n) + " outcomes, got " + std::to_string(s.size()));
  }
  for (int v : s) {
    if (v != 1 && v != -1) throw std::invalid_argument("pauli_correction: outcomes must be +1 or -1");
  }
  switch (c) {
    case CliffordClass::kIdentity: return PauliString::parse("I");
    case CliffordClass::kH: return times(power('Y', bit(+1, s[0] * s[1] * s[2])), letter('X'));
    case CliffordClass::kS: return power('Z', bit(+1, s[0] * s[1] * s[2]));
    case CliffordClass::kHSH: return times(power('Y', bit(-1, s[0] * s[3])), power('X', bit(+1, s[1] * s[2])));
    case CliffordClass::kSH:
      return times(power('Y', bit(-1, s[0] * s[2] * s[3])), power('Z', bit(-1, s[1] * s[2])));
    case CliffordClass::kHS:
      return times(power('X', bit(+1, s[1] * s[2])), power('Z', bit(+1, s[0] * s[1] * s[3])));
  }
  throw std::invalid_argument("unknown Clifford class");
}

SequenceIdentityReport verify_sequence_identity(CliffordClass c) {
  return verify_with(c, [c](const std::vector<int>& s) { return pauli_correction(c, s); });
}

SequenceIdentityReport verify_sequence_identity(CliffordClass c, const CorrectionRule& rule) {
  return verify_with(c, rule);
}

Circuit class_circuit(CliffordClass c) {
  CircuitBuilder b(2);
  for (const PauliString& m : sequence_for(c).measurements) {
    b.step();
    if (m.letter(1) == 'I') {
      b.m1(m.letter(0), 0);
    } else {
      b.m2(m.str(), 0, 1);
    }
  }
  return b.build();
}

Superoperator simulate_class(CliffordClass c, const NoiseParams& noise) {
  noise.validate();
  Circuit circ = class_circuit(c);
  std::vector<int> slots = circ.slot_order();
  DenseOperator plus_a = DenseOperator::pure(x_ket(+1));

  auto run = [&](const DenseOperator& rho_b) {
    DenseEnsemble e = init_ensemble<DenseState>(2, kron(plus_a, rho_b));
    e = run_circuit(circ, std::move(e), noise, keep_everything());
    DenseOperator out = DenseOperator::zero(1);
    for (const auto& [rec, st] : e.branches) {
      DenseOperator b = st.partial_trace(0).op();
      out = out + conjugate(pauli_correction(c, class_outcomes(e, rec, slots)), b);
    }
    return out;
  };

  // Pure inputs |0>, |1>, |+>, |+i>, then linear combinations for the basis.
  Eigen::VectorXcd k0(2), k1(2), kp(2), ki(2);
  k0 << 1, 0;
  k1 << 0, 1;
  kp << 1, 1;
  ki << 1, cplx(0, 1);
  kp /= std::sqrt(2.0);
  ki /= std::sqrt(2.0);
  DenseOperator e0 = run(DenseOperator::pure(k0)), e1 = run(DenseOperator::pure(k1));
  DenseOperator ep = run(DenseOperator::pure(kp)), ei = run(DenseOperator::pure(ki));
  DenseOperator img[4] = {e0 + e1, cplx(2) * ep - (e0 + e1), cplx(2) * ei - (e0 + e1), e0 - e1};

  RMatrix r(4, 4);
  for (int i = 0; i < 4; ++i) {
    CMatrix s = pauli_matrix(pauli_basis_element(1, i)).matrix();
    for (int j = 0; j < 4; ++j) r(i, j) = (s * img[j].matrix()).trace().real() / 2.0;
  }
  return Superoperator(1, r);
}

double class_fidelity(CliffordClass c, const NoiseParams& noise) {
  return average_gate_fidelity(simulate_class(c, noise), class_unitary(c));
}

std::string FidelityScan::to_csv() const {
  std::string out = "p1,pa,p2,class,fidelity\n";
  char buf[160];
  for (const FidelityPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%s,%.12g\n", p.p1, p.pa, p.p2, to_string(cls), p.fidelity);
    out += buf;
  }
  return out;
}

std::vector<double> default_fidelity_grid() { return linear_grid(0.0, 0.2, 21); }

FidelityScan fidelity_scan(CliffordClass c, const std::vector<double>& p1_grid, const std::vector<double>& pa_grid,
                           double p2, int workers) {
  if (p1_grid.empty() || pa_grid.empty()) throw std::invalid_argument("fidelity_scan: grids must be nonempty");
  FidelityScan s;
  s.cls = c;
  s.p1_grid = p1_grid;
  s.pa_grid = pa_grid;
  s.p2 = p2;
  std::size_t na = pa_grid.size();
  s.points = parallel_map<FidelityPoint>(p1_grid.size() * na, workers, [&](std::size_t k) {
    FidelityPoint p{p1_grid[k / na], pa_grid[k % na], p2, 0.0};
    p.fidelity = class_fidelity(c, NoiseParams{p.pa, p.p1, p2, 0.0});
    return p;
  });
  return s;
}

// ---------------------------------------------------------------------------

std::vector<GatesetCircuit> gateset_experiment_suite(CliffordClass c) {
  std::vector<GatesetCircuit> out;
  ClassSequence seq = sequence_for(c);
  for (bool reference : {false, true}) {
    for (char prep : {'X', 'Y', 'Z'}) {
      for (char meas : {'X', 'Y', 'Z'}) {
        GatesetCircuit g;
        g.prep = prep;
        g.meas = meas;
        g.reference = reference;
        CircuitBuilder b(2);
        // Randomized reset of the computational qubit, then prepare.
        b.step().m1('Z', 1);
        b.step().m1('X', 1);
        b.step();
        g.prep_slot = b.m1(prep, 1);
        if (!reference) {
          for (const PauliString& m : seq.measurements) {
            b.step();
            g.class_slots.push_back(m.letter(1) == 'I' ? b.m1(m.letter(0), 0) : b.m2(m.str(), 0, 1));
          }
        }
        b.step();
        g.final_slot = b.m1(meas, 1);
        g.circuit = b.build();
        out.push_back(std::move(g));
      }
    }
  }
  return out;
}

GatesetEstimate gateset_reconstruct(CliffordClass c, const NoiseParams& noise) {
  noise.validate();
  std::vector<GatesetCircuit> suite = gateset_experiment_suite(c);
  auto axis = [](char l) { return l == 'X' ? 1 : l == 'Y' ? 2 : 3; };
  // Columns: preparations (+X, -X, +Y, -Y, +Z, -Z); rows: (1, <X>, <Y>, <Z>).
  Eigen::Matrix<double, 4, 6> data[2];
  Eigen::Matrix<double, 4, 6> target = Eigen::Matrix<double, 4, 6>::Zero();
  for (int ref = 0; ref < 2; ++ref) data[ref].setZero();
  for (int j = 0; j < 6; ++j) {
    target(0, j) = 1;
    target(1 + j / 2, j) = j % 2 ? -1 : 1;
    data[0](0, j) = data[1](0, j) = 1;
  }
  DenseOperator init = kron(DenseOperator::pure(x_ket(+1)), DenseOperator::pure(x_ket(+1)));
  for (const GatesetCircuit& g : suite) {
    DenseEnsemble e = init_ensemble<DenseState>(2, init);
    e = run_circuit(g.circuit, std::move(e), noise, keep_everything());
    double prob[2] = {0, 0}, corr[2] = {0, 0};
    for (const auto& [rec, st] : e.branches) {
      double w = st.trace();
      int sp = e.value(rec, g.prep_slot);
      int q = e.value(rec, g.final_slot);
      if (!g.reference) {
        PauliString frame = pauli_correction(c, class_outcomes(e, rec, g.class_slots));
        if (!commutes(frame, letter(g.meas))) q = -q;
      }
      int k = sp > 0 ? 0 : 1;
      prob[k] += w;
      corr[k] += w * q;
    }
    for (int k = 0; k < 2; ++k) {
      if (!(prob[k] > 0)) throw std::runtime_error("gateset_reconstruct: a preparation outcome never occurs");
      int col = 2 * (axis(g.prep) - 1) + k;
      data[g.reference ? 1 : 0](axis(g.meas), col) = corr[k] / prob[k];
    }
  }
  Eigen::MatrixXd tp = Eigen::MatrixXd(target).completeOrthogonalDecomposition().pseudoInverse();  // 6 x 4
  Eigen::Matrix4d effects = data[1] * tp;
  if (std::abs(effects.determinant()) < 1e-12) throw std::runtime_error("gateset_reconstruct: singular reference data");
  Eigen::Matrix4d g = effects.inverse() * data[0] * tp;
  GatesetEstimate est;
  est.map = Superoperator(1, RMatrix(g));
  est.reference = Superoperator(1, RMatrix(effects));
  est.residual = (effects * g * target - data[0]).norm();
  return est;
}

// ---------------------------------------------------------------------------

TStateResult tgate_experiment(double delta, const NoiseParams& noise) {
  CircuitBuilder b(1);
  b.step().rot('Z', 0, M_PI / 8 + delta);
  Circuit circ = b.build();
  DenseEnsemble e = init_ensemble<DenseState>(1, DenseOperator::pure(x_ket(+1)));
  e = run_circuit(circ, std::move(e), noise);
  DenseOperator rho = total_state(e).op();
  Eigen::VectorXcd t(2);
  t << 1, std::polar(1.0, M_PI / 4);
  t /= std::sqrt(2.0);
  TStateResult r;
  r.delta = delta;
  r.fidelity = (t.adjoint() * rho.matrix() * t)(0, 0).real();
  r.expected = std::cos(delta) * std::cos(delta);
  return r;
}

}  // namespace tetron
