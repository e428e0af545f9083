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

#include "tetron/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tetron {

namespace {

// Qubit q lives at bit (n - 1 - q) of a dense row/column index.
std::uint32_t index_mask(std::uint32_t qubit_mask, int n) {
  std::uint32_t m = 0;
  for (int q = 0; q < n; ++q) {
    if ((qubit_mask >> q) & 1u) m |= 1u << (n - 1 - q);
  }
  return m;
}

inline double parity_sign(std::uint32_t v) { return (__builtin_popcount(v) & 1) ? -1.0 : 1.0; }

// omega = sign * i^{#Y}, so that P|j> = omega (-1)^{|j & z|} |j ^ x>.
cplx pauli_omega(const PauliString& p) {
  return double(p.sign()) * Phase{__builtin_popcount(p.x() & p.z())}.value();
}

void check_width(const PauliString& p, int n) {
  if (p.num_qubits() != n) throw std::invalid_argument("state: operator width mismatch");
}

// P rho
CMatrix left_mul(const PauliString& p, const CMatrix& rho) {
  int n = p.num_qubits();
  std::uint32_t xi = index_mask(p.x(), n), zi = index_mask(p.z(), n);
  cplx w = pauli_omega(p);
  Eigen::Index d = rho.rows();
  CMatrix out(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    std::uint32_t src = std::uint32_t(a) ^ xi;
    cplx f = w * parity_sign(src & zi);
    out.row(a) = f * rho.row(src);
  }
  return out;
}

// rho P
CMatrix right_mul(const CMatrix& rho, const PauliString& p) {
  int n = p.num_qubits();
  std::uint32_t xi = index_mask(p.x(), n), zi = index_mask(p.z(), n);
  cplx w = pauli_omega(p);
  Eigen::Index d = rho.rows();
  CMatrix out(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    cplx f = w * parity_sign(std::uint32_t(b) & zi);
    out.col(b) = f * rho.col(std::uint32_t(b) ^ xi);
  }
  return out;
}

// P rho P
CMatrix conj_mul(const PauliString& p, const CMatrix& rho) {
  int n = p.num_qubits();
  std::uint32_t xi = index_mask(p.x(), n), zi = index_mask(p.z(), n);
  double ny = parity_sign(p.x() & p.z());
  Eigen::Index d = rho.rows();
  CMatrix out(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    std::uint32_t bs = std::uint32_t(b) ^ xi;
    double fb = ny * parity_sign(std::uint32_t(b) & zi);
    for (Eigen::Index a = 0; a < d; ++a) {
      std::uint32_t as = std::uint32_t(a) ^ xi;
      out(a, b) = (fb * parity_sign(as & zi)) * rho(as, bs);
    }
  }
  return out;
}

std::array<CMatrix, 4> letter_matrices() {
  std::array<CMatrix, 4> m;
  for (int i = 0; i < 4; ++i) m[i] = pauli_matrix(pauli_basis_element(1, i)).matrix();
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseState

DenseState DenseState::product(const std::vector<std::array<double, 4>>& bloch) {
  if (bloch.empty()) throw std::invalid_argument("product: no qubits");
  static const std::array<CMatrix, 4> L = letter_matrices();
  DenseOperator out;
  for (std::size_t q = 0; q < bloch.size(); ++q) {
    CMatrix m = CMatrix::Zero(2, 2);
    for (int i = 0; i < 4; ++i) m += (bloch[q][i] / 2.0) * L[i];
    DenseOperator f(1, m);
    out = q == 0 ? f : kron(out, f);
  }
  return DenseState(out);
}

double DenseState::expectation(const PauliString& p) const {
  check_width(p, num_qubits());
  return (pauli_matrix(p).matrix() * rho_.matrix()).trace().real();
}

bool DenseState::is_zero() const { return (rho_.matrix().array() == cplx(0.0)).all(); }

void DenseState::apply(const Primitive& op) {
  CMatrix& m = rho_.matrix();
  if (auto* mix = std::get_if<PauliMix>(&op)) {
    CMatrix out = CMatrix::Zero(m.rows(), m.cols());
    for (auto& [p, w] : mix->terms) {
      check_width(p, num_qubits());
      if (w == 0.0) continue;
      if (p.is_identity_letters()) {
        out += w * m;
      } else {
        out += w * conj_mul(p, m);
      }
    }
    m = std::move(out);
  } else if (auto* a = std::get_if<Assign>(&op)) {
    check_width(a->pauli, num_qubits());
    CMatrix diag = 0.25 * (m + conj_mul(a->pauli, m));
    CMatrix off = left_mul(a->pauli, m) + right_mul(m, a->pauli);
    m = diag + (0.25 * a->outcome * (1.0 - 2.0 * a->p_a)) * off;
  } else {
    auto& r = std::get<Rotate>(op);
    check_width(r.axis, num_qubits());
    double c = std::cos(r.angle), s = std::sin(r.angle);
    CMatrix comm = left_mul(r.axis, m) - right_mul(m, r.axis);
    m = (c * c) * m + (s * s) * conj_mul(r.axis, m) - cplx(0.0, s * c) * comm;
  }
}

void DenseState::apply(const ChannelProgram& program) {
  if (program.num_qubits() != num_qubits()) throw std::invalid_argument("state: program width mismatch");
  for (const Primitive& op : program.ops()) apply(op);
}

void DenseState::add(const DenseState& other) {
  if (rho_.num_qubits() == 0) {
    rho_ = other.rho_;
    return;
  }
  rho_.matrix() += other.rho_.matrix();
}

void DenseState::scale(double c) { rho_.matrix() *= c; }

DenseState DenseState::partial_trace(int qubit) const { return DenseState(tetron::partial_trace(rho_, qubit)); }

// ---------------------------------------------------------------------------
// PauliState

namespace {

inline std::uint64_t key_of(std::uint32_t x, std::uint32_t z) { return (std::uint64_t(x) << 32) | z; }
inline std::uint64_t key_of(const PauliState::Entry& e) { return key_of(e.x, e.z); }

}  // namespace

void PauliState::canonicalize() {
  std::sort(e_.begin(), e_.end(), [](const Entry& a, const Entry& b) { return key_of(a) < key_of(b); });
  std::size_t w = 0;
  for (std::size_t r = 0; r < e_.size();) {
    Entry acc = e_[r];
    std::size_t k = r + 1;
    while (k < e_.size() && e_[k].x == acc.x && e_[k].z == acc.z) acc.c += e_[k++].c;
    if (acc.c != 0.0) e_[w++] = acc;
    r = k;
  }
  e_.resize(w);
}

double PauliState::coefficient(std::uint32_t x, std::uint32_t z) const {
  std::uint64_t k = key_of(x, z);
  auto it = std::lower_bound(e_.begin(), e_.end(), k, [](const Entry& e, std::uint64_t v) { return key_of(e) < v; });
  if (it != e_.end() && key_of(*it) == k) return it->c;
  return 0.0;
}

PauliState PauliState::from_dense(const DenseOperator& rho) {
  int n = rho.num_qubits();
  PauliState s(n);
  std::uint32_t full = 1u << n;
  const CMatrix& m = rho.matrix();
  for (std::uint32_t x = 0; x < full; ++x) {
    for (std::uint32_t z = 0; z < full; ++z) {
      std::uint32_t xi = index_mask(x, n), zi = index_mask(z, n);
      cplx w = Phase{__builtin_popcount(x & z)}.value();
      cplx acc = 0.0;
      for (std::uint32_t a = 0; a < full; ++a) {
        std::uint32_t src = a ^ xi;
        acc += parity_sign(src & zi) * m(src, a);
      }
      double c = (w * acc).real();
      if (c != 0.0) s.e_.push_back({x, z, c});
    }
  }
  s.canonicalize();
  return s;
}

PauliState PauliState::product(const std::vector<std::array<double, 4>>& bloch) {
  int n = static_cast<int>(bloch.size());
  if (n == 0) throw std::invalid_argument("product: no qubits");
  PauliState s(n);
  s.e_.push_back({0, 0, 1.0});
  // letter index 0..3 = I, X, Y, Z
  static const std::uint32_t lx[4] = {0, 1, 1, 0}, lz[4] = {0, 0, 1, 1};
  for (int q = 0; q < n; ++q) {
    std::vector<Entry> next;
    for (const Entry& e : s.e_) {
      for (int l = 0; l < 4; ++l) {
        double v = bloch[q][l];
        if (v == 0.0) continue;
        next.push_back({e.x | (lx[l] << q), e.z | (lz[l] << q), e.c * v});
      }
    }
    s.e_ = std::move(next);
  }
  s.canonicalize();
  return s;
}

DenseOperator PauliState::to_dense() const {
  int n = n_;
  std::uint32_t full = 1u << n;
  CMatrix m = CMatrix::Zero(full, full);
  double inv = 1.0 / double(full);
  for (const Entry& e : e_) {
    std::uint32_t xi = index_mask(e.x, n), zi = index_mask(e.z, n);
    cplx w = Phase{__builtin_popcount(e.x & e.z)}.value() * (e.c * inv);
    for (std::uint32_t a = 0; a < full; ++a) {
      std::uint32_t col = a ^ xi;
      m(a, col) += w * parity_sign(col & zi);
    }
  }
  return DenseOperator(n, std::move(m));
}

double PauliState::trace() const { return coefficient(0, 0); }

double PauliState::expectation(const PauliString& p) const {
  check_width(p, n_);
  return p.sign() * coefficient(p.x(), p.z());
}

void PauliState::apply(const Primitive& op) {
  if (auto* mix = std::get_if<PauliMix>(&op)) {
    for (auto& [p, w] : mix->terms) check_width(p, n_);
    for (Entry& e : e_) {
      double f = 0.0;
      for (auto& [p, w] : mix->terms) {
        f += masks_commute(p.x(), p.z(), e.x, e.z) ? w : -w;
      }
      e.c *= f;
    }
    e_.erase(std::remove_if(e_.begin(), e_.end(), [](const Entry& e) { return e.c == 0.0; }), e_.end());
  } else if (auto* a = std::get_if<Assign>(&op)) {
    check_width(a->pauli, n_);
    const std::uint32_t px = a->pauli.x(), pz = a->pauli.z();
    const double t = a->outcome * a->pauli.sign() * (1.0 - 2.0 * a->p_a);
    std::vector<Entry> out;
    out.reserve(2 * e_.size());
    for (const Entry& e : e_) {
      if (!masks_commute(px, pz, e.x, e.z)) continue;
      out.push_back({e.x, e.z, 0.5 * e.c});
      if (t != 0.0) {
        int ph = product_phase_exponent(px, pz, e.x, e.z);
        double sgn = ph == 0 ? 1.0 : -1.0;
        out.push_back({e.x ^ px, e.z ^ pz, 0.5 * t * sgn * e.c});
      }
    }
    e_ = std::move(out);
    canonicalize();
  } else {
    auto& r = std::get<Rotate>(op);
    check_width(r.axis, n_);
    const std::uint32_t qx = r.axis.x(), qz = r.axis.z();
    const double ang = 2.0 * r.angle * r.axis.sign();
    const double c = std::cos(ang), s = std::sin(ang);
    std::vector<Entry> out;
    out.reserve(2 * e_.size());
    bool grew = false;
    for (const Entry& e : e_) {
      if (masks_commute(qx, qz, e.x, e.z)) {
        out.push_back(e);
        continue;
      }
      // sigma Q = i^ph tau with ph odd; i * i^ph is real.
      int ph = product_phase_exponent(e.x, e.z, qx, qz);
      double sgn = ((ph + 1) & 3) == 0 ? 1.0 : -1.0;
      out.push_back({e.x, e.z, c * e.c});
      if (s != 0.0) {
        out.push_back({e.x ^ qx, e.z ^ qz, s * sgn * e.c});
        grew = true;
      }
    }
    e_ = std::move(out);
    if (grew || c == 0.0) canonicalize();
  }
}

void PauliState::apply(const ChannelProgram& program) {
  if (program.num_qubits() != n_) throw std::invalid_argument("state: program width mismatch");
  for (const Primitive& op : program.ops()) apply(op);
}

void PauliState::add(const PauliState& other) {
  if (n_ == 0) {
    *this = other;
    return;
  }
  if (other.n_ != n_) throw std::invalid_argument("state: width mismatch in add");
  std::vector<Entry> out;
  out.reserve(e_.size() + other.e_.size());
  std::size_t i = 0, j = 0;
  while (i < e_.size() || j < other.e_.size()) {
    if (j == other.e_.size() || (i < e_.size() && key_of(e_[i]) < key_of(other.e_[j]))) {
      out.push_back(e_[i++]);
    } else if (i == e_.size() || key_of(other.e_[j]) < key_of(e_[i])) {
      out.push_back(other.e_[j++]);
    } else {
      double c = e_[i].c + other.e_[j].c;
      if (c != 0.0) out.push_back({e_[i].x, e_[i].z, c});
      ++i;
      ++j;
    }
  }
  e_ = std::move(out);
}

void PauliState::scale(double c) {
  if (c == 0.0) {
    e_.clear();
    return;
  }
  for (Entry& e : e_) e.c *= c;
}

PauliState PauliState::partial_trace(int qubit) const {
  if (n_ < 2 || qubit < 0 || qubit >= n_) throw std::invalid_argument("partial_trace: bad qubit");
  PauliState out(n_ - 1);
  std::uint32_t bit = 1u << qubit, low = bit - 1;
  auto squeeze = [&](std::uint32_t m) { return (m & low) | ((m >> 1) & ~low); };
  for (const Entry& e : e_) {
    if ((e.x | e.z) & bit) continue;
    out.e_.push_back({squeeze(e.x), squeeze(e.z), e.c});
  }
  out.canonicalize();
  return out;
}

}  // namespace tetron
