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

#include "tetron/pauli.hpp"

#include <stdexcept>

namespace tetron {

PauliString::PauliString(int num_qubits) : n_(num_qubits) {
  if (num_qubits <= 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count out of range");
  }
}

PauliString PauliString::parse(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    sign = text[0] == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  PauliString p(static_cast<int>(text.size()));
  p.sign_ = sign;
  for (int q = 0; q < p.n_; ++q) {
    std::uint32_t bit = 1u << q;
    switch (text[q]) {
      case 'I': case '_': break;
      case 'X': p.x_ |= bit; break;
      case 'Y': p.x_ |= bit; p.z_ |= bit; break;
      case 'Z': p.z_ |= bit; break;
      default:
        throw std::invalid_argument("PauliString: bad letter '" + std::string(1, text[q]) + "'");
    }
  }
  return p;
}

PauliString PauliString::from_masks(int num_qubits, std::uint32_t x, std::uint32_t z, int sign) {
  PauliString p(num_qubits);
  std::uint32_t mask = num_qubits == 32 ? ~0u : ((1u << num_qubits) - 1);
  if ((x & ~mask) || (z & ~mask)) throw std::invalid_argument("PauliString: mask out of range");
  if (sign != 1 && sign != -1) throw std::invalid_argument("PauliString: sign must be +1 or -1");
  p.x_ = x;
  p.z_ = z;
  p.sign_ = sign;
  return p;
}

PauliString PauliString::single(int num_qubits, int qubit, char letter) {
  if (qubit < 0 || qubit >= num_qubits) throw std::invalid_argument("PauliString: qubit out of range");
  std::string s(num_qubits, 'I');
  s[qubit] = letter;
  return parse(s);
}

char PauliString::letter(int q) const {
  bool xb = (x_ >> q) & 1u, zb = (z_ >> q) & 1u;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

int PauliString::weight() const { return __builtin_popcount(x_ | z_); }

PauliString PauliString::negated() const { return with_sign(-sign_); }

PauliString PauliString::with_sign(int s) const {
  PauliString p = *this;
  if (s != 1 && s != -1) throw std::invalid_argument("PauliString: sign must be +1 or -1");
  p.sign_ = s;
  return p;
}

PauliString PauliString::embed(int width, const int* qubits) const {
  PauliString p(width);
  p.sign_ = sign_;
  for (int q = 0; q < n_; ++q) {
    int t = qubits[q];
    if (t < 0 || t >= width) throw std::invalid_argument("PauliString: embed target out of range");
    p.x_ |= ((x_ >> q) & 1u) << t;
    p.z_ |= ((z_ >> q) & 1u) << t;
  }
  return p;
}

PauliString PauliString::restrict_to(const int* qubits, int count) const {
  PauliString p(count);
  p.sign_ = sign_;
  for (int i = 0; i < count; ++i) {
    p.x_ |= ((x_ >> qubits[i]) & 1u) << i;
    p.z_ |= ((z_ >> qubits[i]) & 1u) << i;
  }
  return p;
}

std::string PauliString::str() const {
  std::string s = sign_ < 0 ? "-" : "";
  for (int q = 0; q < n_; ++q) s += letter(q);
  return s;
}

bool operator<(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (a.x_ != b.x_) return a.x_ < b.x_;
  if (a.z_ != b.z_) return a.z_ < b.z_;
  return a.sign_ < b.sign_;
}

cplx Phase::value() const {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k & 3];
}

int Phase::real_sign() const {
  if (!is_real()) throw std::logic_error("Phase: imaginary phase where a real sign was required");
  return (k & 3) == 0 ? +1 : -1;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("multiply: width mismatch");
  int e = product_phase_exponent(a.x(), a.z(), b.x(), b.z());
  if (a.sign() * b.sign() < 0) e += 2;
  return {PauliString::from_masks(a.num_qubits(), a.x() ^ b.x(), a.z() ^ b.z()), Phase{e & 3}};
}

bool commutes(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) throw std::invalid_argument("commutes: width mismatch");
  return masks_commute(p.x(), p.z(), q.x(), q.z());
}

DenseOperator::DenseOperator(int num_qubits, CMatrix m) : n_(num_qubits), m_(std::move(m)) {
  Eigen::Index d = Eigen::Index(1) << num_qubits;
  if (m_.rows() != d || m_.cols() != d) throw std::invalid_argument("DenseOperator: dimension mismatch");
}

DenseOperator DenseOperator::zero(int num_qubits) {
  Eigen::Index d = Eigen::Index(1) << num_qubits;
  return DenseOperator(num_qubits, CMatrix::Zero(d, d));
}

DenseOperator DenseOperator::identity(int num_qubits) {
  Eigen::Index d = Eigen::Index(1) << num_qubits;
  return DenseOperator(num_qubits, CMatrix::Identity(d, d));
}

DenseOperator DenseOperator::pure(const Eigen::VectorXcd& psi) {
  int n = 0;
  while ((Eigen::Index(1) << n) < psi.size()) ++n;
  if ((Eigen::Index(1) << n) != psi.size()) throw std::invalid_argument("pure: length not a power of 2");
  return DenseOperator(n, psi * psi.adjoint());
}

bool DenseOperator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DenseOperator::min_eigenvalue() const {
  CMatrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  return DenseOperator(a.n_, a.m_ * b.m_);
}
DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  return DenseOperator(a.n_, a.m_ + b.m_);
}
DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  return DenseOperator(a.n_, a.m_ - b.m_);
}
DenseOperator operator*(cplx c, const DenseOperator& a) { return DenseOperator(a.n_, c * a.m_); }

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  const CMatrix& A = a.matrix();
  const CMatrix& B = b.matrix();
  CMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return DenseOperator(a.num_qubits() + b.num_qubits(), std::move(out));
}

namespace {

CMatrix letter_matrix(char c) {
  CMatrix m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

}  // namespace

DenseOperator pauli_matrix(const PauliString& p) {
  DenseOperator out(1, letter_matrix(p.letter(0)));
  for (int q = 1; q < p.num_qubits(); ++q) out = kron(out, DenseOperator(1, letter_matrix(p.letter(q))));
  if (p.sign() < 0) out.matrix() *= -1.0;
  return out;
}

DenseOperator projector(const PauliString& p, int s) {
  if (p.is_identity_letters()) throw std::invalid_argument("projector: identity string has no nontrivial projector");
  if (s != 1 && s != -1) throw std::invalid_argument("projector: outcome must be +1 or -1");
  DenseOperator id = DenseOperator::identity(p.num_qubits());
  return DenseOperator(p.num_qubits(), 0.5 * (id.matrix() + double(s) * pauli_matrix(p).matrix()));
}

DenseOperator partial_trace(const DenseOperator& rho, int qubit) {
  int n = rho.num_qubits();
  if (n < 2 || qubit < 0 || qubit >= n) throw std::invalid_argument("partial_trace: bad qubit");
  int bit = n - 1 - qubit;
  Eigen::Index d = Eigen::Index(1) << (n - 1);
  CMatrix out = CMatrix::Zero(d, d);
  auto expand = [bit](Eigen::Index r, Eigen::Index b) {
    Eigen::Index low = r & ((Eigen::Index(1) << bit) - 1);
    Eigen::Index high = (r >> bit) << (bit + 1);
    return high | (b << bit) | low;
  };
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = rho.matrix()(expand(i, 0), expand(j, 0)) + rho.matrix()(expand(i, 1), expand(j, 1));
  return DenseOperator(n - 1, std::move(out));
}

double trace_distance(const DenseOperator& a, const DenseOperator& b) {
  CMatrix diff = a.matrix() - b.matrix();
  CMatrix h = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

PauliString pauli_basis_element(int num_qubits, int index) {
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::string s(num_qubits, 'I');
  for (int q = num_qubits - 1; q >= 0; --q) {
    s[q] = letters[index & 3];
    index >>= 2;
  }
  return PauliString::parse(s);
}

Superoperator::Superoperator(int num_qubits, RMatrix transfer) : n_(num_qubits), r_(std::move(transfer)) {
  Eigen::Index d2 = Eigen::Index(1) << (2 * num_qubits);
  if (r_.rows() != d2 || r_.cols() != d2) throw std::invalid_argument("Superoperator: dimension mismatch");
}

Superoperator Superoperator::identity(int num_qubits) {
  Eigen::Index d2 = Eigen::Index(1) << (2 * num_qubits);
  return Superoperator(num_qubits, RMatrix::Identity(d2, d2));
}

Superoperator Superoperator::unitary(const DenseOperator& u) {
  return channel_to_superop(
      [&u](const DenseOperator& rho) { return u * rho * u.adjoint(); }, u.num_qubits());
}

bool Superoperator::is_trace_preserving(double tol) const {
  for (Eigen::Index j = 0; j < r_.cols(); ++j) {
    if (std::abs(r_(0, j) - (j == 0 ? 1.0 : 0.0)) > tol) return false;
  }
  return true;
}

DenseOperator Superoperator::apply(const DenseOperator& rho) const {
  int n = n_;
  double norm = std::sqrt(double(Eigen::Index(1) << n));
  Eigen::Index d2 = r_.rows();
  Eigen::VectorXd v(d2);
  std::vector<DenseOperator> basis;
  basis.reserve(d2);
  for (Eigen::Index i = 0; i < d2; ++i) {
    basis.push_back(pauli_matrix(pauli_basis_element(n, int(i))));
    v(i) = (basis.back().matrix() * rho.matrix()).trace().real() / norm;
  }
  Eigen::VectorXd w = r_ * v;
  DenseOperator out = DenseOperator::zero(n);
  for (Eigen::Index i = 0; i < d2; ++i) out.matrix() += (w(i) / norm) * basis[i].matrix();
  return out;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("Superoperator: width mismatch");
  return Superoperator(a.n_, a.r_ * b.r_);
}

Superoperator channel_to_superop(const DenseMap& channel, int num_qubits) {
  Eigen::Index d2 = Eigen::Index(1) << (2 * num_qubits);
  double d = double(Eigen::Index(1) << num_qubits);
  std::vector<DenseOperator> basis;
  basis.reserve(d2);
  for (Eigen::Index i = 0; i < d2; ++i) basis.push_back(pauli_matrix(pauli_basis_element(num_qubits, int(i))));
  RMatrix r(d2, d2);
  for (Eigen::Index j = 0; j < d2; ++j) {
    DenseOperator out = channel(basis[j]);
    for (Eigen::Index i = 0; i < d2; ++i) {
      r(i, j) = (basis[i].matrix() * out.matrix()).trace().real() / d;
    }
  }
  return Superoperator(num_qubits, std::move(r));
}

double average_gate_fidelity(const Superoperator& noisy, const DenseOperator& ideal_unitary,
                             Normalization norm) {
  if (noisy.num_qubits() != ideal_unitary.num_qubits()) {
    throw std::invalid_argument("average_gate_fidelity: width mismatch");
  }
  bool tp = noisy.is_trace_preserving();
  if (!tp && norm == Normalization::kRequireTracePreserving) {
    throw std::invalid_argument("average_gate_fidelity: channel is not trace preserving");
  }
  double d = double(Eigen::Index(1) << noisy.num_qubits());
  RMatrix ru = Superoperator::unitary(ideal_unitary).transfer_matrix();
  double f_pro = (ru.transpose() * noisy.transfer_matrix()).trace() / (d * d);
  double r00 = noisy.transfer_matrix()(0, 0);
  double f = (d * f_pro + r00) / (d + 1.0);
  if (norm == Normalization::kConditionOnSuccess) {
    if (r00 <= 0.0) throw std::invalid_argument("average_gate_fidelity: channel has zero success probability");
    f /= r00;
  }
  return f;
}

}  // namespace tetron
