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

#ifndef TETRON_PAULI_HPP_
#define TETRON_PAULI_HPP_

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace tetron {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

// Tolerances for algebraic identities and Hermiticity checks.
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

inline constexpr int kMaxQubits = 16;

// Signed Pauli string. Letter i acts on qubit i. Internally a Hermitian
// Pauli sigma(x, z) = i^{|x & z|} X^x Z^z with bit i of the masks for qubit i.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int num_qubits);

  static PauliString parse(std::string_view text);
  static PauliString from_masks(int num_qubits, std::uint32_t x, std::uint32_t z, int sign = +1);
  // Single letter on `qubit` of an n-qubit register.
  static PauliString single(int num_qubits, int qubit, char letter);

  int num_qubits() const { return n_; }
  int sign() const { return sign_; }
  std::uint32_t x() const { return x_; }
  std::uint32_t z() const { return z_; }
  char letter(int q) const;
  int weight() const;
  bool is_identity_letters() const { return x_ == 0 && z_ == 0; }

  PauliString negated() const;
  PauliString with_sign(int s) const;
  PauliString unsigned_part() const { return with_sign(+1); }
  // Embeds this string's letters onto `qubits` of a width-`width` register.
  PauliString embed(int width, const int* qubits) const;
  // Letters restricted to the listed qubits (sign kept).
  PauliString restrict_to(const int* qubits, int count) const;

  std::string str() const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_ && a.sign_ == b.sign_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) { return !(a == b); }
  friend bool operator<(const PauliString& a, const PauliString& b);

 private:
  int n_ = 0;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
  int sign_ = +1;
};

// Phase i^k, k in {0,1,2,3}.
struct Phase {
  int k = 0;
  cplx value() const;
  bool is_real() const { return (k & 1) == 0; }
  int real_sign() const;  // throws unless real
  friend bool operator==(Phase a, Phase b) { return ((a.k - b.k) & 3) == 0; }
};

// a * b = phase * result, with result.sign() == +1.
struct PauliProduct {
  PauliString pauli;
  Phase phase;
};

PauliProduct multiply(const PauliString& a, const PauliString& b);

// Exponent e (mod 4) with sigma(x1,z1) sigma(x2,z2) = i^e sigma(x1^x2, z1^z2).
inline int product_phase_exponent(std::uint32_t x1, std::uint32_t z1, std::uint32_t x2,
                                  std::uint32_t z2) {
  int e = __builtin_popcount(x1 & z1) + __builtin_popcount(x2 & z2) -
          __builtin_popcount((x1 ^ x2) & (z1 ^ z2)) + 2 * __builtin_popcount(z1 & x2);
  return e & 3;
}

inline bool masks_commute(std::uint32_t x1, std::uint32_t z1, std::uint32_t x2, std::uint32_t z2) {
  return ((__builtin_popcount(x1 & z2) + __builtin_popcount(z1 & x2)) & 1) == 0;
}

bool commutes(const PauliString& p, const PauliString& q);

class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(int num_qubits, CMatrix m);

  static DenseOperator zero(int num_qubits);
  static DenseOperator identity(int num_qubits);
  // |psi><psi| for a state vector of length 2^n.
  static DenseOperator pure(const Eigen::VectorXcd& psi);

  int num_qubits() const { return n_; }
  Eigen::Index dimension() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  CMatrix& matrix() { return m_; }

  cplx trace() const { return m_.trace(); }
  bool is_hermitian(double tol = kHermitianTol) const;
  double min_eigenvalue() const;  // of the Hermitian part

  DenseOperator adjoint() const { return DenseOperator(n_, m_.adjoint()); }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator*(cplx c, const DenseOperator& a);

 private:
  int n_ = 0;
  CMatrix m_;
};

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);
DenseOperator pauli_matrix(const PauliString& p);
DenseOperator projector(const PauliString& p, int s);
// Partial trace over one qubit.
DenseOperator partial_trace(const DenseOperator& rho, int qubit);
double trace_distance(const DenseOperator& a, const DenseOperator& b);

// Transfer matrix in the normalized Pauli basis sigma/sqrt(2^n). Basis index
// encodes letters in base 4 (I,X,Y,Z) with qubit 0 the most significant digit.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(int num_qubits, RMatrix transfer);

  static Superoperator identity(int num_qubits);
  static Superoperator unitary(const DenseOperator& u);

  int num_qubits() const { return n_; }
  const RMatrix& transfer_matrix() const { return r_; }

  bool is_trace_preserving(double tol = kAlgebraTol) const;
  DenseOperator apply(const DenseOperator& rho) const;

  // (a * b) applies b first.
  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);

 private:
  int n_ = 0;
  RMatrix r_;
};

using DenseMap = std::function<DenseOperator(const DenseOperator&)>;

PauliString pauli_basis_element(int num_qubits, int index);
Superoperator channel_to_superop(const DenseMap& channel, int num_qubits);

enum class Normalization { kRequireTracePreserving, kConditionOnSuccess };

// F = (d F_pro + R_00) / (d + 1), F_pro = tr(R_U^T R_E) / d^2 (equal to
// (2 F_pro + 1)/3 for a trace-preserving qubit channel). With
// kConditionOnSuccess the result is divided by R_00, the average success
// probability of a subnormalized channel.
double average_gate_fidelity(const Superoperator& noisy, const DenseOperator& ideal_unitary,
                             Normalization norm = Normalization::kRequireTracePreserving);

}  // namespace tetron

#endif  // TETRON_PAULI_HPP_
