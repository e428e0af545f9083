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

#ifndef TETRON_STATE_HPP_
#define TETRON_STATE_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "tetron/channels.hpp"
#include "tetron/pauli.hpp"

namespace tetron {

// Unnormalized density matrix stored as a dense 2^n x 2^n matrix.
class DenseState {
 public:
  DenseState() = default;
  explicit DenseState(DenseOperator rho) : rho_(std::move(rho)) {}

  static DenseState from_dense(const DenseOperator& rho) { return DenseState(rho); }
  // Product of single-qubit states given as Bloch 4-vectors (1, x, y, z).
  static DenseState product(const std::vector<std::array<double, 4>>& bloch);

  int num_qubits() const { return rho_.num_qubits(); }
  DenseOperator to_dense() const { return rho_; }
  const DenseOperator& op() const { return rho_; }

  double trace() const { return rho_.trace().real(); }
  // tr(P rho), unnormalized.
  double expectation(const PauliString& p) const;
  bool is_zero() const;

  void apply(const Primitive& op);
  void apply(const ChannelProgram& program);
  void add(const DenseState& other);
  void scale(double c);
  DenseState partial_trace(int qubit) const;

 private:
  DenseOperator rho_;
};

// Unnormalized density matrix stored by its nonzero Pauli coefficients:
// rho = sum_sigma c_sigma sigma / 2^n with real c_sigma = tr(sigma rho).
// Exact for every primitive; the support stays small for Pauli-type noise.
class PauliState {
 public:
  struct Entry {
    std::uint32_t x;
    std::uint32_t z;
    double c;
  };

  PauliState() = default;
  explicit PauliState(int num_qubits) : n_(num_qubits) {}

  static PauliState from_dense(const DenseOperator& rho);
  static PauliState product(const std::vector<std::array<double, 4>>& bloch);

  int num_qubits() const { return n_; }
  DenseOperator to_dense() const;
  const std::vector<Entry>& entries() const { return e_; }
  std::size_t support_size() const { return e_.size(); }

  double trace() const;
  double expectation(const PauliString& p) const;
  bool is_zero() const { return e_.empty(); }

  void apply(const Primitive& op);
  void apply(const ChannelProgram& program);
  void add(const PauliState& other);
  void scale(double c);
  PauliState partial_trace(int qubit) const;

 private:
  void canonicalize();
  double coefficient(std::uint32_t x, std::uint32_t z) const;

  int n_ = 0;
  std::vector<Entry> e_;  // sorted by (z, x), no exact zeros
};

}  // namespace tetron

#endif  // TETRON_STATE_HPP_
