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

#ifndef TETRON_CIRCUIT_HPP_
#define TETRON_CIRCUIT_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tetron/pauli.hpp"

namespace tetron {

struct IdleOp {
  int qubit = 0;
  friend bool operator==(const IdleOp&, const IdleOp&) = default;
};

struct Meas1Op {
  PauliString basis;  // one letter
  int qubit = 0;
  int slot = 0;
  friend bool operator==(const Meas1Op&, const Meas1Op&) = default;
};

struct Meas2Op {
  PauliString pair;  // two letters, both non-identity
  int q0 = 0;
  int q1 = 0;
  int slot = 0;
  friend bool operator==(const Meas2Op&, const Meas2Op&) = default;
};

struct RotateOp {
  PauliString axis;  // one letter
  int qubit = 0;
  double phi = 0.0;
  friend bool operator==(const RotateOp&, const RotateOp&) = default;
};

using Operation = std::variant<IdleOp, Meas1Op, Meas2Op, RotateOp>;

struct CircuitStep {
  std::vector<Operation> ops;
  friend bool operator==(const CircuitStep&, const CircuitStep&) = default;
};

// Parity check over outcome slots. With compare_previous the parity must
// equal that of the detector listed just before this one.
struct Detector {
  std::vector<int> slots;
  int expected = +1;
  bool compare_previous = false;
  friend bool operator==(const Detector&, const Detector&) = default;
};

class CircuitParseError : public std::runtime_error {
 public:
  CircuitParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Qubits touched by an operation.
std::vector<int> op_qubits(const Operation& op);
// Outcome slot of a measurement, -1 otherwise.
int op_slot(const Operation& op);
// Measured Pauli embedded in the full register (measurements only).
PauliString op_pauli(const Operation& op, int width);

struct Circuit {
  int width = 0;
  std::vector<CircuitStep> steps;
  std::vector<Detector> detectors;

  // Throws std::invalid_argument on qubit overlap, bad indices, duplicate
  // slots or detectors that reference unknown slots.
  void validate() const;
  // Slots in measurement order.
  std::vector<int> slot_order() const;
  int num_measurements() const;
  // Detectors rewritten with absolute parities (compare_previous resolved).
  std::vector<Detector> resolved_detectors() const;

  std::string to_text() const;
  static Circuit parse(std::string_view text);

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Incremental construction with automatic slot numbering.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int width) { c_.width = width; }
  CircuitBuilder& step();
  int m1(char basis, int qubit);
  int m2(std::string_view pair, int q0, int q1);
  CircuitBuilder& rot(char axis, int qubit, double phi);
  CircuitBuilder& idle(int qubit);
  CircuitBuilder& detector(std::vector<int> slots, int expected = +1);
  int next_slot() const { return next_slot_; }
  Circuit& circuit() { return c_; }
  Circuit build() const;

 private:
  CircuitStep& current();
  Circuit c_;
  int next_slot_ = 0;
};

}  // namespace tetron

#endif  // TETRON_CIRCUIT_HPP_
