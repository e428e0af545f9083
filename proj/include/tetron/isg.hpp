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

#ifndef TETRON_ISG_HPP_
#define TETRON_ISG_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "tetron/circuit.hpp"
#include "tetron/pauli.hpp"

namespace tetron {

// Value of a Pauli in terms of past outcomes: P = expected * prod(slots).
struct Inference {
  std::vector<int> slots;  // sorted
  int expected = +1;
};

// Instantaneous stabilizer group of an ideal measurement circuit. Each
// generator carries the outcome slots whose product gives its eigenvalue.
class StabilizerTracker {
 public:
  explicit StabilizerTracker(int width) : n_(width) {}

  int width() const { return n_; }
  // Adds a stabilizer with known eigenvalue +1 (signs go into the string).
  void add_stabilizer(const PauliString& g);
  // Value of p if it lies in the group.
  std::optional<Inference> infer(const PauliString& p) const;
  // Measures p into `slot`. Returns the detector when the outcome is
  // determined by earlier outcomes.
  std::optional<Detector> measure(const PauliString& p, int slot);

  struct Generator {
    PauliString op;  // signed
    std::vector<int> slots;
  };
  const std::vector<Generator>& generators() const { return gens_; }

 private:
  // Bitmask of generators whose product is +-p, if p is in the group.
  std::optional<std::uint64_t> combination(const PauliString& p) const;

  int n_;
  std::vector<Generator> gens_;
};

// Detectors for every determined measurement of an ideal run of `circuit`
// started from a state stabilized by `initial` (each with eigenvalue +1).
// Rotations are rejected.
std::vector<Detector> derive_detectors(const Circuit& circuit, const std::vector<PauliString>& initial);

// Stabilizers of the product state with each qubit in the +1 eigenstate of
// `letter` ('X' or 'Z').
std::vector<PauliString> product_stabilizers(int width, char letter);

}  // namespace tetron

#endif  // TETRON_ISG_HPP_
