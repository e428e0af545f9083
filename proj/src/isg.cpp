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

#include "tetron/isg.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace tetron {

namespace {

std::vector<int> symdiff(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::uint64_t vec(const PauliString& p) { return std::uint64_t(p.x()) | (std::uint64_t(p.z()) << 32); }

}  // namespace

std::optional<std::uint64_t> StabilizerTracker::combination(const PauliString& p) const {
  // Row-reduce the generators, remembering which originals make up each row.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;  // (vector, combination)
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    std::uint64_t v = vec(gens_[i].op), c = std::uint64_t(1) << i;
    for (auto& [rv, rc] : rows) {
      std::uint64_t pivot = rv & -rv;
      if (v & pivot) {
        v ^= rv;
        c ^= rc;
      }
    }
    if (v == 0) continue;
    std::uint64_t pivot = v & -v;
    for (auto& [rv, rc] : rows) {
      if (rv & pivot) {
        rv ^= v;
        rc ^= c;
      }
    }
    rows.emplace_back(v, c);
  }
  std::uint64_t t = vec(p), combo = 0;
  for (auto& [rv, rc] : rows) {
    std::uint64_t pivot = rv & -rv;
    if (t & pivot) {
      t ^= rv;
      combo ^= rc;
    }
  }
  if (t != 0) return std::nullopt;
  return combo;
}

std::optional<Inference> StabilizerTracker::infer(const PauliString& p) const {
  if (p.num_qubits() != n_) throw std::invalid_argument("StabilizerTracker: width mismatch");
  auto combo = combination(p);
  if (!combo) return std::nullopt;
  PauliString acc(n_);
  int phase = 0;
  Inference inf;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!((*combo >> i) & 1u)) continue;
    PauliProduct pr = multiply(acc, gens_[i].op);
    phase += pr.phase.k;
    acc = pr.pauli;
    inf.slots = symdiff(inf.slots, gens_[i].slots);
  }
  Phase ph{phase & 3};
  // product of generators = ph * acc (acc unsigned), and p = sign * acc
  inf.expected = ph.real_sign() * p.sign();
  return inf;
}

void StabilizerTracker::add_stabilizer(const PauliString& g) {
  if (g.num_qubits() != n_) throw std::invalid_argument("StabilizerTracker: width mismatch");
  if (g.is_identity_letters()) throw std::invalid_argument("StabilizerTracker: identity stabilizer");
  for (const Generator& h : gens_) {
    if (!commutes(g, h.op)) throw std::invalid_argument("StabilizerTracker: stabilizers must commute");
  }
  if (auto inf = infer(g)) {
    if (!inf->slots.empty() || inf->expected != 1) {
      throw std::invalid_argument("StabilizerTracker: inconsistent stabilizer " + g.str());
    }
    return;
  }
  gens_.push_back({g, {}});
}

std::optional<Detector> StabilizerTracker::measure(const PauliString& p, int slot) {
  if (p.num_qubits() != n_) throw std::invalid_argument("StabilizerTracker: width mismatch");
  PauliString pu = p.unsigned_part();
  std::vector<std::size_t> anti;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!commutes(pu, gens_[i].op)) anti.push_back(i);
  }
  if (anti.empty()) {
    if (auto inf = infer(pu)) {
      Detector d;
      d.slots = symdiff(inf->slots, {slot});
      d.expected = inf->expected;
      // Swap the generator with the oldest history in the combination for
      // the new outcome; the group is unchanged and later inferences cite
      // the latest measurements.
      std::uint64_t combo = *combination(pu);
      std::size_t oldest = gens_.size();
      int oldest_slot = 0;
      for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (!((combo >> i) & 1u) || gens_[i].slots.empty()) continue;
        int newest = gens_[i].slots.back();
        if (oldest == gens_.size() || newest < oldest_slot) {
          oldest = i;
          oldest_slot = newest;
        }
      }
      if (oldest < gens_.size()) gens_[oldest] = {pu, {slot}};
      return d;
    }
    gens_.push_back({pu, {slot}});
    return std::nullopt;
  }
  const Generator first = gens_[anti[0]];
  for (std::size_t k = 1; k < anti.size(); ++k) {
    Generator& g = gens_[anti[k]];
    PauliProduct pr = multiply(g.op, first.op);
    g.op = pr.pauli.with_sign(pr.phase.real_sign());
    g.slots = symdiff(g.slots, first.slots);
  }
  gens_.erase(gens_.begin() + static_cast<std::ptrdiff_t>(anti[0]));
  gens_.push_back({pu, {slot}});
  return std::nullopt;
}

std::vector<Detector> derive_detectors(const Circuit& circuit, const std::vector<PauliString>& initial) {
  StabilizerTracker t(circuit.width);
  for (const PauliString& g : initial) t.add_stabilizer(g);
  std::vector<Detector> out;
  for (const CircuitStep& step : circuit.steps) {
    for (const Operation& op : step.ops) {
      if (std::holds_alternative<RotateOp>(op)) throw std::invalid_argument("derive_detectors: rotations unsupported");
      if (op_slot(op) < 0) continue;
      if (auto d = t.measure(op_pauli(op, circuit.width), op_slot(op))) out.push_back(*d);
    }
  }
  return out;
}

std::vector<PauliString> product_stabilizers(int width, char letter) {
  std::vector<PauliString> out;
  for (int q = 0; q < width; ++q) out.push_back(PauliString::single(width, q, letter));
  return out;
}

}  // namespace tetron
