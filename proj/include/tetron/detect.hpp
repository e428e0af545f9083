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

// Post-selected runs keyed by detector parities.
//
// Pruning only ever looks at detector parities, so two branches whose open
// detectors have the same partial parities evolve identically from then on
// and can be summed. This is the outcome marginalization of run_circuit taken
// one step further: instead of keeping every live slot, keep one bit per open
// detector. The total post-selected state is unchanged.

#ifndef TETRON_DETECT_HPP_
#define TETRON_DETECT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "tetron/ensemble.hpp"

namespace tetron {

template <class State>
struct ParityEnsemble {
  int width = 0;
  std::map<std::uint64_t, State> branches;  // open-detector parity bits -> state

  State total() const {
    State t;
    for (auto& [k, s] : branches) t.add(s);
    return t;
  }
  double acceptance() const {
    double a = 0;
    for (auto& [k, s] : branches) a += s.trace();
    return a;
  }
  std::size_t size() const { return branches.size(); }
};

// Bit assignment for detectors: detector i owns bit[i] from its first slot
// to its last. Throws if more than 64 detectors are open at once.
struct DetectorSchedule {
  struct Entry {
    int detector;
    bool first;
    bool last;
  };
  std::vector<int> bit;                    // per detector
  std::vector<int> expected;               // per detector
  std::map<int, std::vector<Entry>> uses;  // slot -> detectors reading it
  int max_open = 0;

  explicit DetectorSchedule(const Circuit& c);
};

template <class State>
using ParityStepCallback = std::function<void(int step_index, const ParityEnsemble<State>&)>;

template <class State>
ParityEnsemble<State> run_postselected(const Circuit& circuit, State initial, const NoiseParams& noise,
                                       const ParityStepCallback<State>& on_step = {},
                                       std::size_t* max_branches = nullptr) {
  circuit.validate();
  noise.validate();
  DetectorSchedule sched(circuit);
  ParityEnsemble<State> e;
  e.width = circuit.width;
  e.branches.emplace(0, std::move(initial));

  // Reuse the slot-keyed step machinery on a throwaway single-branch ensemble.
  auto for_each_branch = [&](auto&& fn) {
    for (auto& [k, s] : e.branches) fn(s);
  };

  for (std::size_t t = 0; t < circuit.steps.size(); ++t) {
    const CircuitStep& step = circuit.steps[t];
    for_each_branch([&](State& s) {
      TrajectoryEnsemble<State> one;
      one.width = circuit.width;
      one.branches.emplace(OutcomeRecord{}, std::move(s));
      detail::apply_idle_and_rotations(one, step, noise);
      s = std::move(one.branches.begin()->second);
    });
    for (const Operation& op : step.ops) {
      int slot = op_slot(op);
      if (slot < 0) continue;
      MeasurementSplit m = measurement_channels(op, circuit.width, noise);
      auto u = sched.uses.find(slot);
      std::map<std::uint64_t, State> next;
      auto put = [&](std::uint64_t key, State&& s) {
        if (s.is_zero()) return;
        auto it = next.find(key);
        if (it == next.end()) {
          next.emplace(key, std::move(s));
        } else {
          it->second.add(s);
        }
      };
      for (auto& [key, s] : e.branches) {
        s.apply(m.pre);
        for (int v : {-1, +1}) {
          std::uint64_t k = key;
          bool keep = true;
          if (u != sched.uses.end()) {
            for (const auto& use : u->second) {
              std::uint64_t b = std::uint64_t(1) << sched.bit[use.detector];
              if (use.first) k &= ~b;
              if (v < 0) k ^= b;
              if (use.last) {
                bool odd = (k & b) != 0;
                if (odd != (sched.expected[use.detector] < 0)) keep = false;
                k &= ~b;
              }
            }
          }
          if (!keep) continue;
          State br = s;
          br.apply(Assign{m.pauli, v, m.p_a});
          br.apply(m.post);
          put(k, std::move(br));
        }
      }
      e.branches = std::move(next);
      if (max_branches) *max_branches = std::max(*max_branches, e.branches.size());
    }
    if (on_step) on_step(static_cast<int>(t), e);
  }
  return e;
}

}  // namespace tetron

#endif  // TETRON_DETECT_HPP_
