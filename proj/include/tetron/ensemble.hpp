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

#ifndef TETRON_ENSEMBLE_HPP_
#define TETRON_ENSEMBLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetron/channels.hpp"
#include "tetron/circuit.hpp"
#include "tetron/state.hpp"

namespace tetron {

// Outcome values (+1/-1) aligned with TrajectoryEnsemble::slots.
using OutcomeRecord = std::vector<std::int8_t>;

// Unnormalized post-measurement states keyed by outcome record. Branch
// iteration follows the record order, so sums are reproducible bit for bit.
template <class State>
struct TrajectoryEnsemble {
  int width = 0;
  std::vector<int> slots;  // live slots; record entry i holds slots[i]
  std::set<int> filled;    // every slot written so far, live or marginalized
  std::map<OutcomeRecord, State> branches;

  std::size_t size() const { return branches.size(); }
  bool empty() const { return branches.empty(); }
  int position(int slot) const {
    auto it = std::find(slots.begin(), slots.end(), slot);
    return it == slots.end() ? -1 : static_cast<int>(it - slots.begin());
  }
  int value(const OutcomeRecord& rec, int slot) const {
    int p = position(slot);
    if (p < 0) throw std::invalid_argument("ensemble: slot s" + std::to_string(slot) + " is not live");
    return rec[p];
  }
};

using DenseEnsemble = TrajectoryEnsemble<DenseState>;
using PauliEnsemble = TrajectoryEnsemble<PauliState>;

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

template <class State>
TrajectoryEnsemble<State> init_ensemble(int width, State initial, bool check_psd = true) {
  if (initial.num_qubits() != width) throw std::invalid_argument("init_ensemble: state width mismatch");
  if (std::abs(initial.trace() - 1.0) > kTraceTol) {
    throw std::invalid_argument("init_ensemble: initial state must have unit trace");
  }
  if (check_psd) {
    DenseOperator d = initial.to_dense();
    if (!d.is_hermitian(kHermitianTol)) throw std::invalid_argument("init_ensemble: initial state not Hermitian");
    if (d.min_eigenvalue() < -kPsdTol) throw std::invalid_argument("init_ensemble: initial state not PSD");
  }
  TrajectoryEnsemble<State> e;
  e.width = width;
  e.branches.emplace(OutcomeRecord{}, std::move(initial));
  return e;
}

template <class State>
TrajectoryEnsemble<State> init_ensemble(int width, const DenseOperator& initial) {
  return init_ensemble(width, State::from_dense(initial));
}

// Noise channels for single circuit operations on a width-n register.
MeasurementSplit measurement_channels(const Operation& op, int width, const NoiseParams& noise);
ChannelProgram idle_program(int qubit, int width, const NoiseParams& noise);
ChannelProgram rotation_program(const RotateOp& op, int width);

namespace detail {

template <class State>
void apply_idle_and_rotations(TrajectoryEnsemble<State>& e, const CircuitStep& step, const NoiseParams& noise) {
  std::vector<bool> busy(e.width, false);
  ChannelProgram prog(e.width);
  for (const Operation& op : step.ops) {
    if (std::holds_alternative<IdleOp>(op)) continue;
    for (int q : op_qubits(op)) busy[q] = true;
    if (auto* r = std::get_if<RotateOp>(&op)) prog.then(rotation_program(*r, e.width));
  }
  for (int q = 0; q < e.width; ++q) {
    if (!busy[q]) prog.then(idle_program(q, e.width, noise));
  }
  if (prog.empty()) return;
  for (auto& [rec, st] : e.branches) st.apply(prog);
}

template <class State>
void apply_measurement(TrajectoryEnsemble<State>& e, const Operation& op, const NoiseParams& noise) {
  int slot = op_slot(op);
  if (e.filled.count(slot)) throw std::invalid_argument("apply_step: slot s" + std::to_string(slot) + " already filled");
  MeasurementSplit m = measurement_channels(op, e.width, noise);
  std::map<OutcomeRecord, State> next;
  for (auto& [rec, st] : e.branches) {
    st.apply(m.pre);
    State minus = st;
    minus.apply(Assign{m.pauli, -1, m.p_a});
    minus.apply(m.post);
    st.apply(Assign{m.pauli, +1, m.p_a});
    st.apply(m.post);
    OutcomeRecord rm = rec, rp = rec;
    rm.push_back(-1);
    rp.push_back(+1);
    next.emplace_hint(next.end(), std::move(rm), std::move(minus));
    next.emplace_hint(next.end(), std::move(rp), std::move(st));
  }
  e.branches = std::move(next);
  e.slots.push_back(slot);
  e.filled.insert(slot);
}

}  // namespace detail

// Called after each measurement inside a step with the slot just filled.
template <class State>
using MeasurementHook = std::function<void(TrajectoryEnsemble<State>&, int slot)>;

// Idle channels on untouched qubits and rotations first, then the step's
// measurements one at a time (they act on disjoint qubits and commute).
template <class State>
TrajectoryEnsemble<State> apply_step(TrajectoryEnsemble<State> e, const CircuitStep& step, const NoiseParams& noise,
                                     const MeasurementHook<State>& hook = {}) {
  noise.validate();
  Circuit probe;
  probe.width = e.width;
  probe.steps = {step};
  probe.validate();
  for (const Operation& op : step.ops) {
    int s = op_slot(op);
    if (s >= 0 && e.filled.count(s)) throw std::invalid_argument("apply_step: slot s" + std::to_string(s) + " already filled");
  }
  detail::apply_idle_and_rotations(e, step, noise);
  for (const Operation& op : step.ops) {
    if (op_slot(op) < 0) continue;
    detail::apply_measurement(e, op, noise);
    if (hook) hook(e, op_slot(op));
  }
  return e;
}

namespace detail {

template <class State>
void check_detector_live(const TrajectoryEnsemble<State>& e, const Detector& d) {
  if (d.compare_previous) throw std::invalid_argument("prune_detected: resolve 'prev' detectors first");
  for (int s : d.slots) {
    if (e.position(s) >= 0) continue;
    if (e.filled.count(s)) throw std::invalid_argument("prune_detected: slot s" + std::to_string(s) + " was marginalized");
    throw std::invalid_argument("prune_detected: slot s" + std::to_string(s) + " not filled yet");
  }
}

}  // namespace detail

// Detectors must be in absolute form (see Circuit::resolved_detectors).
template <class State>
TrajectoryEnsemble<State> prune_detected(TrajectoryEnsemble<State> e, const std::vector<Detector>& detectors) {
  std::vector<std::vector<int>> pos;
  for (const Detector& d : detectors) {
    detail::check_detector_live(e, d);
    std::vector<int> p;
    for (int s : d.slots) p.push_back(e.position(s));
    pos.push_back(std::move(p));
  }
  for (auto it = e.branches.begin(); it != e.branches.end();) {
    bool ok = true;
    for (std::size_t k = 0; k < detectors.size() && ok; ++k) {
      int par = 1;
      for (int p : pos[k]) par *= it->first[p];
      ok = par == detectors[k].expected;
    }
    it = ok ? std::next(it) : e.branches.erase(it);
  }
  return e;
}

template <class State>
TrajectoryEnsemble<State> marginalize_outcomes(TrajectoryEnsemble<State> e, const std::vector<int>& slots,
                                               const std::vector<Detector>& pending = {}) {
  std::set<int> drop(slots.begin(), slots.end());
  for (int s : drop) {
    if (e.position(s) < 0) throw std::invalid_argument("marginalize_outcomes: slot s" + std::to_string(s) + " is not live");
  }
  for (const Detector& d : pending) {
    for (int s : d.slots) {
      if (drop.count(s)) {
        throw std::invalid_argument("marginalize_outcomes: slot s" + std::to_string(s) + " still needed by a detector");
      }
    }
  }
  if (drop.empty()) return e;
  std::vector<int> keep_pos;
  std::vector<int> kept;
  for (std::size_t i = 0; i < e.slots.size(); ++i) {
    if (!drop.count(e.slots[i])) {
      keep_pos.push_back(static_cast<int>(i));
      kept.push_back(e.slots[i]);
    }
  }
  std::map<OutcomeRecord, State> next;
  for (auto& [rec, st] : e.branches) {
    OutcomeRecord key;
    key.reserve(keep_pos.size());
    for (int p : keep_pos) key.push_back(rec[p]);
    auto it = next.find(key);
    if (it == next.end()) {
      next.emplace(std::move(key), std::move(st));
    } else {
      it->second.add(st);
    }
  }
  e.branches = std::move(next);
  e.slots = std::move(kept);
  return e;
}

template <class State>
State total_state(const TrajectoryEnsemble<State>& e) {
  State acc;
  bool first = true;
  for (const auto& [rec, st] : e.branches) {
    if (first) {
      acc = st;
      first = false;
    } else {
      acc.add(st);
    }
  }
  if (first) {
    acc = State::from_dense(DenseOperator::zero(e.width));
  }
  return acc;
}

template <class State>
double acceptance_rate(const TrajectoryEnsemble<State>& e) {
  double t = 0.0;
  for (const auto& [rec, st] : e.branches) t += st.trace();
  return t;
}

template <class State>
double expectation(const TrajectoryEnsemble<State>& e, const PauliString& observable) {
  if (observable.num_qubits() != e.width) throw std::invalid_argument("expectation: observable width mismatch");
  double num = 0.0, den = 0.0;
  for (const auto& [rec, st] : e.branches) {
    num += st.expectation(observable);
    den += st.trace();
  }
  if (!(den > 0.0)) throw std::invalid_argument("expectation: zero acceptance");
  return num / den;
}

// ---------------------------------------------------------------------------
// Circuit driver with eager pruning and marginalization.

enum class MarginalizeSchedule {
  kEager,      // right after the last detector that needs a slot
  kEndOfStep,  // at the end of the step in which a slot became free
  kNever,
};

struct RunOptions {
  std::set<int> keep_slots;  // never marginalized
  bool prune = true;
  MarginalizeSchedule schedule = MarginalizeSchedule::kEager;
  bool drop_zero_branches = true;
};

struct RunStats {
  std::size_t max_branches = 0;
  std::size_t max_live_slots = 0;
};

template <class State>
using StepCallback = std::function<void(int step_index, const TrajectoryEnsemble<State>&)>;

template <class State>
TrajectoryEnsemble<State> run_circuit(const Circuit& circuit, TrajectoryEnsemble<State> e, const NoiseParams& noise,
                                      const RunOptions& opt = {}, const StepCallback<State>& on_step = {},
                                      RunStats* stats = nullptr) {
  circuit.validate();
  if (e.width != circuit.width) throw std::invalid_argument("run_circuit: ensemble width mismatch");
  std::vector<int> order = circuit.slot_order();
  std::map<int, int> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  std::vector<Detector> dets = circuit.resolved_detectors();

  // Detectors fire at the rank of their latest slot; slots are free after the
  // latest firing that reads them.
  std::map<int, std::vector<Detector>> fire_at;
  std::map<int, int> last_use;
  for (int s : order) last_use[s] = rank[s];
  for (const Detector& d : dets) {
    int r = -1;
    for (int s : d.slots) r = std::max(r, rank.at(s));
    if (opt.prune) fire_at[r].push_back(d);
    for (int s : d.slots) last_use[s] = std::max(last_use[s], opt.prune ? r : static_cast<int>(order.size()));
  }
  std::map<int, std::vector<int>> free_at;
  for (auto& [s, r] : last_use) {
    if (!opt.keep_slots.count(s) && r < static_cast<int>(order.size())) free_at[r].push_back(s);
  }

  auto drop_zero = [&](TrajectoryEnsemble<State>& en) {
    if (!opt.drop_zero_branches) return;
    for (auto it = en.branches.begin(); it != en.branches.end();) {
      it = it->second.is_zero() ? en.branches.erase(it) : std::next(it);
    }
  };
  auto note = [&](const TrajectoryEnsemble<State>& en) {
    if (!stats) return;
    stats->max_branches = std::max(stats->max_branches, en.size());
    stats->max_live_slots = std::max(stats->max_live_slots, en.slots.size());
  };

  std::vector<int> deferred;
  MeasurementHook<State> hook = [&](TrajectoryEnsemble<State>& en, int slot) {
    note(en);
    int r = rank.at(slot);
    auto f = fire_at.find(r);
    if (f != fire_at.end()) en = prune_detected(std::move(en), f->second);
    drop_zero(en);
    auto fr = free_at.find(r);
    if (fr != free_at.end() && opt.schedule != MarginalizeSchedule::kNever) {
      if (opt.schedule == MarginalizeSchedule::kEager) {
        en = marginalize_outcomes(std::move(en), fr->second);
      } else {
        deferred.insert(deferred.end(), fr->second.begin(), fr->second.end());
      }
    }
  };

  for (std::size_t t = 0; t < circuit.steps.size(); ++t) {
    e = apply_step(std::move(e), circuit.steps[t], noise, hook);
    if (!deferred.empty()) {
      e = marginalize_outcomes(std::move(e), deferred);
      deferred.clear();
    }
    note(e);
    if (on_step) on_step(static_cast<int>(t), e);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Monte-Carlo mode: one branch per shot, chosen with probability equal to the
// trace ratio.

template <class State>
struct SampledRun {
  std::map<int, int> outcomes;
  State final_state;  // normalized
  bool detected = false;
};

template <class State>
SampledRun<State> sample_circuit(const Circuit& circuit, State initial, const NoiseParams& noise, std::mt19937_64& rng) {
  circuit.validate();
  noise.validate();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SampledRun<State> out;
  State st = std::move(initial);
  for (const CircuitStep& step : circuit.steps) {
    TrajectoryEnsemble<State> one;
    one.width = circuit.width;
    one.branches.emplace(OutcomeRecord{}, std::move(st));
    detail::apply_idle_and_rotations(one, step, noise);
    st = std::move(one.branches.begin()->second);
    for (const Operation& op : step.ops) {
      if (op_slot(op) < 0) continue;
      MeasurementSplit m = measurement_channels(op, circuit.width, noise);
      st.apply(m.pre);
      State minus = st;
      minus.apply(Assign{m.pauli, -1, m.p_a});
      st.apply(Assign{m.pauli, +1, m.p_a});
      double tp = st.trace(), tm = minus.trace();
      int v = u(rng) * (tp + tm) < tp ? +1 : -1;
      if (v < 0) st = std::move(minus);
      st.apply(m.post);
      double t = st.trace();
      if (!(t > 0.0)) throw std::runtime_error("sample_circuit: sampled a zero-probability outcome");
      st.scale(1.0 / t);
      out.outcomes[op_slot(op)] = v;
    }
  }
  for (const Detector& d : circuit.resolved_detectors()) {
    int par = 1;
    for (int s : d.slots) par *= out.outcomes.at(s);
    if (par != d.expected) out.detected = true;
  }
  out.final_state = std::move(st);
  return out;
}

}  // namespace tetron

#endif  // TETRON_ENSEMBLE_HPP_
