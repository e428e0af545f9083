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

#include "tetron/qed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tetron/detect.hpp"
#include "tetron/isg.hpp"
#include "tetron/sweep.hpp"

namespace tetron {

void LadderLayout::validate() const {
  if (rows < 2) throw std::invalid_argument("LadderLayout: need at least 2 rows");
  std::set<int> used;
  for (int r0 : patch_rows) {
    if (r0 < 0 || r0 + 1 >= rows) throw std::invalid_argument("LadderLayout: patch outside the array");
    if (!used.insert(r0).second || !used.insert(r0 + 1).second) {
      throw std::invalid_argument("LadderLayout: overlapping patches");
    }
  }
}

const char* to_string(Level l) { return l == Level::kPhysical ? "physical" : "logical"; }
const char* to_string(RepObservable o) { return o == RepObservable::kXX ? "XX" : "ZI"; }

namespace {

void ladder_x_step(CircuitBuilder& b, const LadderLayout& lay, const std::vector<int>& rows) {
  b.step();
  for (int r : rows) b.m2("XX", lay.qubit(r, 0), lay.qubit(r, 1));
}

void ladder_z_step(CircuitBuilder& b, const LadderLayout& lay) {
  b.step();
  for (int r0 : lay.patch_rows) {
    for (int c = 0; c < 2; ++c) b.m2("ZZ", lay.qubit(r0, c), lay.qubit(r0 + 1, c));
  }
}

// YY across the two patches on the middle rows; rows 0 and 3 idle.
void ladder_y_step(CircuitBuilder& b, const LadderLayout& lay) {
  b.step();
  for (int c = 0; c < 2; ++c) b.m2("YY", lay.qubit(1, c), lay.qubit(2, c));
  for (int r : {0, 3}) {
    for (int c = 0; c < 2; ++c) b.idle(lay.qubit(r, c));
  }
}

// Appends one four-step Zbar Zbar round.
void logical_round(CircuitBuilder& b, const LadderLayout& lay) {
  std::vector<int> all_rows = {0, 1, 2, 3};
  ladder_x_step(b, lay, all_rows);
  ladder_z_step(b, lay);
  ladder_x_step(b, lay, all_rows);
  ladder_y_step(b, lay);
}

void physical_round(CircuitBuilder& b) {
  b.step();
  b.m2("ZZ", 0, 1);
}

char prep_letter(RepObservable obs) { return obs == RepObservable::kXX ? 'X' : 'Z'; }

}  // namespace

Circuit idle_ladder_circuit(int rounds) {
  if (rounds < 1) throw std::invalid_argument("idle_ladder_circuit: rounds >= 1");
  LadderLayout lay = LadderLayout::single_patch();
  CircuitBuilder b(lay.width());
  for (int k = 0; k < rounds; ++k) {
    ladder_x_step(b, lay, {0, 1});
    ladder_z_step(b, lay);
  }
  Circuit c = b.build();
  c.detectors = derive_detectors(c, {});
  return c;
}

PauliString logical_zz_operator() {
  LadderLayout lay = LadderLayout::two_patches();
  std::string s(lay.width(), 'I');
  for (int r : {1, 2}) {
    for (int c = 0; c < 2; ++c) s[lay.qubit(r, c)] = 'Z';
  }
  return PauliString::parse(s);
}

LogicalZZCircuit logical_zz_circuit(int rounds) {
  if (rounds < 1) throw std::invalid_argument("logical_zz_circuit: rounds >= 1");
  LadderLayout lay = LadderLayout::two_patches();
  CircuitBuilder b(lay.width());
  for (int k = 0; k < rounds; ++k) logical_round(b, lay);
  LogicalZZCircuit out;
  out.circuit = b.build();

  // Replay the ISG to get detectors and the Zbar Zbar outcome of each round.
  const Circuit& c = out.circuit;
  StabilizerTracker t(c.width);
  PauliString zz = logical_zz_operator();
  for (std::size_t s = 0; s < c.steps.size(); ++s) {
    for (const Operation& op : c.steps[s].ops) {
      if (op_slot(op) < 0) continue;
      if (auto d = t.measure(op_pauli(op, c.width), op_slot(op))) out.circuit.detectors.push_back(*d);
    }
    if (s % 4 == 3) {
      auto inf = t.infer(zz);
      if (!inf || inf->slots.empty()) throw std::logic_error("logical_zz_circuit: Zbar Zbar not inferable");
      out.zz_slots.push_back(inf->slots);
      out.zz_sign.push_back(inf->expected);
    }
  }
  return out;
}

PauliString repcode_observable(Level level, RepObservable obs) {
  if (level == Level::kPhysical) return PauliString::parse(obs == RepObservable::kXX ? "XX" : "ZI");
  LadderLayout lay = LadderLayout::two_patches();
  std::string s(lay.width(), 'I');
  if (obs == RepObservable::kXX) {
    for (int r = 0; r < 4; ++r) s[lay.qubit(r, 0)] = 'X';
  } else {
    s[lay.qubit(0, 0)] = s[lay.qubit(0, 1)] = 'Z';
  }
  return PauliString::parse(s);
}

RepcodeCircuit repcode_circuit(Level level, RepObservable obs, int rounds) {
  if (rounds < 1) throw std::invalid_argument("repcode_circuit: rounds >= 1");
  int width = level == Level::kPhysical ? 2 : 8;
  CircuitBuilder b(width);
  b.step();
  for (int q = 0; q < width; ++q) b.m1(prep_letter(obs), q);
  RepcodeCircuit out;
  LadderLayout lay = LadderLayout::two_patches();
  for (int k = 0; k < rounds; ++k) {
    if (level == Level::kPhysical) {
      physical_round(b);
    } else {
      logical_round(b, lay);
    }
    out.round_end.push_back(static_cast<int>(b.circuit().steps.size()) - 1);
  }
  out.circuit = b.build();
  out.circuit.detectors = derive_detectors(out.circuit, product_stabilizers(width, prep_letter(obs)));
  return out;
}

PauliState repcode_initial_state(Level level, RepObservable obs) {
  int width = level == Level::kPhysical ? 2 : 8;
  std::array<double, 4> b = obs == RepObservable::kXX ? std::array<double, 4>{1, 1, 0, 0}
                                                      : std::array<double, 4>{1, 0, 0, 1};
  return PauliState::product(std::vector<std::array<double, 4>>(width, b));
}

PauliEnsemble prepare_repcode_state(RepObservable obs, Level level, const NoiseParams& noise) {
  noise.validate();
  RepcodeCircuit rc = repcode_circuit(level, obs, 1);
  auto e = run_circuit(rc.circuit, init_ensemble(rc.circuit.width, repcode_initial_state(level, obs), false), noise);
  if (!(acceptance_rate(e) > 0.0)) throw std::runtime_error("prepare_repcode_state: zero acceptance");
  return e;
}

void DecayExperimentSpec::validate() const {
  noise.validate();
  std::set<int> distinct(rounds_grid.begin(), rounds_grid.end());
  if (distinct.size() < 3) throw std::invalid_argument("decay experiment: rounds_grid needs >= 3 distinct values");
  if (*distinct.begin() < 1) throw std::invalid_argument("decay experiment: rounds must be >= 1");
  if (shots < 0) throw std::invalid_argument("decay experiment: shots must be >= 0");
}

DecayFit fit_decay(const std::vector<int>& rounds, const std::vector<double>& values) {
  DecayFit f;
  f.rounds = rounds;
  f.expectation = values;
  std::size_t n = rounds.size();
  if (n != values.size() || n < 2) throw std::invalid_argument("fit_decay: need matching series of length >= 2");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0)) {
      f.flagged = true;
      f.flag = "non-positive expectation at N=" + std::to_string(rounds[i]);
    }
    y[i] = std::log(std::abs(values[i]));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rounds[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (rounds[i] - mx) * (rounds[i] - mx);
    sxy += (rounds[i] - mx) * (y[i] - my);
  }
  double slope = sxy / sxx;
  f.rate = -slope;
  f.intercept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (f.intercept + slope * rounds[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  if (!std::isfinite(f.rate)) {
    f.flagged = true;
    if (f.flag.empty()) f.flag = "fit undefined";
  } else if (f.rate < -kFitTolerance && !f.flagged) {
    f.flagged = true;
    f.flag = "negative fitted rate";
  }
  return f;
}

DecayFit decay_experiment(const DecayExperimentSpec& spec) {
  spec.validate();
  std::vector<int> grid = spec.rounds_grid;
  PauliString obs = repcode_observable(spec.level, spec.observable);
  int nmax = *std::max_element(grid.begin(), grid.end());
  std::vector<double> value(grid.size()), accept(grid.size());

  if (spec.shots == 0) {
    RepcodeCircuit rc = repcode_circuit(spec.level, spec.observable, nmax);
    std::map<int, std::vector<std::size_t>> want;  // step -> grid positions
    for (std::size_t i = 0; i < grid.size(); ++i) want[rc.round_end[grid[i] - 1]].push_back(i);
    bool dead = false;
    ParityStepCallback<PauliState> cb = [&](int step, const ParityEnsemble<PauliState>& e) {
      auto it = want.find(step);
      if (it == want.end()) return;
      PauliState tot = e.total();
      double a = tot.is_zero() ? 0.0 : tot.trace();
      double v = a > 0 ? tot.expectation(obs) / a : 0.0;
      if (!(a > 0)) dead = true;
      for (std::size_t i : it->second) {
        accept[i] = a;
        value[i] = v;
      }
    };
    if (spec.slot_keyed) {
      RunOptions opt;
      opt.schedule = spec.schedule;
      StepCallback<PauliState> scb = [&](int step, const PauliEnsemble& e) {
        ParityEnsemble<PauliState> view;
        view.width = e.width;
        if (!e.empty()) view.branches.emplace(0, total_state(e));
        cb(step, view);
      };
      run_circuit(rc.circuit, init_ensemble(rc.circuit.width, repcode_initial_state(spec.level, spec.observable), false),
                  spec.noise, opt, scb);
    } else {
      run_postselected(rc.circuit, repcode_initial_state(spec.level, spec.observable), spec.noise, cb);
    }
    DecayFit f = fit_decay(grid, value);
    f.acceptance = accept;
    if (dead) {
      f.flagged = true;
      f.flag = "zero acceptance";
    }
    return f;
  }

  // Sampled: independent trajectories per round count, exact state per shot.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    RepcodeCircuit rc = repcode_circuit(spec.level, spec.observable, grid[i]);
    std::mt19937_64 rng(item_seed(spec.seed, static_cast<std::uint64_t>(grid[i])));
    PauliState init = repcode_initial_state(spec.level, spec.observable);
    double sum = 0;
    std::int64_t ok = 0;
    for (std::int64_t s = 0; s < spec.shots; ++s) {
      auto run = sample_circuit(rc.circuit, init, spec.noise, rng);
      if (run.detected) continue;
      ++ok;
      sum += run.final_state.expectation(obs);
    }
    accept[i] = double(ok) / double(spec.shots);
    value[i] = ok ? sum / double(ok) : 0.0;
  }
  DecayFit f = fit_decay(grid, value);
  f.acceptance = accept;
  return f;
}

LambdaMetrics lambda_metrics(double g_xx, double g_zi, double g_lxx, double g_lzi) {
  LambdaMetrics m;
  auto ratio = [&](double num, double den, const char* name) {
    if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) {
      m.flagged = true;
      if (!m.flag.empty()) m.flag += "; ";
      m.flag += std::string(name) + ": logical rate not positive";
      return den == 0.0 && num > 0 ? std::numeric_limits<double>::infinity()
                                   : std::numeric_limits<double>::quiet_NaN();
    }
    return num / den;
  };
  m.lambda = ratio(g_xx + g_zi, g_lxx + g_lzi, "lambda");
  m.lambda_x = ratio(g_xx, g_lxx, "lambda_x");
  m.lambda_z = ratio(g_zi, g_lzi, "lambda_z");
  return m;
}

LambdaMetrics lambda_metrics(const DecayFit& phys_xx, const DecayFit& phys_zi, const DecayFit& log_xx,
                             const DecayFit& log_zi) {
  LambdaMetrics m = lambda_metrics(phys_xx.rate, phys_zi.rate, log_xx.rate, log_zi.rate);
  for (const DecayFit* f : {&phys_xx, &phys_zi, &log_xx, &log_zi}) {
    if (f->flagged) {
      m.flagged = true;
      if (!m.flag.empty()) m.flag += "; ";
      m.flag += f->flag;
    }
  }
  return m;
}

std::vector<double> default_scan_grid() { return log_grid(1e-4, 1e-1, 25); }

ScanResult improvement_scan(const std::vector<double>& p1_grid, const std::vector<double>& p2_grid, double p_a,
                            const ScanOptions& opt) {
  if (p1_grid.empty() || p2_grid.empty()) throw std::invalid_argument("improvement_scan: empty grid");
  ScanResult r;
  r.p1_grid = p1_grid;
  r.p2_grid = p2_grid;
  r.p_a = p_a;
  std::size_t n = p1_grid.size() * p2_grid.size();
  r.points = parallel_map<ScanPoint>(n, opt.workers, [&](std::size_t k) {
    ScanPoint pt;
    pt.p1 = p1_grid[k / p2_grid.size()];
    pt.p2 = p2_grid[k % p2_grid.size()];
    pt.pa = p_a;
    DecayExperimentSpec spec;
    spec.rounds_grid = opt.rounds_grid;
    spec.noise = NoiseParams{p_a, pt.p1, pt.p2, opt.theta};
    DecayFit fits[4];
    int i = 0;
    for (Level lv : {Level::kPhysical, Level::kLogical}) {
      for (RepObservable o : {RepObservable::kXX, RepObservable::kZI}) {
        spec.level = lv;
        spec.observable = o;
        fits[i] = decay_experiment(spec);
        pt.gamma[i] = fits[i].rate;
        ++i;
      }
    }
    pt.metrics = lambda_metrics(fits[0], fits[1], fits[2], fits[3]);
    pt.accept_phys = 0.5 * (fits[0].acceptance.back() + fits[1].acceptance.back());
    pt.accept_log = 0.5 * (fits[2].acceptance.back() + fits[3].acceptance.back());
    return pt;
  });
  r.contour = lambda_contour(r);
  for (std::size_t i = 0; i < r.contour.size(); ++i) {
    const ContourPoint& c = r.contour[i];
    if (c.clipped) continue;
    if (!r.optimum || c.p2 > r.optimum->p2) r.optimum = c;
  }
  if (r.optimum) {
    r.optimum_interior = r.optimum->p1 != p1_grid.front() && r.optimum->p1 != p1_grid.back();
  }
  return r;
}

std::vector<ContourPoint> lambda_contour(const ScanResult& r) {
  std::vector<ContourPoint> out;
  std::size_t n2 = r.p2_grid.size();
  for (std::size_t i = 0; i < r.p1_grid.size(); ++i) {
    std::optional<std::size_t> top;
    for (std::size_t j = 0; j < n2; ++j) {
      if (r.at(i, j).metrics.lambda > 1.0) top = j;
    }
    if (!top) continue;
    ContourPoint c;
    c.p1 = r.p1_grid[i];
    std::size_t j = *top;
    if (j + 1 == n2) {
      c.p2 = r.p2_grid[j];
      c.clipped = true;
    } else {
      double a = r.at(i, j).metrics.lambda - 1.0, b = r.at(i, j + 1).metrics.lambda - 1.0;
      double t = std::isfinite(b) ? a / (a - b) : 0.0;
      double l0 = std::log(r.p2_grid[j]), l1 = std::log(r.p2_grid[j + 1]);
      c.p2 = std::exp(l0 + t * (l1 - l0));
    }
    out.push_back(c);
  }
  return out;
}

namespace {
std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

std::string ScanResult::to_csv() const {
  std::ostringstream os;
  os << "p1,p2,pa,lambda,lambda_x,lambda_z,accept_phys,accept_log\n";
  for (const ScanPoint& p : points) {
    os << g12(p.p1) << ',' << g12(p.p2) << ',' << g12(p.pa) << ',' << g12(p.metrics.lambda) << ','
       << g12(p.metrics.lambda_x) << ',' << g12(p.metrics.lambda_z) << ',' << g12(p.accept_phys) << ','
       << g12(p.accept_log) << '\n';
  }
  return os.str();
}

std::string ScanResult::contour_csv() const {
  std::ostringstream os;
  os << "p1,p2\n";
  for (const ContourPoint& c : contour) os << g12(c.p1) << ',' << g12(c.p2) << '\n';
  return os.str();
}

}  // namespace tetron
