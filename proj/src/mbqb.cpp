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

#include "tetron/mbqb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <tuple>

#include "tetron/qed.hpp"
#include "tetron/sweep.hpp"

namespace tetron {

namespace {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

constexpr double kZeroProb = 1e-15;
constexpr double kWilsonZ = 1.959963984540054;

Mat4 m4(const Superoperator& s) {
  if (s.num_qubits() != 1) throw std::invalid_argument("mbqb: single-qubit maps only");
  return s.transfer_matrix();
}

Superoperator sop(const Mat4& m) { return Superoperator(1, RMatrix(m)); }

Vec4 maximally_mixed() { return Vec4(1, 0, 0, 0); }

int basis_bit(char b) {
  if (b == 'X') return 0;
  if (b == 'Z') return 1;
  throw std::invalid_argument(std::string("mbqb: basis must be X or Z, got '") + b + "'");
}

Instrument instrument_of(const ChannelProgram& plus, const ChannelProgram& minus) {
  return {ptm_of(plus), ptm_of(minus)};
}

}  // namespace

Superoperator Instrument::total() const { return sop(m4(plus) + m4(minus)); }

const Instrument& InstrumentSet::basis(char b) const { return basis_bit(b) == 0 ? x : z; }

Superoperator ptm_of(const ChannelProgram& program) {
  if (program.num_qubits() != 1) throw std::invalid_argument("ptm_of: expects a single-qubit program");
  return channel_to_superop(program.as_map(), 1);
}

InstrumentSet instruments_from_noise(const NoiseParams& noise) {
  noise.validate();
  InstrumentSet set;
  for (char b : {'X', 'Z'}) {
    PauliString p = PauliString::parse(std::string(1, b));
    Instrument in = instrument_of(meas1_channel(p, +1, noise.p_a, noise.p1), meas1_channel(p, -1, noise.p_a, noise.p1));
    (b == 'X' ? set.x : set.z) = in;
  }
  return set;
}

InstrumentSet readout_flip_instruments(double p_f) {
  if (!(p_f >= 0 && p_f <= 0.5)) throw std::invalid_argument("readout_flip_instruments: p_f in [0, 1/2]");
  InstrumentSet set;
  for (char b : {'X', 'Z'}) {
    PauliString p = PauliString::parse(std::string(1, b));
    Instrument in = instrument_of(assignment_channel(p, +1, p_f), assignment_channel(p, -1, p_f));
    (b == 'X' ? set.x : set.z) = in;
  }
  return set;
}

InstrumentSet randomizing_instruments() {
  Superoperator half = sop(0.5 * Mat4::Identity());
  Instrument in{half, half};
  return {in, in};
}

InstrumentSet identical_instruments() {
  PauliString z = PauliString::parse("Z");
  Instrument in = instrument_of(assignment_channel(z, +1, 0.0), assignment_channel(z, -1, 0.0));
  return {in, in};
}

Superoperator reset_superop(const InstrumentSet& inst) {
  Mat4 xs = m4(inst.x.total()), zs = m4(inst.z.total());
  return sop(0.5 * (xs * zs + zs * xs));
}

Superoperator reset_superop(const NoiseParams& noise) { return reset_superop(instruments_from_noise(noise)); }

double reset_distance(const Superoperator& reset) {
  Mat4 r = m4(reset);
  double worst = 0;
  for (int axis = 1; axis <= 3; ++axis) {
    for (double sgn : {1.0, -1.0}) {
      Vec4 v = maximally_mixed();
      v(axis) = sgn;
      Vec4 w = r * v;
      // rho - I/2 has eigenvalues ((w0 - 1) +- |w_vec|) / 2.
      double a = w(0) - 1.0, b = w.tail<3>().norm();
      worst = std::max(worst, std::max(std::abs(a), b) / 2.0);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------

void MeasurementSequence::validate() const {
  if (labels.empty()) throw std::invalid_argument("MeasurementSequence: empty");
  for (char c : labels) {
    if (c != 'X' && c != 'Z') throw std::invalid_argument("MeasurementSequence: labels must be X or Z");
  }
  if (!variants.empty() && variants.size() != labels.size()) {
    throw std::invalid_argument("MeasurementSequence: variant tags must match the labels");
  }
}

MeasurementSequence generate_debruijn(int k) {
  if (k < 1 || k > 24) throw std::invalid_argument("generate_debruijn: k in [1, 24]");
  // Concatenated Lyndon words in lexicographic order (FKM algorithm).
  std::vector<int> a(k + 1, 0);
  std::string out;
  std::function<void(int, int)> db = [&](int t, int p) {
    if (t > k) {
      if (k % p == 0) {
        for (int j = 1; j <= p; ++j) out.push_back(a[j] ? 'Z' : 'X');
      }
      return;
    }
    a[t] = a[t - p];
    db(t + 1, p);
    if (a[t - p] == 0) {
      a[t] = 1;
      db(t + 1, t);
    }
  };
  db(1, 1);
  return {out, {}};
}

// ---------------------------------------------------------------------------

int SubsequenceTable::index(char reset_first, char q, int s, char p) {
  if (s != 1 && s != -1) throw std::invalid_argument("SubsequenceTable: outcome must be +-1");
  return ((basis_bit(reset_first) == 1 ? 0 : 1) * 8) + basis_bit(q) * 4 + (s > 0 ? 0 : 2) + basis_bit(p);
}

const ConditionalEntry& SubsequenceTable::at(char reset_first, char q, int s, char p) const {
  if (entries.size() != 16) throw std::invalid_argument("SubsequenceTable: incomplete table");
  return entries[index(reset_first, q, s, p)];
}

std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n) {
  if (n <= 0) return {0.5, 0.5};
  double nn = double(n), ph = double(successes) / nn, z2 = kWilsonZ * kWilsonZ;
  double denom = 1.0 + z2 / nn;
  double center = (ph + z2 / (2 * nn)) / denom;
  double half = kWilsonZ / denom * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn));
  return {center, half};
}

namespace {

template <class Fn>
void for_each_entry(Fn&& fn) {
  for (char o : {'Z', 'X'})
    for (char q : {'X', 'Z'})
      for (int s : {+1, -1})
        for (char p : {'X', 'Z'}) fn(o, q, s, p);
}

SubsequenceTable exact_table(const InstrumentSet& inst) {
  SubsequenceTable t;
  t.entries.resize(16);
  for_each_entry([&](char o, char q, int s, char p) {
    char second = o == 'Z' ? 'X' : 'Z';
    Vec4 v = m4(inst.basis(second).total()) * (m4(inst.basis(o).total()) * maximally_mixed());
    Vec4 w = m4(inst.basis(q).outcome(s)) * v;
    ConditionalEntry e{o, q, s, p};
    e.cond_prob = w(0);
    if (!(w(0) > kZeroProb)) {
      e.flagged = true;
    } else {
      for (int r : {+1, -1}) e.pr[r > 0 ? 0 : 1] = (m4(inst.basis(p).outcome(r)) * w)(0) / w(0);
    }
    t.entries[SubsequenceTable::index(o, q, s, p)] = e;
  });
  return t;
}

struct Counts {
  std::array<std::int64_t, 16> cond{};  // by entry index
  std::array<std::int64_t, 16> plus{};
  std::array<std::int64_t, 8> reset_q{};     // (o, q) totals for Pr(Q_s)
  std::array<std::int64_t, 8> reset_q_s{};   // (o, q, s)
};

Counts run_batch(const std::array<Mat4, 4>& T, const std::string& cycle, std::int64_t start, std::int64_t steps,
                 std::uint64_t seed) {
  Counts c;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t L = cycle.size();
  Vec4 v = maximally_mixed();
  std::vector<int> lab(steps), out(steps);
  for (std::int64_t i = 0; i < steps; ++i) {
    int b = cycle[(start + i) % L] == 'Z' ? 1 : 0;
    Vec4 w = T[2 * b] * v;
    int s = +1;
    if (!(u(rng) < w(0))) {
      w = T[2 * b + 1] * v;
      s = -1;
    }
    if (!(w(0) > 0)) throw std::runtime_error("subsequence_statistics: sampled a zero-probability outcome");
    v = w / w(0);
    lab[i] = b;
    out[i] = s;
    // Window (i-3 .. i) = (reset a, reset b, Q, P); first k-1 steps are burn-in.
    if (i < 3 || lab[i - 3] == lab[i - 2]) continue;
    char o = lab[i - 3] ? 'Z' : 'X';
    char q = lab[i - 1] ? 'Z' : 'X';
    char p = lab[i] ? 'Z' : 'X';
    int idx = SubsequenceTable::index(o, q, out[i - 1], p);
    c.cond[idx] += 1;
    if (s > 0) c.plus[idx] += 1;
  }
  // Pr(Q_s) after each reset ordering, from windows of length 3.
  for (std::int64_t i = 2; i < steps; ++i) {
    if (lab[i - 2] == lab[i - 1]) continue;
    int oq = (lab[i - 2] ? 0 : 4) + lab[i] * 2;
    c.reset_q[oq] += 1;
    if (out[i] > 0) c.reset_q_s[oq] += 1;
  }
  return c;
}

SubsequenceTable sampled_table(const InstrumentSet& inst, const StatisticsOptions& opt) {
  if (opt.k < 4) throw std::invalid_argument("subsequence_statistics: sampled mode needs k >= 4 for fair windows");
  if (opt.batch_steps < 4) throw std::invalid_argument("subsequence_statistics: batch_steps >= 4");
  std::array<Mat4, 4> T = {m4(inst.x.plus), m4(inst.x.minus), m4(inst.z.plus), m4(inst.z.minus)};
  std::string cycle = generate_debruijn(opt.k).labels;
  std::int64_t nb = (opt.shots + opt.batch_steps - 1) / opt.batch_steps;
  std::vector<Counts> parts = parallel_map<Counts>(std::size_t(nb), opt.workers, [&](std::size_t b) {
    std::int64_t start = std::int64_t(b) * opt.batch_steps;
    std::int64_t n = std::min(opt.batch_steps, opt.shots - start);
    return run_batch(T, cycle, start, n, item_seed(opt.seed, b));
  });
  Counts tot;
  for (const Counts& c : parts) {
    for (int i = 0; i < 16; ++i) {
      tot.cond[i] += c.cond[i];
      tot.plus[i] += c.plus[i];
    }
    for (int i = 0; i < 8; ++i) {
      tot.reset_q[i] += c.reset_q[i];
      tot.reset_q_s[i] += c.reset_q_s[i];
    }
  }
  SubsequenceTable t;
  t.exact = false;
  t.shots = opt.shots;
  t.seed = opt.seed;
  t.entries.resize(16);
  for_each_entry([&](char o, char q, int s, char p) {
    int idx = SubsequenceTable::index(o, q, s, p);
    ConditionalEntry e{o, q, s, p};
    e.count = tot.cond[idx];
    e.plus_count = tot.plus[idx];
    int oq = (o == 'Z' ? 0 : 4) + basis_bit(q) * 2;
    std::int64_t nq = tot.reset_q[oq], nqs = s > 0 ? tot.reset_q_s[oq] : nq - tot.reset_q_s[oq];
    e.cond_prob = nq > 0 ? double(nqs) / double(nq) : 0.0;
    if (e.count == 0) {
      e.flagged = true;
    } else {
      e.pr[0] = double(e.plus_count) / double(e.count);
      e.pr[1] = 1.0 - e.pr[0];
      e.half_width = wilson_interval(e.plus_count, e.count).second;
    }
    t.entries[idx] = e;
  });
  return t;
}

void check_table(const SubsequenceTable& t, const char* who) {
  if (t.entries.size() != 16) throw std::invalid_argument(std::string(who) + ": incomplete table");
}

const ConditionalEntry& usable(const SubsequenceTable& t, char o, char q, int s, char p, const char* who) {
  const ConditionalEntry& e = t.at(o, q, s, p);
  if (e.flagged) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s: Pr(%c%c | %c%c; reset %c first) has a zero-probability condition", who, p,
                  '+', q, s > 0 ? '+' : '-', o);
    throw std::runtime_error(buf);
  }
  return e;
}

// Max over the listed (q, p) pairs and s of |mean_o Pr(p+ | q s) - target(s)|,
// with the one-sigma error of the maximizing mean.
template <class Target>
std::pair<double, double> aggregate(const SubsequenceTable& t, bool same_basis, Target target, const char* who) {
  check_table(t, who);
  double best = -1, sigma = 0;
  for (char q : {'X', 'Z'}) {
    for (char p : {'X', 'Z'}) {
      if ((q == p) != same_basis) continue;
      for (int s : {+1, -1}) {
        const ConditionalEntry& a = usable(t, 'Z', q, s, p, who);
        const ConditionalEntry& b = usable(t, 'X', q, s, p, who);
        double dev = std::abs(0.5 * (a.pr[0] + b.pr[0]) - target(s));
        if (dev > best) {
          best = dev;
          double sa = a.half_width / kWilsonZ, sb = b.half_width / kWilsonZ;
          sigma = 0.5 * std::sqrt(sa * sa + sb * sb);
        }
      }
    }
  }
  return {best, sigma};
}

std::pair<double, double> err_a_full(const SubsequenceTable& t) {
  return aggregate(t, true, [](int s) { return s > 0 ? 1.0 : 0.0; }, "estimate_err_a");
}

std::pair<double, double> err_b_full(const SubsequenceTable& t) {
  return aggregate(t, false, [](int) { return 0.5; }, "estimate_err_b");
}

}  // namespace

SubsequenceTable subsequence_statistics(const InstrumentSet& inst, const StatisticsOptions& opt) {
  if (opt.shots < 0) throw std::invalid_argument("subsequence_statistics: shots >= 0");
  return opt.shots == 0 ? exact_table(inst) : sampled_table(inst, opt);
}

SubsequenceTable subsequence_statistics(const NoiseParams& noise, const StatisticsOptions& opt) {
  return subsequence_statistics(instruments_from_noise(noise), opt);
}

double estimate_err_a(const SubsequenceTable& t) { return err_a_full(t).first; }
double estimate_err_b(const SubsequenceTable& t) { return err_b_full(t).first; }

MetricEstimates mbqb_metrics(const InstrumentSet& inst, const StatisticsOptions& opt) {
  MetricEstimates m;
  m.table = subsequence_statistics(inst, opt);
  std::tie(m.err_a, m.err_a_sigma) = err_a_full(m.table);
  std::tie(m.err_b, m.err_b_sigma) = err_b_full(m.table);
  m.reset_distance = reset_distance(reset_superop(inst));
  return m;
}

// ---------------------------------------------------------------------------

RebitMatrix rebit_block(const Superoperator& s) {
  Mat4 m = m4(s);
  const int ix[3] = {0, 1, 3};
  RebitMatrix r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(ix[i], ix[j]);
  return r;
}

namespace {

using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

// Columns X+, X-, Z+, Z- on (1, x, z).
Mat34 target_preps() {
  Mat34 p;
  p << 1, 1, 1, 1,  //
      1, -1, 0, 0,  //
      0, 0, 1, -1;
  return p;
}

template <class M>
Eigen::MatrixXd pinv(const M& m) {
  return Eigen::MatrixXd(m).completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace

RebitGateSet rebit_gst(const InstrumentSet& inst, const std::vector<NamedOperation>& ops, const GstOptions& opt) {
  if (opt.shots < 0) throw std::invalid_argument("rebit_gst: shots >= 0");
  const char bases[2] = {'X', 'Z'};
  const Mat4 reset = m4(reset_superop(inst));

  std::array<Vec4, 4> preps;
  for (int b = 0; b < 2; ++b) {
    for (int si = 0; si < 2; ++si) {
      Vec4 w = m4(inst.basis(bases[b]).outcome(si == 0 ? +1 : -1)) * (reset * maximally_mixed());
      if (!(w(0) > kZeroProb)) throw std::runtime_error("rebit_gst: a preparation outcome has zero probability");
      preps[2 * b + si] = w / w(0);
    }
  }
  std::array<Mat4, 4> effects = {m4(inst.x.plus), m4(inst.x.minus), m4(inst.z.plus), m4(inst.z.minus)};

  std::uint64_t experiment = 0;
  // Data matrix D(i, j) = Pr(effect i, op succeeded | prep j).
  auto data = [&](const Mat4& g) {
    Eigen::Matrix4d d;
    for (int j = 0; j < 4; ++j) {
      Vec4 out = g * preps[j];
      for (int b = 0; b < 2; ++b) {
        double qp = (effects[2 * b] * out)(0), qm = (effects[2 * b + 1] * out)(0);
        if (opt.shots > 0) {
          std::mt19937_64 rng(item_seed(opt.seed, experiment));
          qp = std::clamp(qp, 0.0, 1.0);
          std::binomial_distribution<std::int64_t> bp(opt.shots, qp);
          std::int64_t np = bp(rng);
          double rest = 1.0 - qp;
          double cond = rest > 0 ? std::clamp(qm / rest, 0.0, 1.0) : 0.0;
          std::binomial_distribution<std::int64_t> bm(opt.shots - np, cond);
          std::int64_t nm = bm(rng);
          qp = double(np) / double(opt.shots);
          qm = double(nm) / double(opt.shots);
        }
        ++experiment;
        d(2 * b, j) = qp;
        d(2 * b + 1, j) = qm;
      }
    }
    return d;
  };

  Mat34 pt = target_preps();
  Eigen::MatrixXd pt_pinv = pinv(pt);  // 4 x 3

  Eigen::Matrix4d a = data(Mat4::Identity());
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(a, Eigen::ComputeFullV);
  Eigen::Vector4d sv = svd.singularValues();
  if (!(sv(2) > 1e-8 * sv(0))) {
    Eigen::Vector3d dir = pt * svd.matrixV().col(2);
    if (dir.norm() > 0) dir /= dir.norm();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "rebit_gst: singular design (sigma_3/sigma_1 = %.3g); preparations and effects do not resolve "
                  "the (1, x, z) direction (%.3f, %.3f, %.3f)",
                  sv(0) > 0 ? sv(2) / sv(0) : 0.0, dir(0), dir(1), dir(2));
    throw std::runtime_error(buf);
  }

  RebitGateSet gs;
  gs.effects = a * pt_pinv;
  Eigen::MatrixXd e_pinv = pinv(gs.effects);  // 3 x 4

  auto reconstruct = [&](const std::string& name, const Eigen::Matrix4d& d) {
    RebitMap m;
    m.name = name;
    m.map = e_pinv * d * pt_pinv;
    m.residual = (gs.effects * m.map * pt - d).norm();
    return m;
  };
  gs.noop = reconstruct("noop", a);
  for (const NamedOperation& op : ops) gs.ops.push_back(reconstruct(op.name, data(m4(op.op))));
  return gs;
}

RebitGateSet rebit_gst(const NoiseParams& noise, const GstOptions& opt) {
  InstrumentSet inst = instruments_from_noise(noise);
  std::vector<NamedOperation> ops = {
      {"X+", inst.x.plus}, {"X-", inst.x.minus}, {"Z+", inst.z.plus}, {"Z-", inst.z.minus}};
  return rebit_gst(inst, ops, opt);
}

// ---------------------------------------------------------------------------

LifetimeResult lifetime_experiment(char basis, const std::vector<int>& idle_steps, const NoiseParams& noise) {
  noise.validate();
  if (idle_steps.size() < 2) throw std::invalid_argument("lifetime_experiment: need at least two idle counts");
  for (int k : idle_steps) {
    if (k < 0) throw std::invalid_argument("lifetime_experiment: idle counts must be >= 0");
  }
  InstrumentSet inst = instruments_from_noise(noise);
  const Instrument& m = inst.basis(basis);
  Mat4 idle = m4(ptm_of(idle_channel(noise.p1, noise.theta)));

  LifetimeResult r;
  r.basis = basis;
  r.idle_steps = idle_steps;
  std::vector<double> contrast;
  for (int k : idle_steps) {
    Mat4 ik = Mat4::Identity();
    for (int i = 0; i < k; ++i) ik = idle * ik;
    double agree = 0;
    for (int s : {+1, -1}) {
      Mat4 ms = m4(m.outcome(s));
      agree += (ms * ik * ms * maximally_mixed())(0);
    }
    r.agreement.push_back(agree);
    contrast.push_back(2 * agree - 1);
  }

  DecayFit f = fit_decay(idle_steps, contrast);
  r.decay = f.rate;
  r.flip_rate = (1.0 - std::exp(-f.rate)) / 2.0;
  r.intercept = f.intercept;
  r.residual = f.residual;
  r.flagged = f.flagged;
  r.flag = f.flag;

  if (!r.flagged) {
    std::vector<std::size_t> order(idle_steps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return idle_steps[a] < idle_steps[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (r.agreement[order[i]] > r.agreement[order[i - 1]] + kFitTolerance) {
        r.flagged = true;
        r.flag = "agreement increases with idle time";
        break;
      }
    }
  }
  if (!r.flagged && r.residual > 1e-6) {
    r.flagged = true;
    r.flag = "non-exponential decay";
  }
  return r;
}

}  // namespace tetron
