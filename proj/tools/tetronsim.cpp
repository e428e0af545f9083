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

// Batch runner. Exit codes: 0 ok, 1 config error, 2 numerical invariant
// failure, 3 regression failure (--check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tetron/braiding.hpp"
#include "tetron/config.hpp"
#include "tetron/mbqb.hpp"
#include "tetron/qed.hpp"
#include "tetron/regression.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace tetron;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kInvariantError = 2, kRegressionError = 3 };

// First failing numerical invariant wins.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

void require_probability(double p, const std::string& what) {
  require(std::isfinite(p) && p >= -1e-12 && p <= 1 + 1e-12, what + " = " + std::to_string(p) + " is not a probability");
}

std::string g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json noise_json(const NoiseParams& n) { return {{"p_a", n.p_a}, {"p1", n.p1}, {"p2", n.p2}, {"theta", n.theta}}; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json derivation_json(const NoiseDerivation& d) {
  return {{"noise", noise_json(d.noise)},
          {"t_life_s", d.t_life},
          {"t_life_delta_s", optional_json(d.t_life_delta)},
          {"t_life_eps_s", optional_json(d.t_life_eps)},
          {"eps_res_eV", d.eps_res}};
}

json physical_json(const PhysicalParams& p) {
  return {{"snr", optional_json(p.snr)},           {"tau_meas_s", optional_json(p.tau_meas)},
          {"delta_over_kT", optional_json(p.delta_over_kT)}, {"L_over_xi", optional_json(p.L_over_xi)},
          {"delta_eV", optional_json(p.delta)},     {"tau_elph_s", optional_json(p.tau_elph)},
          {"eps_mst_eV", optional_json(p.eps_mst)}, {"eps_res_eV", optional_json(p.eps_res)},
          {"psd_plus", optional_json(p.psd_plus)},  {"psd_minus", optional_json(p.psd_minus)},
          {"p2", p.p2}};
}

struct RunContext {
  Config cfg;
  ResolvedNoise noise;
  std::uint64_t seed = 1;
  int workers = 1;
  fs::path out;
  std::vector<std::string> outputs;
  json result;

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(out / name, std::ios::binary);
    if (!f) throw ConfigError("<command line>", 0, "cannot write " + (out / name).string());
    f << content;
    outputs.push_back(name);
  }
};

char parse_basis(const Config& c, const std::string& section, const std::string& key, const std::string& dflt) {
  std::string b = c.get_string(section, key, dflt);
  if (b != "X" && b != "Z") c.fail(section, key, "expected X or Z, got '" + b + "'");
  return b[0];
}

// ---------------------------------------------------------------------------

void run_mbqb(RunContext& ctx) {
  const Config& c = ctx.cfg;
  std::string kind = c.get_string("mbqb", "instruments", "noise");
  InstrumentSet inst;
  if (kind == "noise") {
    inst = instruments_from_noise(ctx.noise.noise);
  } else if (kind == "flip") {
    double pf = c.get_double("mbqb", "p_f", 0.0);
    if (!(pf >= 0 && pf <= 0.5)) c.fail("mbqb", "p_f", "outside [0, 0.5]");
    inst = readout_flip_instruments(pf);
  } else if (kind == "randomizing") {
    inst = randomizing_instruments();
  } else if (kind == "identical") {
    inst = identical_instruments();
  } else {
    c.fail("mbqb", "instruments", "expected noise, flip, randomizing or identical, got '" + kind + "'");
  }
  StatisticsOptions opt;
  std::int64_t shots = c.get_int("run", "shots", 0);
  if (shots < 0) c.fail("run", "shots", "must be nonnegative");
  opt.shots = shots;
  opt.seed = ctx.seed;
  opt.workers = ctx.workers;
  opt.k = static_cast<int>(c.get_int("mbqb", "k", 4));
  if (opt.k < 2 || opt.k > 12) c.fail("mbqb", "k", "expected 2..12");
  opt.batch_steps = c.get_int("mbqb", "batch_steps", opt.batch_steps);
  if (opt.batch_steps <= 0) c.fail("mbqb", "batch_steps", "must be positive");

  MetricEstimates m;
  try {
    m = mbqb_metrics(inst, opt);
  } catch (const std::runtime_error& e) {
    throw InvariantError(e.what());
  }

  std::ostringstream csv;
  csv << "reset_first,q,s,p,pr_plus,pr_minus,cond_prob,count,plus_count,half_width,flagged\n";
  json table = json::array();
  for (const ConditionalEntry& e : m.table.entries) {
    require_probability(e.pr[0], std::string("Pr(") + e.p + "+|" + e.q + (e.s > 0 ? "+" : "-") + ")");
    require_probability(e.cond_prob, "conditioning probability");
    csv << e.reset_first << ',' << e.q << ',' << e.s << ',' << e.p << ',' << g12(e.pr[0]) << ',' << g12(e.pr[1])
        << ',' << g12(e.cond_prob) << ',' << e.count << ',' << e.plus_count << ',' << g12(e.half_width) << ','
        << int(e.flagged) << '\n';
    table.push_back({{"reset_first", std::string(1, e.reset_first)},
                     {"q", std::string(1, e.q)},
                     {"s", e.s},
                     {"p", std::string(1, e.p)},
                     {"pr_plus", e.pr[0]},
                     {"pr_minus", e.pr[1]},
                     {"cond_prob", e.cond_prob},
                     {"count", e.count},
                     {"plus_count", e.plus_count},
                     {"half_width", e.half_width}});
  }
  require(std::isfinite(m.err_a) && std::isfinite(m.err_b), "err_a/err_b finite");
  require(std::isfinite(m.reset_distance), "reset distance finite");

  json r = {{"err_a", m.err_a},
            {"err_b", m.err_b},
            {"err_a_sigma", m.err_a_sigma},
            {"err_b_sigma", m.err_b_sigma},
            {"reset_distance", m.reset_distance},
            {"mode", m.table.exact ? "exact" : "sampled"},
            {"shots", m.table.shots},
            {"seed", m.table.seed},
            {"instruments", kind},
            {"noise", noise_json(ctx.noise.noise)},
            {"formulae",
             {{"err_a", "max over P,s of |mean over reset ordering of Pr(P+|P_s) - [s=+1]|"},
              {"err_b", "max over P!=Q,s of |mean over reset ordering of Pr(P+|Q_s) - 1/2|"}}},
            {"table", table}};
  ctx.write("mbqb.json", r.dump(2) + "\n");
  ctx.write("mbqb_table.csv", csv.str());
  std::cout << "err_a = " << g12(m.err_a) << "  err_b = " << g12(m.err_b);
  if (!m.table.exact) std::cout << "  (sigma " << g12(m.err_a_sigma) << ", " << g12(m.err_b_sigma) << ")";
  std::cout << "  reset distance = " << g12(m.reset_distance) << "\n";
  ctx.result = {{"err_a", m.err_a}, {"err_b", m.err_b}};
}

void run_braid(RunContext& ctx) {
  const Config& c = ctx.cfg;
  CliffordClass cls;
  try {
    cls = parse_clifford_class(c.get_string("braid", "class", "S"));
  } catch (const std::invalid_argument& e) {
    c.fail("braid", "class", e.what());
  }
  double p2 = c.get_double("braid", "p2", ctx.noise.noise.p2);
  if (!(p2 >= 0 && p2 <= 15.0 / 16.0)) c.fail("braid", c.has("braid", "p2") ? "p2" : "class", "p2 outside [0, 15/16]");
  std::vector<double> p1g = c.get_grid("braid", "p1_grid", default_fidelity_grid());
  std::vector<double> pag = c.get_grid("braid", "pa_grid", default_fidelity_grid());
  for (double p : p1g) {
    if (!(p >= 0 && p <= 0.75)) c.fail("braid", "p1_grid", "value " + g12(p) + " outside [0, 0.75]");
  }
  for (double p : pag) {
    if (!(p >= 0 && p <= 0.5)) c.fail("braid", "pa_grid", "value " + g12(p) + " outside [0, 0.5]");
  }
  FidelityScan s = fidelity_scan(cls, p1g, pag, p2, ctx.workers);
  double fmin = 1, fmax = 0;
  for (const FidelityPoint& p : s.points) {
    require_probability(p.fidelity, "fidelity at p1=" + g12(p.p1) + ", pa=" + g12(p.pa));
    fmin = std::min(fmin, p.fidelity);
    fmax = std::max(fmax, p.fidelity);
  }
  std::string name = std::string("braid_") + to_string(cls) + ".csv";
  ctx.write(name, s.to_csv());
  json r = {{"class", to_string(cls)}, {"p2", p2},         {"points", s.points.size()},
            {"min_fidelity", fmin},    {"max_fidelity", fmax}, {"csv", name}};
  if (!p1g.empty() && !pag.empty() && p1g[0] == 0 && pag[0] == 0) r["fidelity_origin"] = s.points[0].fidelity;
  ctx.write("braid.json", r.dump(2) + "\n");
  std::cout << to_string(cls) << ": " << s.points.size() << " points, F in [" << g12(fmin) << ", " << g12(fmax)
            << "]\n";
  ctx.result = r;
}

void run_qed(RunContext& ctx) {
  const Config& c = ctx.cfg;
  double pa = c.get_double("qed", "p_a", c.has("noise", "p_a") ? ctx.noise.noise.p_a : 0.01);
  if (!(pa >= 0 && pa <= 0.5)) c.fail("qed", "p_a", "outside [0, 0.5]");
  ScanOptions opt;
  opt.workers = ctx.workers;
  opt.rounds_grid = c.get_int_list("qed", "rounds", opt.rounds_grid);
  opt.theta = c.get_double("qed", "theta", 0.0);
  std::vector<double> g1 = c.get_grid("qed", "p1_grid", default_scan_grid());
  std::vector<double> g2 = c.get_grid("qed", "p2_grid", default_scan_grid());
  ScanResult r;
  try {
    r = improvement_scan(g1, g2, pa, opt);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.source(), 0, std::string("[qed] ") + e.what());
  }
  int improved = 0, improved_x = 0, improved_z = 0;
  for (const ScanPoint& p : r.points) {
    require(!std::isnan(p.metrics.lambda) && !std::isnan(p.metrics.lambda_x) && !std::isnan(p.metrics.lambda_z),
            "lambda is NaN at p1=" + g12(p.p1) + ", p2=" + g12(p.p2));
    require_probability(p.accept_phys, "physical acceptance");
    require_probability(p.accept_log, "logical acceptance");
    improved += p.metrics.lambda > 1;
    improved_x += p.metrics.lambda_x > 1;
    improved_z += p.metrics.lambda_z > 1;
  }
  ctx.write("qed_scan.csv", r.to_csv());
  ctx.write("qed_contour.csv", r.contour_csv());
  json j = {{"p_a", pa},
            {"grid", {{"p1", g1.size()}, {"p2", g2.size()}}},
            {"rounds", opt.rounds_grid},
            {"points_lambda_gt_1", improved},
            {"points_lambda_x_gt_1", improved_x},
            {"points_lambda_z_gt_1", improved_z},
            {"contour_points", r.contour.size()}};
  if (r.optimum) {
    j["optimum"] = {{"p1", r.optimum->p1}, {"p2", r.optimum->p2}, {"interior", r.optimum_interior}};
  } else {
    j["optimum"] = nullptr;
  }
  ctx.write("qed.json", j.dump(2) + "\n");
  std::cout << "scan " << g1.size() << "x" << g2.size() << ": Lambda > 1 on " << improved << " points";
  if (r.optimum) std::cout << ", optimum p1 = " << g12(r.optimum->p1) << " (p2 = " << g12(r.optimum->p2) << ")";
  std::cout << "\n";
  ctx.result = j;
}

void run_lifetime(RunContext& ctx) {
  const Config& c = ctx.cfg;
  char basis = parse_basis(c, "lifetime", "basis", "Z");
  std::vector<int> idle = c.get_int_list("lifetime", "idle", {2, 4, 6, 8, 10});
  LifetimeResult r;
  try {
    r = lifetime_experiment(basis, idle, ctx.noise.noise);
  } catch (const std::invalid_argument& e) {
    c.fail("lifetime", "idle", e.what());
  }
  std::ostringstream csv;
  csv << "idle,agreement\n";
  for (std::size_t i = 0; i < r.idle_steps.size(); ++i) {
    require_probability(r.agreement[i], "agreement");
    csv << r.idle_steps[i] << ',' << g12(r.agreement[i]) << '\n';
  }
  ctx.write("lifetime.csv", csv.str());
  json j = {{"basis", std::string(1, basis)}, {"decay", r.decay},     {"flip_rate", r.flip_rate},
            {"intercept", r.intercept},      {"residual", r.residual}, {"flagged", r.flagged},
            {"flag", r.flag},                {"noise", noise_json(ctx.noise.noise)}};
  ctx.write("lifetime.json", j.dump(2) + "\n");
  std::cout << "flip rate per idle step = " << g12(r.flip_rate) << (r.flagged ? "  [" + r.flag + "]" : "") << "\n";
  ctx.result = j;
}

void run_tgate(RunContext& ctx) {
  std::vector<double> deltas = ctx.cfg.get_grid("tgate", "delta", {0.0});
  std::ostringstream csv;
  csv << "delta,fidelity,expected\n";
  json rows = json::array();
  for (double d : deltas) {
    TStateResult r = tgate_experiment(d, ctx.noise.noise);
    require_probability(r.fidelity, "T-state fidelity");
    csv << g12(d) << ',' << g12(r.fidelity) << ',' << g12(r.expected) << '\n';
    rows.push_back({{"delta", d}, {"fidelity", r.fidelity}, {"expected", r.expected}});
    std::cout << "delta = " << g12(d) << "  F = " << g12(r.fidelity) << "\n";
  }
  ctx.write("tgate.csv", csv.str());
  ctx.result = rows;
}

void run_derive_noise(RunContext& ctx) {
  if (!ctx.noise.derivation) {
    throw ConfigError(ctx.cfg.source(), 0, "derive-noise needs a [physical] section (or --physical k=v,...)");
  }
  const NoiseParams& n = ctx.noise.noise;
  for (double v : {n.p_a, n.p1, n.p2, n.theta}) require(std::isfinite(v), "derived noise finite");
  json j = {{"physical", physical_json(*ctx.noise.physical)}, {"derivation", derivation_json(*ctx.noise.derivation)}};
  ctx.write("derive_noise.json", j.dump(2) + "\n");
  std::cout << "p_a = " << g12(n.p_a) << "  p1 = " << g12(n.p1) << "  p2 = " << g12(n.p2) << "  theta = " << g12(n.theta)
            << "\n";
  ctx.result = j["derivation"];
}

// Returns false when any regression fails.
bool run_checks(RunContext& ctx) {
  std::vector<RegressionCheck> checks = regression_checks();
  json arr = json::array();
  bool ok = true;
  for (const RegressionCheck& c : checks) {
    ok = ok && c.passed;
    arr.push_back({{"module", c.module},
                   {"name", c.name},
                   {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                   {"expected", c.expected},
                   {"tolerance", c.tolerance},
                   {"passed", c.passed}});
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.module << " " << c.name << " = " << g12(c.value)
              << " (expected " << g12(c.expected) << " +- " << g12(c.tolerance) << ")\n";
  }
  json s = {{"passed", ok}, {"count", checks.size()}, {"checks", arr}};
  ctx.write("summary.json", s.dump(2) + "\n");
  return ok;
}

// "a=1,b=2" into section keys.
void set_pairs(Config& cfg, const std::string& section, const std::string& pairs, const std::string& flag) {
  std::stringstream ss(pairs);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("<command line>", 0, flag + ": expected key=value, got '" + item + "'");
    }
    cfg.set(section, item.substr(0, eq), item.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args[0] == "run") args.erase(args.begin());
  std::string command_line = "tetronsim";
  for (const std::string& a : args) command_line += " " + a;

  CLI::App app{"tetronsim: measurement-based tetron simulations"};
  app.set_version_flag("--version", std::string(library_version()));
  std::string config_path, out_dir = "tetronsim-out", noise_pairs, physical_pairs;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::int64_t> shots;
  bool exact = false, check = false;
  app.add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Run seed (u64)");
  app.add_option("--workers", workers, "Worker threads");
  auto* exact_flag = app.add_flag("--exact", exact, "Exact probabilities (default)");
  app.add_option("--shots", shots, "Sampled mode with this many steps")->excludes(exact_flag);
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--check", check, "Also run the embedded regression checks");
  app.add_option("--set", overrides, "Override: section.key=value (repeatable)");
  app.add_option("--noise", noise_pairs, "Noise parameters: p_a=..,p1=..,p2=..,theta=..");
  app.add_option("--physical", physical_pairs, "Physical parameters: snr=..,tau_meas_s=..,...");

  std::map<std::string, std::map<std::string, std::string>> conv;  // section -> key -> value
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto opt = [&](CLI::App* s, const char* flag, const char* section, const char* key, const char* help) {
    s->add_option_function<std::string>(flag, [&conv, section, key](const std::string& v) { conv[section][key] = v; },
                                        help);
  };
  CLI::App* mbqb = sub("mbqb", "Measurement-based qubit benchmarks");
  opt(mbqb, "--instruments", "mbqb", "instruments", "noise|flip|randomizing|identical");
  opt(mbqb, "--p-f", "mbqb", "p_f", "Readout flip probability for --instruments flip");
  CLI::App* braid = sub("braid", "Measurement-only Clifford fidelity scan");
  opt(braid, "--class", "braid", "class", "Clifford class (H, S, HSH, SH, HS)");
  opt(braid, "--p2", "braid", "p2", "Two-qubit measurement error");
  braid->add_option_function<std::string>(
      "--grid", [&conv](const std::string& v) { conv["braid"]["p1_grid"] = conv["braid"]["pa_grid"] = v; },
      "Grid for both p1 and p_a");
  opt(braid, "--p1-grid", "braid", "p1_grid", "p1 grid");
  opt(braid, "--pa-grid", "braid", "pa_grid", "p_a grid");
  CLI::App* qed = sub("qed", "Error-detection improvement scan");
  qed->add_option_function<std::string>(
      "--scan", [&conv](const std::string& v) { conv["qed"]["p1_grid"] = conv["qed"]["p2_grid"] = v; },
      "Grid for both p1 and p2");
  opt(qed, "--pa", "qed", "p_a", "Assignment error");
  opt(qed, "--rounds", "qed", "rounds", "Rounds grid, e.g. 2,4,6,8,10");
  CLI::App* lifetime = sub("lifetime", "Repeated-measurement lifetime");
  opt(lifetime, "--basis", "lifetime", "basis", "X or Z");
  opt(lifetime, "--idle", "lifetime", "idle", "Idle step counts, e.g. 2,4,8");
  CLI::App* tgate = sub("tgate", "T-state preparation by timed coupling");
  opt(tgate, "--delta", "tgate", "delta", "Phase error (grid syntax allowed)");
  sub("derive-noise", "Noise parameters from physical parameters");
  sub("check", "Run the embedded regression checks");
  app.require_subcommand(0, 1);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());  // CLI11 consumes from the back
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto t0 = std::chrono::steady_clock::now();
  RunContext ctx;
  std::string experiment;
  try {
    ctx.cfg = config_path.empty() ? Config::parse("", "<command line>") : Config::load(config_path);
    for (const std::string& o : overrides) {
      auto dot = o.find('.'), eq = o.find('=');
      if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
        throw ConfigError("<command line>", 0, "--set: expected section.key=value, got '" + o + "'");
      }
      ctx.cfg.set(o.substr(0, dot), o.substr(dot + 1, eq - dot - 1), o.substr(eq + 1));
    }
    if (!noise_pairs.empty()) set_pairs(ctx.cfg, "noise", noise_pairs, "--noise");
    if (!physical_pairs.empty()) set_pairs(ctx.cfg, "physical", physical_pairs, "--physical");
    for (const auto& [section, kv] : conv) {
      for (const auto& [k, v] : kv) ctx.cfg.set(section, k, v);
    }
    if (seed) ctx.cfg.set("run", "seed", std::to_string(*seed));
    if (workers) ctx.cfg.set("run", "workers", std::to_string(*workers));
    if (shots) ctx.cfg.set("run", "shots", std::to_string(*shots));
    if (exact) ctx.cfg.set("run", "shots", "0");
    if (!out_dir.empty() && (app.count("--out") || !ctx.cfg.has("run", "out"))) ctx.cfg.set("run", "out", out_dir);
    ctx.cfg.check_schema(run_config_schema());

    auto subs = app.get_subcommands();
    std::string from_config = ctx.cfg.get_string("run", "experiment", "");
    experiment = subs.empty() ? from_config : subs[0]->get_name();
    if (experiment.empty()) {
      throw ConfigError(ctx.cfg.source(), 0, "no experiment: give a subcommand or run.experiment");
    }
    if (!from_config.empty() && !subs.empty() && from_config != experiment) {
      ctx.cfg.fail("run", "experiment", "config selects '" + from_config + "' but the command is '" + experiment + "'");
    }
    static const std::vector<std::string> known = {"mbqb", "braid", "qed", "lifetime", "tgate", "derive-noise", "check"};
    if (std::find(known.begin(), known.end(), experiment) == known.end()) {
      ctx.cfg.fail("run", "experiment", "unknown experiment '" + experiment + "'");
    }
    ctx.seed = ctx.cfg.get_uint("run", "seed", 1);
    std::int64_t w = ctx.cfg.get_int("run", "workers", 1);
    if (w < 1 || w > 1024) ctx.cfg.fail("run", "workers", "expected 1..1024");
    ctx.workers = static_cast<int>(w);
    ctx.noise = resolve_noise(ctx.cfg);
    ctx.out = ctx.cfg.get_string("run", "out", out_dir);
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec || !fs::is_directory(ctx.out)) {
      throw ConfigError("<command line>", 0, "cannot create output directory " + ctx.out.string());
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  int status = kOk;
  std::string failure;
  try {
    if (experiment == "mbqb") run_mbqb(ctx);
    else if (experiment == "braid") run_braid(ctx);
    else if (experiment == "qed") run_qed(ctx);
    else if (experiment == "lifetime") run_lifetime(ctx);
    else if (experiment == "tgate") run_tgate(ctx);
    else if (experiment == "derive-noise") run_derive_noise(ctx);
    if ((check || experiment == "check") && !run_checks(ctx)) {
      status = kRegressionError;
      failure = "regression checks failed (see summary.json)";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvariantError& e) {
    status = kInvariantError;
    failure = std::string("numerical invariant failed: ") + e.what();
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json sections = json::object();
  for (const auto& [name, keys] : ctx.cfg.sections()) {
    for (const auto& [k, v] : keys) sections[name][k] = v.value;
  }
  json manifest = {{"tool", "tetronsim"},
                   {"version", library_version()},
                   {"command", command_line},
                   {"experiment", experiment},
                   {"config_source", ctx.cfg.source()},
                   {"config", sections},
                   {"config_text", ctx.cfg.to_text()},
                   {"seed", ctx.seed},
                   {"workers", ctx.workers},
                   {"noise", noise_json(ctx.noise.noise)},
                   {"derivation", ctx.noise.derivation ? derivation_json(*ctx.noise.derivation) : json(nullptr)},
                   {"physical", ctx.noise.physical ? physical_json(*ctx.noise.physical) : json(nullptr)},
                   {"outputs", ctx.outputs},
                   {"status", status},
                   {"failure", failure.empty() ? json(nullptr) : json(failure)},
                   {"wall_time_s", wall}};
  {
    std::ofstream f(ctx.out / "manifest.json");
    f << manifest.dump(2) << "\n";
  }
  if (!failure.empty()) std::cerr << failure << "\n";
  return status;
}
