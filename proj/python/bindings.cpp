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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tetron/braiding.hpp"
#include "tetron/circuit.hpp"
#include "tetron/config.hpp"
#include "tetron/mbqb.hpp"
#include "tetron/qed.hpp"
#include "tetron/regression.hpp"

namespace py = pybind11;
using namespace tetron;

namespace {

py::dict derivation_dict(const NoiseDerivation& d) {
  py::dict r;
  r["noise"] = d.noise;
  r["t_life_s"] = d.t_life;
  r["t_life_delta_s"] = d.t_life_delta;
  r["t_life_eps_s"] = d.t_life_eps;
  r["eps_res_eV"] = d.eps_res;
  return r;
}

py::dict fit_dict(const DecayFit& f) {
  py::dict r;
  r["rate"] = f.rate;
  r["intercept"] = f.intercept;
  r["residual"] = f.residual;
  r["rounds"] = f.rounds;
  r["expectation"] = f.expectation;
  r["acceptance"] = f.acceptance;
  r["flagged"] = f.flagged;
  r["flag"] = f.flag;
  return r;
}

InstrumentSet instruments_by_name(const std::string& kind, const NoiseParams& noise, double p_f) {
  if (kind == "noise") return instruments_from_noise(noise);
  if (kind == "flip") return readout_flip_instruments(p_f);
  if (kind == "randomizing") return randomizing_instruments();
  if (kind == "identical") return identical_instruments();
  throw std::invalid_argument("instruments: expected noise, flip, randomizing or identical");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Measurement-based tetron qubit simulations";
  m.attr("__version__") = library_version();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CircuitParseError>(m, "CircuitParseError", PyExc_ValueError);

  py::class_<NoiseParams>(m, "NoiseParams")
      .def(py::init([](double p_a, double p1, double p2, double theta) {
             NoiseParams n{p_a, p1, p2, theta};
             n.validate();
             return n;
           }),
           py::arg("p_a") = 0.0, py::arg("p1") = 0.0, py::arg("p2") = 0.0, py::arg("theta") = 0.0)
      .def_readwrite("p_a", &NoiseParams::p_a)
      .def_readwrite("p1", &NoiseParams::p1)
      .def_readwrite("p2", &NoiseParams::p2)
      .def_readwrite("theta", &NoiseParams::theta)
      .def("validate", &NoiseParams::validate)
      .def("__repr__", [](const NoiseParams& n) {
        return "NoiseParams(p_a=" + std::to_string(n.p_a) + ", p1=" + std::to_string(n.p1) +
               ", p2=" + std::to_string(n.p2) + ", theta=" + std::to_string(n.theta) + ")";
      });

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("snr", &PhysicalParams::snr)
      .def_readwrite("tau_meas_s", &PhysicalParams::tau_meas)
      .def_readwrite("delta_over_kT", &PhysicalParams::delta_over_kT)
      .def_readwrite("L_over_xi", &PhysicalParams::L_over_xi)
      .def_readwrite("delta_eV", &PhysicalParams::delta)
      .def_readwrite("tau_elph_s", &PhysicalParams::tau_elph)
      .def_readwrite("eps_mst_eV", &PhysicalParams::eps_mst)
      .def_readwrite("eps_res_eV", &PhysicalParams::eps_res)
      .def_readwrite("psd_plus", &PhysicalParams::psd_plus)
      .def_readwrite("psd_minus", &PhysicalParams::psd_minus)
      .def_readwrite("p2", &PhysicalParams::p2);

  m.def("derive_noise", [](const PhysicalParams& p) { return derivation_dict(derive_noise(p)); }, py::arg("physical"),
        "Noise parameters and lifetimes derived from physical parameters.");
  m.def("p_a_from_snr", &p_a_from_snr, py::arg("snr"));

  py::class_<PauliString>(m, "PauliString")
      .def(py::init(&PauliString::parse), py::arg("text"))
      .def_property_readonly("num_qubits", &PauliString::num_qubits)
      .def_property_readonly("weight", &PauliString::weight)
      .def("letter", &PauliString::letter)
      .def("commutes", [](const PauliString& a, const PauliString& b) { return commutes(a, b); })
      .def("__str__", &PauliString::str)
      .def("__repr__", [](const PauliString& p) { return "PauliString('" + p.str() + "')"; });

  py::class_<Circuit>(m, "Circuit")
      .def_static("parse", [](const std::string& t) { return Circuit::parse(t); }, py::arg("text"))
      .def("to_text", &Circuit::to_text)
      .def_readonly("width", &Circuit::width)
      .def_property_readonly("num_steps", [](const Circuit& c) { return c.steps.size(); })
      .def_property_readonly("num_measurements", &Circuit::num_measurements)
      .def("__eq__", [](const Circuit& a, const Circuit& b) { return a == b; });

  // mbqb
  m.def(
      "mbqb_metrics",
      [](const NoiseParams& noise, std::int64_t shots, std::uint64_t seed, int workers, const std::string& instruments,
         double p_f) {
        StatisticsOptions opt;
        opt.shots = shots;
        opt.seed = seed;
        opt.workers = workers;
        MetricEstimates e = mbqb_metrics(instruments_by_name(instruments, noise, p_f), opt);
        py::list table;
        for (const ConditionalEntry& c : e.table.entries) {
          py::dict d;
          d["reset_first"] = std::string(1, c.reset_first);
          d["q"] = std::string(1, c.q);
          d["s"] = c.s;
          d["p"] = std::string(1, c.p);
          d["pr_plus"] = c.pr[0];
          d["pr_minus"] = c.pr[1];
          d["cond_prob"] = c.cond_prob;
          d["count"] = c.count;
          d["half_width"] = c.half_width;
          table.append(d);
        }
        py::dict r;
        r["err_a"] = e.err_a;
        r["err_b"] = e.err_b;
        r["err_a_sigma"] = e.err_a_sigma;
        r["err_b_sigma"] = e.err_b_sigma;
        r["reset_distance"] = e.reset_distance;
        r["mode"] = e.table.exact ? "exact" : "sampled";
        r["table"] = table;
        return r;
      },
      py::arg("noise") = NoiseParams{}, py::arg("shots") = 0, py::arg("seed") = 0, py::arg("workers") = 1,
      py::arg("instruments") = "noise", py::arg("p_f") = 0.0,
      "err_a, err_b and the conditional-probability table (shots=0 is exact).");
  m.def("debruijn", [](int k) { return generate_debruijn(k).labels; }, py::arg("k"));
  m.def("wilson_interval", &wilson_interval, py::arg("successes"), py::arg("n"));
  m.def("reset_distance", [](const NoiseParams& n) { return reset_distance(reset_superop(n)); }, py::arg("noise"));
  m.def(
      "rebit_gst",
      [](const NoiseParams& n, std::int64_t shots, std::uint64_t seed) {
        RebitGateSet g = rebit_gst(n, GstOptions{shots, seed});
        py::dict r;
        for (const RebitMap& op : g.ops) r[py::str(op.name)] = Eigen::Matrix3d(op.map);
        r["noop"] = Eigen::Matrix3d(g.noop.map);
        r["effects"] = Eigen::Matrix<double, 4, 3>(g.effects);
        return r;
      },
      py::arg("noise") = NoiseParams{}, py::arg("shots") = 0, py::arg("seed") = 0,
      "Rebit (1, x, z) maps of the four measurement outcomes.");
  m.def(
      "lifetime_experiment",
      [](char basis, const std::vector<int>& idle, const NoiseParams& n) {
        LifetimeResult r = lifetime_experiment(basis, idle, n);
        py::dict d;
        d["agreement"] = r.agreement;
        d["decay"] = r.decay;
        d["flip_rate"] = r.flip_rate;
        d["flagged"] = r.flagged;
        d["flag"] = r.flag;
        return d;
      },
      py::arg("basis"), py::arg("idle_steps"), py::arg("noise") = NoiseParams{});

  // braiding
  m.def("sequence_for", [](const std::string& cls) {
    std::vector<std::string> out;
    for (const PauliString& p : sequence_for(parse_clifford_class(cls)).measurements) out.push_back(p.str());
    return out;
  });
  m.def(
      "pauli_correction",
      [](const std::string& cls, const std::vector<int>& s) { return pauli_correction(parse_clifford_class(cls), s).str(); },
      py::arg("cls"), py::arg("outcomes"));
  m.def("verify_sequence_identity", [](const std::string& cls) {
    SequenceIdentityReport r = verify_sequence_identity(parse_clifford_class(cls));
    py::dict d;
    d["passed"] = r.passed;
    d["outcome_vectors"] = r.outcome_vectors;
    d["max_deviation"] = r.max_deviation;
    d["failures"] = r.failures;
    return d;
  });
  m.def(
      "simulate_class",
      [](const std::string& cls, const NoiseParams& n) {
        return Eigen::Matrix4d(simulate_class(parse_clifford_class(cls), n).transfer_matrix());
      },
      py::arg("cls"), py::arg("noise") = NoiseParams{}, "Transfer matrix in the (I, X, Y, Z) basis.");
  m.def(
      "class_fidelity", [](const std::string& cls, const NoiseParams& n) { return class_fidelity(parse_clifford_class(cls), n); },
      py::arg("cls"), py::arg("noise") = NoiseParams{});
  m.def(
      "fidelity_scan",
      [](const std::string& cls, const std::vector<double>& p1, const std::vector<double>& pa, double p2, int workers) {
        FidelityScan s = fidelity_scan(parse_clifford_class(cls), p1, pa, p2, workers);
        py::array_t<double> out({p1.size(), pa.size()});
        auto a = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < p1.size(); ++i)
          for (std::size_t j = 0; j < pa.size(); ++j) a(i, j) = s.at(i, j).fidelity;
        return out;
      },
      py::arg("cls"), py::arg("p1_grid"), py::arg("pa_grid"), py::arg("p2") = 0.0, py::arg("workers") = 1,
      "Fidelity array indexed [p1, pa].");
  m.def("default_fidelity_grid", &default_fidelity_grid);
  m.def(
      "tgate_experiment",
      [](double delta, const NoiseParams& n) {
        TStateResult r = tgate_experiment(delta, n);
        return py::make_tuple(r.fidelity, r.expected);
      },
      py::arg("delta"), py::arg("noise") = NoiseParams{}, "(fidelity, cos^2 delta).");

  // qed
  m.def(
      "decay_experiment",
      [](const std::string& level, const std::string& obs, const NoiseParams& n, const std::vector<int>& rounds,
         std::int64_t shots, std::uint64_t seed) {
        DecayExperimentSpec s;
        if (level != "physical" && level != "logical") throw std::invalid_argument("level: physical or logical");
        if (obs != "XX" && obs != "ZI") throw std::invalid_argument("observable: XX or ZI");
        s.level = level == "physical" ? Level::kPhysical : Level::kLogical;
        s.observable = obs == "XX" ? RepObservable::kXX : RepObservable::kZI;
        s.noise = n;
        s.rounds_grid = rounds;
        s.shots = shots;
        s.seed = seed;
        return fit_dict(decay_experiment(s));
      },
      py::arg("level"), py::arg("observable"), py::arg("noise") = NoiseParams{},
      py::arg("rounds") = std::vector<int>{2, 4, 6, 8, 10}, py::arg("shots") = 0, py::arg("seed") = 0);
  m.def(
      "lambda_metrics",
      [](double g_xx, double g_zi, double g_lxx, double g_lzi) {
        LambdaMetrics l = lambda_metrics(g_xx, g_zi, g_lxx, g_lzi);
        return py::make_tuple(l.lambda, l.lambda_x, l.lambda_z);
      },
      py::arg("gamma_phys_xx"), py::arg("gamma_phys_zi"), py::arg("gamma_log_xx"), py::arg("gamma_log_zi"));
  m.def(
      "improvement_scan",
      [](const std::vector<double>& p1, const std::vector<double>& p2, double p_a, const std::vector<int>& rounds,
         int workers) {
        ScanOptions opt;
        opt.rounds_grid = rounds;
        opt.workers = workers;
        ScanResult r = improvement_scan(p1, p2, p_a, opt);
        py::array_t<double> lam({p1.size(), p2.size()}), lx({p1.size(), p2.size()}), lz({p1.size(), p2.size()});
        auto a = lam.mutable_unchecked<2>(), b = lx.mutable_unchecked<2>(), c = lz.mutable_unchecked<2>();
        for (std::size_t i = 0; i < p1.size(); ++i) {
          for (std::size_t j = 0; j < p2.size(); ++j) {
            a(i, j) = r.at(i, j).metrics.lambda;
            b(i, j) = r.at(i, j).metrics.lambda_x;
            c(i, j) = r.at(i, j).metrics.lambda_z;
          }
        }
        py::list contour;
        for (const ContourPoint& p : r.contour) contour.append(py::make_tuple(p.p1, p.p2));
        py::dict d;
        d["lambda"] = lam;
        d["lambda_x"] = lx;
        d["lambda_z"] = lz;
        d["contour"] = contour;
        d["csv"] = r.to_csv();
        if (r.optimum) d["optimum"] = py::make_tuple(r.optimum->p1, r.optimum->p2);
        else d["optimum"] = py::none();
        return d;
      },
      py::arg("p1_grid"), py::arg("p2_grid"), py::arg("p_a") = 0.01,
      py::arg("rounds") = std::vector<int>{2, 4, 6, 8, 10}, py::arg("workers") = 1);
  m.def("default_scan_grid", &default_scan_grid);

  m.def("regression_checks", [] {
    py::list out;
    for (const RegressionCheck& c : regression_checks()) {
      py::dict d;
      d["module"] = c.module;
      d["name"] = c.name;
      d["value"] = c.value;
      d["expected"] = c.expected;
      d["tolerance"] = c.tolerance;
      d["passed"] = c.passed;
      out.append(d);
    }
    return out;
  });
}
