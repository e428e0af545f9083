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

#include "tetron/circuit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace tetron {

std::vector<int> op_qubits(const Operation& op) {
  return std::visit(
      [](const auto& o) -> std::vector<int> {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Meas2Op>) {
          return {o.q0, o.q1};
        } else {
          return {o.qubit};
        }
      },
      op);
}

int op_slot(const Operation& op) {
  // measurements only; -1 for other operations
  if (auto* m = std::get_if<Meas1Op>(&op)) return m->slot;
  if (auto* m = std::get_if<Meas2Op>(&op)) return m->slot;
  return -1;
}

PauliString op_pauli(const Operation& op, int width) {
  if (auto* m = std::get_if<Meas1Op>(&op)) return m->basis.embed(width, &m->qubit);
  if (auto* m = std::get_if<Meas2Op>(&op)) {
    int q[2] = {m->q0, m->q1};
    return m->pair.embed(width, q);
  }
  throw std::invalid_argument("op_pauli: not a measurement");
}

void Circuit::validate() const {
  if (width <= 0 || width > kMaxQubits) throw std::invalid_argument("circuit: width out of range");
  std::set<int> slots;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    std::set<int> used;
    for (const Operation& op : steps[t].ops) {
      for (int q : op_qubits(op)) {
        if (q < 0 || q >= width) {
          throw std::invalid_argument("circuit: step " + std::to_string(t) + " qubit " + std::to_string(q) +
                                      " outside width " + std::to_string(width));
        }
        if (!used.insert(q).second) {
          throw std::invalid_argument("circuit: step " + std::to_string(t) + " uses qubit " + std::to_string(q) +
                                      " twice");
        }
      }
      if (auto* m = std::get_if<Meas1Op>(&op)) {
        if (m->basis.num_qubits() != 1 || m->basis.is_identity_letters() || m->basis.sign() < 0) {
          throw std::invalid_argument("circuit: M1 basis must be X, Y or Z");
        }
      } else if (auto* m = std::get_if<Meas2Op>(&op)) {
        if (m->pair.num_qubits() != 2 || m->pair.weight() != 2 || m->pair.sign() < 0) {
          throw std::invalid_argument("circuit: M2 needs a weight-2 pair");
        }
      } else if (auto* r = std::get_if<RotateOp>(&op)) {
        if (r->axis.num_qubits() != 1 || r->axis.is_identity_letters()) {
          throw std::invalid_argument("circuit: ROT axis must be X, Y or Z");
        }
      }
      if (std::holds_alternative<Meas1Op>(op) || std::holds_alternative<Meas2Op>(op)) {
        int s = op_slot(op);
        if (s < 0) throw std::invalid_argument("circuit: negative slot index");
        if (!slots.insert(s).second) {
          throw std::invalid_argument("circuit: slot s" + std::to_string(s) + " assigned twice");
        }
      }
    }
  }
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    const Detector& d = detectors[i];
    if (d.slots.empty()) throw std::invalid_argument("circuit: detector with no slots");
    if (d.compare_previous && i == 0) throw std::invalid_argument("circuit: first detector cannot compare to prev");
    if (!d.compare_previous && d.expected != 1 && d.expected != -1) {
      throw std::invalid_argument("circuit: detector parity must be +1 or -1");
    }
    for (int s : d.slots) {
      if (!slots.count(s)) throw std::invalid_argument("circuit: detector references unfilled slot s" + std::to_string(s));
    }
  }
}

std::vector<int> Circuit::slot_order() const {
  std::vector<int> out;
  for (const CircuitStep& st : steps)
    for (const Operation& op : st.ops)
      if (op_slot(op) >= 0) out.push_back(op_slot(op));
  return out;
}

int Circuit::num_measurements() const { return static_cast<int>(slot_order().size()); }

std::vector<Detector> Circuit::resolved_detectors() const {
  std::vector<Detector> out;
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    const Detector& d = detectors[i];
    if (!d.compare_previous) {
      Detector r = d;
      std::sort(r.slots.begin(), r.slots.end());
      out.push_back(r);
      continue;
    }
    // parity(d) == parity(previous) <=> product over the symmetric difference is +1
    std::set<int> acc(d.slots.begin(), d.slots.end());
    for (int s : detectors[i - 1].slots) {
      if (!acc.erase(s)) acc.insert(s);
    }
    Detector r;
    r.slots.assign(acc.begin(), acc.end());
    r.expected = +1;
    if (r.slots.empty()) continue;  // trivially satisfied
    out.push_back(r);
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Circuit::to_text() const {
  std::ostringstream os;
  os << "qubits " << width << "\n";
  for (const CircuitStep& st : steps) {
    os << "step\n";
    for (const Operation& op : st.ops) {
      if (auto* m = std::get_if<Meas1Op>(&op)) {
        os << "M1 " << m->basis.str() << " q" << m->qubit << " -> s" << m->slot << "\n";
      } else if (auto* m = std::get_if<Meas2Op>(&op)) {
        os << "M2 " << m->pair.str() << " q" << m->q0 << " q" << m->q1 << " -> s" << m->slot << "\n";
      } else if (auto* r = std::get_if<RotateOp>(&op)) {
        os << "ROT " << r->axis.str() << " q" << r->qubit << " " << fmt_double(r->phi) << "\n";
      } else {
        os << "IDLE q" << std::get<IdleOp>(op).qubit << "\n";
      }
    }
  }
  for (const Detector& d : detectors) {
    os << "DET";
    for (int s : d.slots) os << " s" << s;
    if (d.compare_previous) {
      os << " = prev\n";
    } else {
      os << " = " << (d.expected > 0 ? "+1" : "-1") << "\n";
    }
  }
  return os.str();
}

namespace {

int parse_index(const std::string& tok, char prefix, int line) {
  if (tok.size() < 2 || tok[0] != prefix) {
    throw CircuitParseError(line, "expected " + std::string(1, prefix) + "<index>, got '" + tok + "'");
  }
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(tok.substr(1), &pos);
  } catch (const std::exception&) {
    throw CircuitParseError(line, "bad index in '" + tok + "'");
  }
  if (pos != tok.size() - 1 || v < 0) throw CircuitParseError(line, "bad index in '" + tok + "'");
  return v;
}

PauliString parse_pauli(const std::string& tok, std::size_t letters, int line) {
  try {
    PauliString p = PauliString::parse(tok);
    if (static_cast<std::size_t>(p.num_qubits()) != letters) throw std::invalid_argument("length");
    return p;
  } catch (const std::invalid_argument&) {
    throw CircuitParseError(line, "expected a " + std::to_string(letters) + "-letter Pauli, got '" + tok + "'");
  }
}

}  // namespace

Circuit Circuit::parse(std::string_view text) {
  Circuit c;
  int declared = -1;
  int max_qubit = -1;
  bool in_step = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto need_step = [&]() {
      if (!in_step) throw CircuitParseError(line, "operation before the first 'step' line");
    };
    auto track = [&](int q) { max_qubit = std::max(max_qubit, q); };
    if (kw == "qubits") {
      if (tok.size() != 2) throw CircuitParseError(line, "usage: qubits <n>");
      try {
        declared = std::stoi(tok[1]);
      } catch (const std::exception&) {
        throw CircuitParseError(line, "bad qubit count");
      }
    } else if (kw == "step") {
      if (tok.size() != 1) throw CircuitParseError(line, "'step' takes no arguments");
      c.steps.emplace_back();
      in_step = true;
    } else if (kw == "M1") {
      need_step();
      if (tok.size() != 5 || tok[3] != "->") throw CircuitParseError(line, "usage: M1 <P> q<i> -> s<k>");
      Meas1Op m{parse_pauli(tok[1], 1, line), parse_index(tok[2], 'q', line), parse_index(tok[4], 's', line)};
      track(m.qubit);
      c.steps.back().ops.push_back(m);
    } else if (kw == "M2") {
      need_step();
      if (tok.size() != 6 || tok[4] != "->") throw CircuitParseError(line, "usage: M2 <PQ> q<i> q<j> -> s<k>");
      Meas2Op m{parse_pauli(tok[1], 2, line), parse_index(tok[2], 'q', line), parse_index(tok[3], 'q', line),
                parse_index(tok[5], 's', line)};
      track(m.q0);
      track(m.q1);
      c.steps.back().ops.push_back(m);
    } else if (kw == "ROT") {
      need_step();
      if (tok.size() != 4) throw CircuitParseError(line, "usage: ROT <P> q<i> <phi>");
      double phi = 0;
      try {
        std::size_t pos = 0;
        phi = std::stod(tok[3], &pos);
        if (pos != tok[3].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw CircuitParseError(line, "bad angle '" + tok[3] + "'");
      }
      RotateOp r{parse_pauli(tok[1], 1, line), parse_index(tok[2], 'q', line), phi};
      track(r.qubit);
      c.steps.back().ops.push_back(r);
    } else if (kw == "IDLE") {
      need_step();
      if (tok.size() != 2) throw CircuitParseError(line, "usage: IDLE q<i>");
      IdleOp o{parse_index(tok[1], 'q', line)};
      track(o.qubit);
      c.steps.back().ops.push_back(o);
    } else if (kw == "DET") {
      auto eq = std::find(tok.begin(), tok.end(), "=");
      if (eq == tok.end() || eq + 2 != tok.end() || eq == tok.begin() + 1) {
        throw CircuitParseError(line, "usage: DET s<a> ... = <+1|-1|prev>");
      }
      Detector d;
      for (auto it = tok.begin() + 1; it != eq; ++it) d.slots.push_back(parse_index(*it, 's', line));
      const std::string& v = *(eq + 1);
      if (v == "prev") {
        if (c.detectors.empty()) throw CircuitParseError(line, "'prev' needs an earlier DET line");
        d.compare_previous = true;
      } else if (v == "+1" || v == "1") {
        d.expected = +1;
      } else if (v == "-1") {
        d.expected = -1;
      } else {
        throw CircuitParseError(line, "detector parity must be +1, -1 or prev");
      }
      c.detectors.push_back(d);
    } else {
      throw CircuitParseError(line, "unknown keyword '" + kw + "'");
    }
  }
  c.width = declared > 0 ? declared : max_qubit + 1;
  if (c.width <= 0) throw CircuitParseError(line, "circuit has no qubits");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw CircuitParseError(line, e.what());
  }
  return c;
}

CircuitStep& CircuitBuilder::current() {
  if (c_.steps.empty()) c_.steps.emplace_back();
  return c_.steps.back();
}

CircuitBuilder& CircuitBuilder::step() {
  c_.steps.emplace_back();
  return *this;
}

int CircuitBuilder::m1(char basis, int qubit) {
  int s = next_slot_++;
  current().ops.push_back(Meas1Op{PauliString::parse(std::string(1, basis)), qubit, s});
  return s;
}

int CircuitBuilder::m2(std::string_view pair, int q0, int q1) {
  int s = next_slot_++;
  current().ops.push_back(Meas2Op{PauliString::parse(pair), q0, q1, s});
  return s;
}

CircuitBuilder& CircuitBuilder::rot(char axis, int qubit, double phi) {
  current().ops.push_back(RotateOp{PauliString::parse(std::string(1, axis)), qubit, phi});
  return *this;
}

CircuitBuilder& CircuitBuilder::idle(int qubit) {
  current().ops.push_back(IdleOp{qubit});
  return *this;
}

CircuitBuilder& CircuitBuilder::detector(std::vector<int> slots, int expected) {
  c_.detectors.push_back(Detector{std::move(slots), expected, false});
  return *this;
}

Circuit CircuitBuilder::build() const {
  c_.validate();
  return c_;
}

}  // namespace tetron
