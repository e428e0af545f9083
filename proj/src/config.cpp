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

#include "tetron/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tetron/sweep.hpp"

namespace tetron {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class T>
std::optional<T> to_integer(const std::string& s) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::size_t hash = raw.find('#');
    std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_name(section)) throw ConfigError(source, line_no, "invalid section name '" + section + "'");
      if (c.section_line_.count(section)) throw ConfigError(source, line_no, "duplicate section [" + section + "]");
      c.section_line_[section] = line_no;
      c.sections_[section];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, line_no, "key outside of a [section]");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(source, line_no, "invalid key '" + key + "'");
    if (c.sections_[section].count(key)) {
      throw ConfigError(source, line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    c.sections_[section][key] = {value, line_no};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value, int line) {
  if (!valid_name(section) || !valid_name(key)) {
    throw ConfigError("<command line>", 0, "invalid override '" + section + "." + key + "'");
  }
  sections_[section][key] = {value, line};
}

const ConfigValue* Config::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

void Config::fail(const std::string& section, const std::string& key, const std::string& msg) const {
  const ConfigValue* v = find(section, key);
  if (v && v->line == 0) throw ConfigError("<command line>", 0, section + "." + key + ": " + msg);
  int line = v ? v->line : 0;
  if (!v) {
    auto s = section_line_.find(section);
    if (s != section_line_.end()) line = s->second;
  }
  throw ConfigError(source_, line, section + "." + key + ": " + msg);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& dflt) const {
  const ConfigValue* v = find(section, key);
  return v ? v->value : dflt;
}

double Config::get_double(const std::string& section, const std::string& key, double dflt) const {
  auto v = get_optional_double(section, key);
  return v ? *v : dflt;
}

std::optional<double> Config::get_optional_double(const std::string& section, const std::string& key) const {
  const ConfigValue* v = find(section, key);
  if (!v) return std::nullopt;
  auto d = to_double(v->value);
  if (!d) fail(section, key, "expected a finite number, got '" + v->value + "'");
  return d;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t dflt) const {
  const ConfigValue* v = find(section, key);
  if (!v) return dflt;
  auto d = to_integer<std::int64_t>(v->value);
  if (!d) fail(section, key, "expected an integer, got '" + v->value + "'");
  return *d;
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key, std::uint64_t dflt) const {
  const ConfigValue* v = find(section, key);
  if (!v) return dflt;
  auto d = to_integer<std::uint64_t>(v->value);
  if (!d) fail(section, key, "expected an unsigned 64-bit integer, got '" + v->value + "'");
  return *d;
}

std::vector<int> Config::get_int_list(const std::string& section, const std::string& key,
                                      std::vector<int> dflt) const {
  const ConfigValue* v = find(section, key);
  if (!v) return dflt;
  std::vector<int> out;
  for (const std::string& item : split(v->value, ',')) {
    auto d = to_integer<int>(item);
    if (!d) fail(section, key, "expected a comma-separated integer list, got '" + v->value + "'");
    out.push_back(*d);
  }
  if (out.empty()) fail(section, key, "empty list");
  return out;
}

std::vector<double> Config::get_grid(const std::string& section, const std::string& key,
                                     std::vector<double> dflt) const {
  const ConfigValue* v = find(section, key);
  if (!v || v->value == "default") return dflt;
  const std::string& s = v->value;
  auto colon = split(s, ':');
  try {
    if (colon.size() == 4 && (colon[0] == "linear" || colon[0] == "log")) {
      auto lo = to_double(colon[1]), hi = to_double(colon[2]);
      auto n = to_integer<int>(colon[3]);
      if (!lo || !hi || !n) fail(section, key, "bad grid '" + s + "'");
      return colon[0] == "log" ? log_grid(*lo, *hi, *n) : linear_grid(*lo, *hi, *n);
    }
  } catch (const std::invalid_argument& e) {
    fail(section, key, e.what());
  }
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) {
    auto d = to_double(item);
    if (!d) fail(section, key, "expected 'a,b,c', 'linear:lo:hi:n', 'log:lo:hi:n' or 'default', got '" + s + "'");
    out.push_back(*d);
  }
  if (out.empty()) fail(section, key, "empty grid");
  return out;
}

void Config::check_schema(const std::map<std::string, std::vector<std::string>>& schema) const {
  for (const auto& [name, keys] : sections_) {
    auto s = schema.find(name);
    if (s == schema.end()) {
      auto l = section_line_.find(name);
      throw ConfigError(l == section_line_.end() ? "<command line>" : source_,
                        l == section_line_.end() ? 0 : l->second, "unknown section [" + name + "]");
    }
    for (const auto& [key, v] : keys) {
      if (std::find(s->second.begin(), s->second.end(), key) == s->second.end()) {
        fail(name, key, "unknown key (known: " + [&] {
          std::string k;
          for (const std::string& x : s->second) k += (k.empty() ? "" : ", ") + x;
          return k;
        }() + ")");
      }
    }
  }
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [name, keys] : sections_) {
    out += "[" + name + "]\n";
    for (const auto& [k, v] : keys) out += k + " = " + v.value + "\n";
  }
  return out;
}

const std::map<std::string, std::vector<std::string>>& run_config_schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"run", {"experiment", "seed", "workers", "out", "shots"}},
      {"noise", {"p_a", "p1", "p2", "theta"}},
      {"physical",
       {"snr", "tau_meas_s", "delta_over_kT", "L_over_xi", "delta_eV", "tau_elph_s", "eps_mst_eV", "eps_res_eV",
        "psd_plus", "psd_minus", "p2"}},
      {"mbqb", {"instruments", "p_f", "k", "batch_steps"}},
      {"braid", {"class", "p2", "p1_grid", "pa_grid"}},
      {"qed", {"p_a", "p1_grid", "p2_grid", "rounds", "theta"}},
      {"lifetime", {"basis", "idle"}},
      {"tgate", {"delta"}},
  };
  return s;
}

PhysicalParams physical_params(const Config& c) {
  PhysicalParams p;
  const std::string s = "physical";
  p.snr = c.get_optional_double(s, "snr");
  p.tau_meas = c.get_optional_double(s, "tau_meas_s");
  p.delta_over_kT = c.get_optional_double(s, "delta_over_kT");
  p.L_over_xi = c.get_optional_double(s, "L_over_xi");
  p.delta = c.get_optional_double(s, "delta_eV");
  p.tau_elph = c.get_optional_double(s, "tau_elph_s");
  p.eps_mst = c.get_optional_double(s, "eps_mst_eV");
  p.eps_res = c.get_optional_double(s, "eps_res_eV");
  p.psd_plus = c.get_optional_double(s, "psd_plus");
  p.psd_minus = c.get_optional_double(s, "psd_minus");
  p.p2 = c.get_double(s, "p2", 0.0);
  return p;
}

namespace {

// Maps a validation message ("name ...") back to the config key.
[[noreturn]] void rethrow_at_key(const Config& c, const std::string& section, const std::string& msg) {
  const auto& keys = run_config_schema().at(section);
  std::string best;
  for (const std::string& k : keys) {
    if (msg.rfind(k, 0) == 0 && k.size() > best.size() && c.has(section, k)) best = k;
  }
  if (best.empty()) {
    for (const std::string& k : keys) {
      if (msg.find(k) != std::string::npos) {
        best = k;
        break;
      }
    }
  }
  if (!best.empty()) c.fail(section, best, msg);
  throw ConfigError(c.source(), 0, "[" + section + "] " + msg);
}

}  // namespace

ResolvedNoise resolve_noise(const Config& c) {
  ResolvedNoise r;
  if (c.has_section("physical")) {
    if (c.has_section("noise")) throw ConfigError(c.source(), 0, "give either [noise] or [physical], not both");
    PhysicalParams p = physical_params(c);
    try {
      r.derivation = derive_noise(p);
    } catch (const std::invalid_argument& e) {
      rethrow_at_key(c, "physical", e.what());
    }
    r.physical = p;
    r.noise = r.derivation->noise;
    return r;
  }
  r.noise.p_a = c.get_double("noise", "p_a", 0.0);
  r.noise.p1 = c.get_double("noise", "p1", 0.0);
  r.noise.p2 = c.get_double("noise", "p2", 0.0);
  r.noise.theta = c.get_double("noise", "theta", 0.0);
  try {
    r.noise.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_at_key(c, "noise", e.what());
  }
  return r;
}

}  // namespace tetron
