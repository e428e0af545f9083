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

// Run configuration: "[section]" headers and "key = value" lines, '#'
// comments. Every value remembers its line for diagnostics.

#ifndef TETRON_CONFIG_HPP_
#define TETRON_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tetron/channels.hpp"

namespace tetron {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigValue {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

class Config {
 public:
  using Section = std::map<std::string, ConfigValue>;

  static Config parse(std::string_view text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  const std::string& source() const { return source_; }
  const std::map<std::string, Section>& sections() const { return sections_; }

  void set(const std::string& section, const std::string& key, const std::string& value, int line = 0);
  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

  std::string get_string(const std::string& section, const std::string& key, const std::string& dflt) const;
  double get_double(const std::string& section, const std::string& key, double dflt) const;
  std::optional<double> get_optional_double(const std::string& section, const std::string& key) const;
  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t dflt) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t dflt) const;
  std::vector<int> get_int_list(const std::string& section, const std::string& key, std::vector<int> dflt) const;
  // Grid syntax: "a,b,c", "linear:lo:hi:n" or "log:lo:hi:n"; "default" keeps dflt.
  std::vector<double> get_grid(const std::string& section, const std::string& key, std::vector<double> dflt) const;

  // Rejects sections and keys outside the schema.
  void check_schema(const std::map<std::string, std::vector<std::string>>& schema) const;

  // Canonical text (sorted sections and keys).
  std::string to_text() const;

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const;

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;

  std::string source_ = "<config>";
  std::map<std::string, Section> sections_;
  std::map<std::string, int> section_line_;
};

// Sections and keys understood by the runner.
const std::map<std::string, std::vector<std::string>>& run_config_schema();

// Noise from [noise], or derived from [physical] when that section is
// present. Errors carry the line of the offending value.
struct ResolvedNoise {
  NoiseParams noise;
  std::optional<NoiseDerivation> derivation;
  std::optional<PhysicalParams> physical;
};

ResolvedNoise resolve_noise(const Config& c);
PhysicalParams physical_params(const Config& c);

}  // namespace tetron

#endif  // TETRON_CONFIG_HPP_
