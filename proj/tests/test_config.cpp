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

#include <gtest/gtest.h>

#include "tetron/config.hpp"

using namespace tetron;

namespace {

// Line number carried by the error thrown from f, or -1.
template <class F>
int error_line(F f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, ParseSectionsAndComments) {
  Config c = Config::parse("# header\n[run]\nseed = 42  # trailing\n\n[noise]\np1=0.01\n", "x.ini");
  EXPECT_EQ(c.get_uint("run", "seed", 0), 42u);
  EXPECT_DOUBLE_EQ(c.get_double("noise", "p1", 0), 0.01);
  EXPECT_DOUBLE_EQ(c.get_double("noise", "p2", 0.5), 0.5);
  EXPECT_TRUE(c.has_section("noise"));
  EXPECT_FALSE(c.has("noise", "p_a"));
  EXPECT_EQ(c.to_text(), "[noise]\np1 = 0.01\n[run]\nseed = 42\n");
  EXPECT_EQ(Config::parse(c.to_text()).to_text(), c.to_text());
}

TEST(Config, MalformedLinesCarryLineNumbers) {
  EXPECT_EQ(error_line([] { Config::parse("[run]\nseed 3\n"); }), 2);
  EXPECT_EQ(error_line([] { Config::parse("seed = 3\n"); }), 1);
  EXPECT_EQ(error_line([] { Config::parse("[run\n"); }), 1);
  EXPECT_EQ(error_line([] { Config::parse("[run]\nseed=1\nseed=2\n"); }), 3);
  EXPECT_EQ(error_line([] { Config::parse("[run]\n[run]\n"); }), 2);
  try {
    Config::parse("[run]\n\nx\n", "a.ini");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("a.ini:3: ", 0), 0u) << e.what();
  }
}

TEST(Config, TypedGettersReportLine) {
  Config c = Config::parse("[run]\nseed = -1\nworkers = two\n[noise]\np1 = nan\n");
  EXPECT_EQ(error_line([&] { c.get_uint("run", "seed", 0); }), 2);
  EXPECT_EQ(error_line([&] { c.get_int("run", "workers", 1); }), 3);
  EXPECT_EQ(error_line([&] { c.get_double("noise", "p1", 0); }), 5);
  EXPECT_EQ(c.get_int("run", "seed", 0), -1);
}

TEST(Config, Grids) {
  Config c = Config::parse(
      "[qed]\np1_grid = 0.1, 0.2,0.3\np2_grid = linear:0:0.2:5\nrounds = 3,5\n[braid]\np1_grid = log:1e-3:1e-1:3\n"
      "pa_grid = default\np2 = 0.1\n");
  EXPECT_EQ(c.get_grid("qed", "p1_grid", {}), (std::vector<double>{0.1, 0.2, 0.3}));
  std::vector<double> lin = c.get_grid("qed", "p2_grid", {});
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[1], 0.05);
  std::vector<double> lg = c.get_grid("braid", "p1_grid", {});
  ASSERT_EQ(lg.size(), 3u);
  EXPECT_NEAR(lg[1], 1e-2, 1e-15);
  EXPECT_EQ(c.get_grid("braid", "pa_grid", {7.0}), std::vector<double>{7.0});
  EXPECT_EQ(c.get_int_list("qed", "rounds", {}), (std::vector<int>{3, 5}));
  Config bad = Config::parse("[qed]\np1_grid = linear:0:x:5\n");
  EXPECT_EQ(error_line([&] { bad.get_grid("qed", "p1_grid", {}); }), 2);
}

TEST(Config, SchemaRejectsUnknownKeys) {
  Config c = Config::parse("[run]\nseed = 1\n[noise]\np1 = 0.1\npq = 3\n");
  EXPECT_EQ(error_line([&] { c.check_schema(run_config_schema()); }), 5);
  Config s = Config::parse("[run]\nseed=1\n[nois]\np1 = 0.1\n");
  EXPECT_EQ(error_line([&] { s.check_schema(run_config_schema()); }), 3);
  Config ok = Config::parse("[run]\nseed=1\n[noise]\np1 = 0.1\n[tgate]\ndelta = 0.05\n");
  EXPECT_NO_THROW(ok.check_schema(run_config_schema()));
}

TEST(Config, OverridesWin) {
  Config c = Config::parse("[noise]\np1 = 0.1\n");
  c.set("noise", "p1", "0.2");
  EXPECT_DOUBLE_EQ(c.get_double("noise", "p1", 0), 0.2);
  c.set("noise", "p_a", "bad");
  try {
    c.get_double("noise", "p_a", 0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("<command line>"), std::string::npos);
  }
}

TEST(Config, ResolveNoiseDirect) {
  ResolvedNoise r = resolve_noise(Config::parse("[noise]\np_a = 0.01\np1 = 0.02\np2 = 0.03\n"));
  EXPECT_DOUBLE_EQ(r.noise.p_a, 0.01);
  EXPECT_DOUBLE_EQ(r.noise.p1, 0.02);
  EXPECT_DOUBLE_EQ(r.noise.p2, 0.03);
  EXPECT_FALSE(r.derivation.has_value());
  // Out-of-range value is reported at its own line.
  EXPECT_EQ(error_line([] { resolve_noise(Config::parse("[noise]\np1 = 0.1\n\np_a = 0.7\n")); }), 4);
  EXPECT_EQ(error_line([] { resolve_noise(Config::parse("[noise]\np1 = 0.9\n")); }), 2);
  EXPECT_NO_THROW(resolve_noise(Config::parse("")));
}

TEST(Config, ResolveNoisePhysical) {
  const char* text =
      "[physical]\nsnr = 10\ntau_meas_s = 1e-6\ndelta_over_kT = 10\ntau_elph_s = 1e-9\nL_over_xi = 10\n"
      "delta_eV = 1.5e-4\n";
  ResolvedNoise r = resolve_noise(Config::parse(text));
  ASSERT_TRUE(r.derivation.has_value());
  ASSERT_TRUE(r.physical.has_value());
  NoiseDerivation d = derive_noise(physical_params(Config::parse(text)));
  EXPECT_DOUBLE_EQ(r.noise.p1, d.noise.p1);
  EXPECT_DOUBLE_EQ(r.noise.p_a, d.noise.p_a);
  // Missing field points at the section header.
  EXPECT_EQ(error_line([] { resolve_noise(Config::parse("# c\n[physical]\nsnr = 10\n")); }), 2);
  EXPECT_EQ(error_line([] { resolve_noise(Config::parse("[physical]\nsnr = 10\ntau_meas_s = -1\n")); }), 3);
  EXPECT_THROW(resolve_noise(Config::parse("[noise]\np1=0\n[physical]\nsnr=1\n")), ConfigError);
}
