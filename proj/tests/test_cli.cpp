// Copyright 2026 The refim-sim Authors
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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "config.hpp"
#include "doctest.h"
#include "outputs.hpp"

using namespace refim;
using namespace refim::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int invoke(const std::string& args) {
  const std::string cmd = std::string(REFIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("refim_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("every preset validates") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(validate(preset(name)));
  }
  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("config keys apply and unknown keys are rejected") {
  const Scenario base = preset("toy");
  const Scenario s = apply_config(
      nlohmann::json{{"slots", 300}, {"algorithm", "wf"}, {"feedback_period_slots", 7},
                     {"sinr_gap_db", 3.0}},
      base);
  CHECK(s.slots == 300);
  CHECK(s.algorithm == Algorithm::kWf);
  CHECK(s.feedback.period_slots == 7);
  CHECK(s.propagation.sinr_gap == doctest::Approx(std::pow(10.0, 0.3)));
  CHECK_THROWS_AS(apply_config(nlohmann::json{{"slotz", 3}}, base), ConfigError);
  CHECK_THROWS_AS(apply_config(nlohmann::json{{"slots", "many"}}, base), ConfigError);
  CHECK_THROWS_AS(apply_config(nlohmann::json{{"warmup_slots", 5000}}, base), ConfigError);
  CHECK_THROWS_AS(apply_config(nlohmann::json::array(), base), ConfigError);
}

TEST_CASE("scenario json round-trips and hashes stably") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const Scenario s = preset(name);
    const nlohmann::json doc = to_json(s);
    const Scenario back = apply_config(doc, Scenario{});
    CHECK(to_json(back) == doc);
    CHECK(config_hash(back) == config_hash(s));
  }
  Scenario a = preset("toy");
  Scenario b = a;
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hash_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("scenario files may start from a preset") {
  const fs::path dir = scratch("load");
  const fs::path file = dir / "s.json";
  std::ofstream(file) << R"({"preset": "toy", "slots": 120, "seed": 9})";
  const Scenario s = load_scenario(file.string());
  CHECK(s.slots == 120);
  CHECK(s.seed == 9);
  CHECK(s.network.layout == Layout::kToy);
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(load_scenario((dir / "bad.json").string()), ConfigError);
  CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("run writes identical files on rerun") {
  const fs::path a = scratch("run_a");
  const fs::path b = scratch("run_b");
  REQUIRE(invoke("run toy --slots 150 --dump-powers --out " + a.string()) == 0);
  REQUIRE(invoke("run toy --slots 150 --dump-powers --out " + b.string()) == 0);
  for (const char* name : {"summary.json", "users.csv", "powers.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(summary.at("algorithm") == "refim");
  CHECK(summary.at("slots") == 150);
  CHECK(summary.at("power_violations") == 0);
  CHECK(summary.at("config_hash").get<std::string>().size() == 16);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("configuration errors exit with 1 and write nothing") {
  const fs::path out = scratch("bad");
  CHECK(invoke("run /nonexistent/scenario.json --out " + out.string()) == 1);
  CHECK(invoke("run toy --algo nope --out " + out.string()) == 1);
  CHECK(invoke("run toy --frobnicate --out " + out.string()) == 1);
  CHECK(invoke("sweep toy --axis nope --values 1,2 --out " + out.string()) == 1);
  CHECK(fs::is_empty(out));
  fs::remove_all(out);
}

TEST_CASE("sweep and oracle subcommands") {
  const fs::path out = scratch("sweep");
  REQUIRE(invoke("sweep toy --slots 120 --axis ref_count --values 0..2 --threads 1 --out " +
                 out.string()) == 0);
  const std::string csv = slurp(out / "sweep.csv");
  CHECK(csv.rfind("axis,value,seed,gat_bps", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  fs::remove_all(out);
  CHECK(invoke("oracle toy --levels 5") == 0);
}
