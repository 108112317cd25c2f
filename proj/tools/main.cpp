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

// refim: run scenarios, parameter sweeps and the brute-force comparison.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "outputs.hpp"
#include "refim/engine.hpp"
#include "refim/oracle.hpp"

namespace {

using namespace refim;
using refim::cli::ConfigError;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> algo;
  std::optional<std::size_t> slots;
};

Scenario resolve(const std::string& source, const Overrides& o) {
  Scenario s = cli::load_scenario(source);
  nlohmann::json patch = nlohmann::json::object();
  if (o.seed) patch["seed"] = *o.seed;
  if (o.algo) patch["algorithm"] = *o.algo;
  if (o.slots) patch["slots"] = *o.slots;
  return cli::apply_config(patch, s);
}

void print_header() {
  std::printf("%-10s %14s %14s %14s\n", "algorithm", "GAT[bps]", "AET[bps]",
              "AAT[bps]");
}

void print_row(const std::string& label, const RunResult& r) {
  std::printf("%-10s %14.6g %14.6g %14.6g\n", label.c_str(), r.gat_bps,
              r.aet_bps, r.aat_bps);
}

int cmd_run(const std::string& source, const Overrides& o,
            const std::string& out_dir, bool dump_powers) {
  Scenario s = resolve(source, o);
  s.trace.powers = dump_powers;
  const Network network = build_network(s.network, s.seed);
  const RunResult r = run(s, network);
  std::vector<cli::OutputFile> files = {
      {"summary.json", cli::summary_json(s, r)},
      {"users.csv", cli::users_csv(network, r)}};
  if (dump_powers) files.emplace_back("powers.csv", cli::powers_csv(r));
  cli::write_outputs(out_dir, files);
  print_header();
  print_row(std::string(to_string(s.algorithm)), r);
  if (r.power_violations + r.schedule_violations > 0) {
    std::fprintf(stderr, "warning: %zu power and %zu schedule violations\n",
                 r.power_violations, r.schedule_violations);
  }
  return kOk;
}

int cmd_sweep(const std::string& source, const Overrides& o,
              const std::string& axis_name, const std::string& values_text,
              const std::string& out_dir, std::size_t threads) {
  const Scenario base = resolve(source, o);
  SweepAxis axis;
  std::vector<std::string> values;
  try {
    axis = parse_sweep_axis(axis_name);
    values = parse_sweep_values(values_text);
    sweep_points(base, axis, values);  // validates every point up front
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::vector<SweepRow> rows = sweep(base, axis, values, threads);
  const std::vector<cli::OutputFile> files = {
      {"sweep.csv", cli::sweep_csv(base, axis, rows)}};
  cli::write_outputs(out_dir, files);
  std::printf("%-10s %14s %14s %14s\n", std::string(to_string(axis)).c_str(),
              "GAT[bps]", "AET[bps]", "AAT[bps]");
  for (const SweepRow& row : rows) print_row(row.value, row.result);
  return kOk;
}

int cmd_oracle(const std::string& source, const Overrides& o,
               std::size_t levels) {
  const Scenario s = resolve(source, o);
  const Network network = build_network(s.network, s.seed);
  GridSpec grid;
  grid.levels = levels;
  OracleResult best;
  const ChannelModel channel(network, s.propagation, s.seed);
  const GainSnapshot gains = channel.snapshot(0);
  const std::vector<double> weights(network.user_count(), 1.0);
  try {
    best = brute_force(network, gains, weights, grid, s.propagation.sinr_gap);
  } catch (const OracleRefused& e) {
    throw ConfigError(std::string("oracle refused: ") + e.what());
  }
  std::printf("%-10s %14s %9s\n", "algorithm", "objective", "ratio");
  std::printf("%-10s %14.6g %8.2f%%\n", "oracle", best.objective, 100.0);
  for (Algorithm a : {Algorithm::kRefim, Algorithm::kWf, Algorithm::kEq}) {
    const StaticResult r = evaluate_static(network, gains, weights, a, 50,
                                           s.feedback, s.propagation.sinr_gap);
    const double ratio =
        best.objective > 0.0 ? 100.0 * r.objective / best.objective : 0.0;
    std::printf("%-10s %14.6g %8.2f%%\n", std::string(to_string(a)).c_str(),
                r.objective, ratio);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-cell OFDMA downlink resource allocation simulator"};
  app.require_subcommand(1);

  std::string source;
  Overrides o;
  std::uint64_t seed = 0;
  std::string algo;
  std::size_t slots = 0;
  auto add_common = [&](CLI::App* cmd, bool with_run_options) {
    cmd->add_option("config", source, "Preset name or JSON scenario file")
        ->required();
    cmd->add_option("--seed", seed, "Scenario seed");
    if (with_run_options) {
      cmd->add_option("--algo", algo, "eq, wf, refim or general");
      cmd->add_option("--slots", slots, "Number of slots")
          ->check(CLI::PositiveNumber);
    }
  };

  std::string out_dir = "out";
  bool dump_powers = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Simulate one scenario");
  add_common(run_cmd, true);
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_flag("--dump-powers", dump_powers, "Also write powers.csv");

  std::string axis;
  std::string values;
  std::size_t threads = 0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--axis", axis,
                        "feedback_period, split_ratio, femto_density, "
                        "ref_count, loop_caps or deployment_fraction")
      ->required();
  sweep_cmd->add_option("--values", values, "a,b,c or lo..hi")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_option("--threads", threads, "Worker threads, 0 = all cores");

  std::size_t levels = 9;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "Compare algorithms with exhaustive search");
  add_common(oracle_cmd, false);
  oracle_cmd->add_option("--levels", levels, "Power levels per subchannel")
      ->check(CLI::Range(2, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  for (CLI::App* cmd : {run_cmd, sweep_cmd, oracle_cmd}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--seed")) o.seed = seed;
    if (cmd != oracle_cmd) {
      if (cmd->count("--algo")) o.algo = algo;
      if (cmd->count("--slots")) o.slots = slots;
    }
  }

  try {
    if (run_cmd->parsed()) return cmd_run(source, o, out_dir, dump_powers);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(source, o, axis, values, out_dir, threads);
    }
    return cmd_oracle(source, o, levels);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
