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

#include "outputs.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "config.hpp"
#include "json.hpp"

namespace refim::cli {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string summary_json(const Scenario& scenario, const RunResult& result) {
  nlohmann::json j;
  j["algorithm"] = std::string(to_string(scenario.algorithm));
  j["seed"] = scenario.seed;
  j["config_hash"] = hash_hex(config_hash(scenario));
  j["gat_bps"] = result.gat_bps;
  j["aet_bps"] = result.aet_bps;
  j["aat_bps"] = result.aat_bps;
  j["slots"] = result.slots;
  j["warmup_slots"] = scenario.warmup;
  j["users"] = result.throughput_bps.size();
  j["base_stations"] = result.bs_count;
  j["subchannels"] = result.subchannel_count;
  j["zero_throughput_users"] = result.zero_throughput_users;
  j["power_violations"] = result.power_violations;
  j["schedule_violations"] = result.schedule_violations;
  j["bisection_runs"] = result.bisection.runs;
  j["bisection_max_iterations"] = result.bisection.max_iterations;
  j["bisection_bound_violations"] = result.bisection.bound_violations;
  j["config"] = to_json(scenario);
  return j.dump(2) + "\n";
}

std::string users_csv(const Network& network, const RunResult& result) {
  std::string out = "user_id,serving_bs,tier,R_bps,is_edge\n";
  for (const User& u : network.users()) {
    out += std::to_string(u.id) + "," + std::to_string(u.serving_bs) + "," +
           std::string(to_string(network.bs(u.serving_bs).tier)) + "," +
           num(result.throughput_bps[u.id]) + "," +
           (result.edge[u.id] ? "1" : "0") + "\n";
  }
  return out;
}

std::string powers_csv(const RunResult& result) {
  std::string out = "slot,bs,subchannel,watts\n";
  const std::size_t N = result.bs_count;
  const std::size_t S = result.subchannel_count;
  for (std::size_t t = 0; t < result.traced_slots; ++t) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t s = 0; s < S; ++s) {
        out += std::to_string(result.trace_from + t) + "," +
               std::to_string(n) + "," + std::to_string(s) + "," +
               num(result.power_trace[(t * N + n) * S + s]) + "\n";
      }
    }
  }
  return out;
}

std::string sweep_csv(const Scenario& base, SweepAxis axis,
                      std::span<const SweepRow> rows) {
  std::string out =
      "axis,value,seed,gat_bps,aet_bps,aat_bps,zero_throughput_users,"
      "power_violations,schedule_violations\n";
  for (const SweepRow& row : rows) {
    const RunResult& r = row.result;
    out += std::string(to_string(axis)) + "," + row.value + "," +
           std::to_string(base.seed) + "," + num(r.gat_bps) + "," +
           num(r.aet_bps) + "," + num(r.aat_bps) + "," +
           std::to_string(r.zero_throughput_users) + "," +
           std::to_string(r.power_violations) + "," +
           std::to_string(r.schedule_violations) + "\n";
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir,
                   std::span<const OutputFile> files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  for (const auto& [name, contents] : files) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    out.close();
    if (!out) {
      for (const fs::path& p : written) fs::remove(p, ec);
      fs::remove(path, ec);
      throw std::runtime_error("cannot write " + path.string());
    }
    written.push_back(path);
  }
}

}  // namespace refim::cli
