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

#ifndef REFIM_TOOLS_OUTPUTS_HPP_
#define REFIM_TOOLS_OUTPUTS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "refim/engine.hpp"

namespace refim::cli {

// Column orders are frozen:
//   users.csv   user_id,serving_bs,tier,R_bps,is_edge
//   powers.csv  slot,bs,subchannel,watts
//   sweep.csv   axis,value,seed,gat_bps,aet_bps,aat_bps,
//               zero_throughput_users,power_violations,schedule_violations
std::string summary_json(const Scenario& scenario, const RunResult& result);
std::string users_csv(const Network& network, const RunResult& result);
std::string powers_csv(const RunResult& result);
std::string sweep_csv(const Scenario& base, SweepAxis axis,
                      std::span<const SweepRow> rows);

using OutputFile = std::pair<std::string, std::string>;  // name, contents

// Writes every file into `dir` (created if missing). If any write fails the
// files written so far are removed again and std::runtime_error is thrown.
void write_outputs(const std::filesystem::path& dir,
                   std::span<const OutputFile> files);

}  // namespace refim::cli

#endif  // REFIM_TOOLS_OUTPUTS_HPP_
