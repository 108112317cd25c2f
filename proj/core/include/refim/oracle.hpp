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

#ifndef REFIM_ORACLE_HPP_
#define REFIM_ORACLE_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include "refim/channel.hpp"
#include "refim/power_matrix.hpp"
#include "refim/scheduling.hpp"
#include "refim/topology.hpp"

namespace refim {

struct GridSpec {
  std::size_t levels = 9;  // {0, 1/(L-1), ..., 1} * mask per subchannel
  double cap = 1e7;        // max power-and-schedule combinations
  std::size_t max_bs = 3;
  std::size_t max_subchannels = 2;
  std::size_t max_users_per_bs = 2;
};

// Thrown when an instance is outside the grid limits or too large.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// L^(N S) * prod_n |K_n|^S.
double combination_count(const Network& network, const GridSpec& grid);

struct OracleResult {
  double objective = 0.0;
  PowerMatrix powers;
  ScheduleMap schedule;
  std::size_t feasible_power_points = 0;
};

// Exhaustive maximum of sum_k w_k sum_s r over budget-feasible grid powers
// and every schedule. Rates use a unit subchannel bandwidth. Ties keep the
// lexicographically first candidate.
OracleResult brute_force(const Network& network, const GainSnapshot& gains,
                         std::span<const double> weights,
                         const GridSpec& grid = {}, double sinr_gap = 1.0);

}  // namespace refim

#endif  // REFIM_ORACLE_HPP_
