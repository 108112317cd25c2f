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

#ifndef REFIM_GENERAL_ALGORITHM_HPP_
#define REFIM_GENERAL_ALGORITHM_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "refim/channel.hpp"
#include "refim/power.hpp"
#include "refim/power_matrix.hpp"
#include "refim/reference.hpp"
#include "refim/scheduling.hpp"
#include "refim/topology.hpp"

namespace refim {

struct LoopCaps {
  std::size_t scheduling = 1;
  std::size_t power = 1;
};

struct GeneralOptions {
  LoopCaps caps;
  FeedbackConfig feedback;
  BisectionOptions bisection;
  // Inner loop stops once no power moves by more than this many watts.
  double power_tolerance_w = 1e-9;
  // Tables for the first reference selection. Later iterations, and all of
  // them when this is null, read exact gains and the current iterate.
  const CandidateTables* tables = nullptr;
  // Lognormal error (dB) on the interference each scheduled user reports.
  double measurement_noise_db = 0.0;
  std::mt19937_64* measurement_rng = nullptr;
  // Slot number and log for the first index exchange.
  std::size_t slot = 0;
  ProtocolTrace* trace = nullptr;
};

struct BisectionStats {
  std::size_t runs = 0;
  std::size_t bound_violations = 0;
  int max_iterations = 0;

  void add(const BisectionResult& r);
  void merge(const BisectionStats& other);
};

struct GeneralResult {
  ScheduleMap schedule;
  PowerMatrix powers;
  std::size_t scheduling_iterations = 0;
  std::size_t power_iterations = 0;
  // h(p, I) after each scheduling iteration, with I rescheduled for p.
  std::vector<double> objective_trace;
  BisectionStats bisection;
};

// Per-subchannel bisection inputs of BS n for the users in `schedule`.
std::vector<SubchannelInput> power_inputs(
    BsIndex n, const GainSnapshot& gains, const ReceivedField& field,
    const PowerMatrix& powers, const ScheduleMap& schedule,
    std::span<const double> weights,
    std::span<const std::vector<ReferenceInfo>> references, double sinr_gap);

// Scheduling loop around a power loop. Each power iteration recomputes
// taxes and interference for every BS from the current iterate and updates
// all BSs at once. BSs without REFIM run plain water-filling. With caps
// (1, 1) and tables this is exactly one REFIM slot.
GeneralResult general_algorithm(const Network& network,
                                const GainSnapshot& gains,
                                std::span<const double> weights,
                                const PowerMatrix& initial,
                                const GeneralOptions& options);

}  // namespace refim

#endif  // REFIM_GENERAL_ALGORITHM_HPP_
