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

#ifndef REFIM_ENGINE_HPP_
#define REFIM_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refim/channel.hpp"
#include "refim/general_algorithm.hpp"
#include "refim/power.hpp"
#include "refim/reference.hpp"
#include "refim/scheduling.hpp"
#include "refim/topology.hpp"

namespace refim {

enum class Layout { kHexGrid, kTwoCell, kHeterogeneous, kMixedDensity, kToy };

struct NetworkSpec {
  Layout layout = Layout::kHexGrid;
  // Hex grid, also the macro layer of heterogeneous layouts.
  int rings = 2;
  double isd_m = 1000.0;
  bool wrap = false;
  // Two-cell line.
  double bs_distance_m = 2000.0;
  Band center_band{200.0, 400.0};
  Band edge_band{700.0, 900.0};
  std::size_t users_per_group = 5;
  // Femto overlay.
  std::size_t femtos_per_macro = 0;
  DeploymentMix mix;
  double home_size_m = 10.0;
  // Toy line: `toy_bs_count` BSs `isd_m` apart, users in a disc of radius
  // isd_m / 2 around each.
  std::size_t toy_bs_count = 2;
  UserCounts users;
  MobilityKind mobility = MobilityKind::kNomadic;
  double speed_kmh = 3.0;
  double deployment_fraction = 1.0;
  BsDefaults bs;
};

void validate(const NetworkSpec& spec);

Network build_network(const NetworkSpec& spec, std::uint64_t seed);

enum class Algorithm { kEq, kWf, kRefim, kGeneral };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct SpectrumPolicy {
  bool splitting = false;
  std::size_t macro_subchannels = 0;  // macro/pico use [0, m), femto [m, S)
};

struct TraceOptions {
  bool powers = false;
  bool schedule = false;
  bool protocol = false;
  std::size_t from_slot = 0;
  std::size_t to_slot = std::numeric_limits<std::size_t>::max();
};

struct Scenario {
  NetworkSpec network;
  PropagationConfig propagation;
  Algorithm algorithm = Algorithm::kRefim;
  LoopCaps caps;
  FeedbackConfig feedback;
  InitialPowerRule initial_power = InitialPowerRule::kPrevious;
  SpectrumPolicy spectrum;
  Utility utility;
  std::size_t slots = 2000;
  std::size_t warmup = 500;
  std::uint64_t seed = 1;
  double slot_s = 1e-3;
  double ewma_beta = 1e-3;
  double initial_throughput_bps = 1e-3;
  double measurement_noise_db = 0.0;
  TraceOptions trace;
};

// Throws std::invalid_argument on inconsistent settings.
void validate(const Scenario& scenario);

struct RunResult {
  // Mean served rate over the slots after warmup, per user.
  std::vector<double> throughput_bps;
  // EWMA at the end of the run, per user.
  std::vector<double> final_ewma_bps;
  std::vector<bool> edge;
  double gat_bps = 0.0;
  double aet_bps = 0.0;
  double aat_bps = 0.0;
  std::size_t zero_throughput_users = 0;
  std::size_t power_violations = 0;
  std::size_t schedule_violations = 0;
  BisectionStats bisection;
  std::size_t slots = 0;
  std::size_t bs_count = 0;
  std::size_t subchannel_count = 0;
  // Recorded slots [trace_from, trace_from + traced_slots), laid out
  // [slot][n][s].
  std::size_t trace_from = 0;
  std::size_t traced_slots = 0;
  std::vector<double> power_trace;
  std::vector<UserIndex> schedule_trace;
  std::optional<ProtocolTrace> protocol;
};

// Applies the spectrum policy to the network's masks.
PowerMatrix effective_powers(const Network& network,
                             const SpectrumPolicy& policy);

RunResult run(const Scenario& scenario);
RunResult run(const Scenario& scenario, const Network& network);

// Runs independent scenarios on up to `threads` workers (0: one per core).
std::vector<RunResult> run_all(std::span<const Scenario> scenarios,
                               std::size_t threads = 0);

enum class SweepAxis {
  kFeedbackPeriod,
  kSplitRatio,
  kFemtoDensity,
  kRefCount,
  kLoopCaps,
  kDeploymentFraction,
};

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

// "a,b,c" or an integer range "lo..hi".
std::vector<std::string> parse_sweep_values(std::string_view text);

struct SweepPoint {
  std::string value;
  Scenario scenario;
};

// One scenario per value. Split-ratio sweeps get an extra "sharing" row
// that runs the base scenario with universal reuse.
std::vector<SweepPoint> sweep_points(const Scenario& base, SweepAxis axis,
                                     std::span<const std::string> values);

struct SweepRow {
  std::string value;
  RunResult result;
};

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            std::span<const std::string> values,
                            std::size_t threads = 0);

struct StaticResult {
  PowerMatrix powers;
  ScheduleMap schedule;
  double objective = 0.0;
  BisectionStats bisection;
};

// One frozen snapshot with fixed weights: EQ directly, WF and REFIM by
// repeating the per-slot update `passes` times from uniform powers with
// exact, fresh feedback. The objective uses the best schedule for the final
// powers.
StaticResult evaluate_static(const Network& network, const GainSnapshot& gains,
                             std::span<const double> weights,
                             Algorithm algorithm, std::size_t passes = 50,
                             const FeedbackConfig& feedback = {},
                             double sinr_gap = 1.0);

}  // namespace refim

#endif  // REFIM_ENGINE_HPP_
