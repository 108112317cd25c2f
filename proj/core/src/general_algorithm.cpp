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

#include "refim/general_algorithm.hpp"

#include <algorithm>
#include <cmath>

namespace refim {

void BisectionStats::add(const BisectionResult& r) {
  ++runs;
  max_iterations = std::max(max_iterations, r.iterations);
  if (r.iterations > r.iteration_bound && r.iterations > 0) ++bound_violations;
}

void BisectionStats::merge(const BisectionStats& other) {
  runs += other.runs;
  bound_violations += other.bound_violations;
  max_iterations = std::max(max_iterations, other.max_iterations);
}

std::vector<SubchannelInput> power_inputs(
    BsIndex n, const GainSnapshot& gains, const ReceivedField& field,
    const PowerMatrix& powers, const ScheduleMap& schedule,
    std::span<const double> weights,
    std::span<const std::vector<ReferenceInfo>> references, double sinr_gap) {
  const std::size_t S = gains.subchannel_count;
  std::vector<SubchannelInput> inputs(S);
  std::vector<ReferenceMeasurement> measured;
  for (std::size_t s = 0; s < S; ++s) {
    SubchannelInput& in = inputs[s];
    in.mask_w = powers.mask(n, s);
    const UserIndex k = schedule.at(n, s);
    if (k == kNoUser) continue;
    in.weight = weights[k];
    in.own_gain = gains.gain(k, n, s);
    in.interference_noise_w = field.interference_noise(k, n, s);
    if (!references.empty()) {
      measured.clear();
      for (const ReferenceInfo& r : references[s]) {
        measured.push_back(r.measurement);
      }
      in.tax = taxation_term(measured, sinr_gap);
    }
  }
  return inputs;
}

GeneralResult general_algorithm(const Network& network,
                                const GainSnapshot& gains,
                                std::span<const double> weights,
                                const PowerMatrix& initial,
                                const GeneralOptions& options) {
  const std::size_t N = network.bs_count();
  const std::size_t S = network.subchannel_count();
  const double gap = options.bisection.sinr_gap;
  const std::size_t ref_count = options.feedback.reference_count;
  const std::size_t sched_cap = std::max<std::size_t>(options.caps.scheduling, 1);
  const std::size_t power_cap = std::max<std::size_t>(options.caps.power, 1);

  GeneralResult result;
  result.powers = initial;
  bool first_selection = true;
  std::vector<std::vector<ReferenceInfo>> refs(S);

  for (std::size_t outer = 0; outer < sched_cap; ++outer) {
    ScheduleMap schedule =
        schedule_all(network, gains, result.powers, weights, gap);
    if (outer > 0 && schedule == result.schedule) break;
    result.schedule = std::move(schedule);
    ++result.scheduling_iterations;
    const NeighborView view = exchange_scheduled_indices(
        network, result.schedule, result.powers, options.feedback,
        options.slot, outer == 0 ? options.trace : nullptr);

    for (std::size_t inner = 0; inner < power_cap; ++inner) {
      ++result.power_iterations;
      const ReceivedField field(gains, result.powers);
      PowerMatrix next = result.powers;
      for (BsIndex n = 0; n < N; ++n) {
        const bool taxed = network.bs(n).refim_enabled && ref_count > 0;
        for (std::size_t s = 0; s < S; ++s) {
          refs[s].clear();
          if (!taxed || result.schedule.at(n, s) == kNoUser) continue;
          refs[s] = first_selection && options.tables != nullptr
                        ? select_reference(network, n, s, view,
                                           *options.tables, ref_count)
                        : select_reference_exact(n, s, view, gains, field,
                                                 weights, ref_count);
        }
        std::vector<SubchannelInput> inputs =
            power_inputs(n, gains, field, result.powers, result.schedule,
                         weights, refs, gap);
        if (options.measurement_noise_db > 0.0 &&
            options.measurement_rng != nullptr) {
          std::normal_distribution<double> err(0.0,
                                               options.measurement_noise_db);
          for (SubchannelInput& in : inputs) {
            in.interference_noise_w *=
                std::pow(10.0, err(*options.measurement_rng) / 10.0);
          }
        }
        const BisectionResult r =
            allocate_bisection(inputs, result.powers.budget(n),
                               options.bisection);
        result.bisection.add(r);
        next.set_row(n, r.powers);
      }
      first_selection = false;
      double change = 0.0;
      for (std::size_t i = 0; i < next.values().size(); ++i) {
        change = std::max(change,
                          std::abs(next.values()[i] - result.powers.values()[i]));
      }
      result.powers = std::move(next);
      if (change < options.power_tolerance_w) break;
    }
    if (sched_cap > 1) {
      const ScheduleMap best =
          schedule_all(network, gains, result.powers, weights, gap);
      result.objective_trace.push_back(
          objective(gains, result.powers, best, weights, gap));
    }
  }
  return result;
}

}  // namespace refim
