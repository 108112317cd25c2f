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

#ifndef REFIM_POWER_HPP_
#define REFIM_POWER_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "refim/power_matrix.hpp"

namespace refim {

// min(budget / S, mask) on every subchannel.
std::vector<double> equal_power(double budget_w, std::span<const double> mask_w);

// Same, but the budget is split over the subchannels with a nonzero mask
// only.
std::vector<double> equal_power_on_allowed(double budget_w,
                                           std::span<const double> mask_w);

// What a BS knows about one reference user on one subchannel.
struct ReferenceMeasurement {
  double weight = 0.0;              // w_ref
  double cross_gain = 0.0;          // g from the taxing BS to the reference
  double signal_w = 0.0;            // g p from the reference's own BS
  double interference_noise_w = 0.0;
};

// sum over references of w g gamma / (gap (I + sigma) + g p), gamma being
// the reference's SINR. Zero without references.
double taxation_term(std::span<const ReferenceMeasurement> references,
                     double sinr_gap = 1.0);

// [w / (lambda ln2 + t) - gap (I + sigma) / g] clipped to [0, mask]. A zero
// denominator means an unbounded water level, which the mask caps.
double kkt_power(double weight, double lambda, double tax,
                 double interference_noise_w, double own_gain, double mask_w,
                 double sinr_gap = 1.0);

struct SubchannelInput {
  double weight = 0.0;  // 0 when nobody is scheduled
  double own_gain = 0.0;
  double interference_noise_w = 0.0;
  double tax = 0.0;
  double mask_w = 0.0;
};

struct BisectionOptions {
  double budget_rel_tol = 1e-6;   // delta = budget_rel_tol * budget
  double lambda_rel_tol = 1e-9;   // delta_lambda = lambda_rel_tol * lambda_max
  int max_doublings = 64;
  double sinr_gap = 1.0;
};

struct BisectionResult {
  std::vector<double> powers;
  double lambda = 0.0;
  double lambda_max = 0.0;
  int iterations = 0;
  int iteration_bound = 0;  // ceil(log2(lambda_max / delta_lambda))
};

// Solves the per-BS KKT system for lambda >= 0. Returns the lambda = 0
// allocation when it fits the budget; otherwise bisects on [0, lambda_max]
// and returns the feasible end of the final bracket. Throws
// std::runtime_error when no bracket is found.
BisectionResult allocate_bisection(std::span<const SubchannelInput> inputs,
                                   double budget_w,
                                   const BisectionOptions& options = {});

enum class InitialPowerRule { kUniform, kRandom, kPrevious };

// Uniform: budget / S clipped to the mask. Random: U(0, budget / S) per
// subchannel, rescaled to spend the budget (then clipped to the mask).
// Previous: `previous`, or uniform when `slot` is 0.
PowerMatrix initial_power(InitialPowerRule rule, const PowerMatrix& previous,
                          std::size_t slot, std::mt19937_64& rng);

// Water-filling level for one BS: taxes ignored.
BisectionResult water_filling(std::span<const SubchannelInput> inputs,
                              double budget_w,
                              const BisectionOptions& options = {});

// One REFIM power update for one BS: inputs already hold the measured
// interference at the scheduled users and the taxes from the selected
// references.
BisectionResult refim_step(std::span<const SubchannelInput> inputs,
                           double budget_w,
                           const BisectionOptions& options = {});

}  // namespace refim

#endif  // REFIM_POWER_HPP_
