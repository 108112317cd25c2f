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

#include "refim/power.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace refim {

PowerMatrix::PowerMatrix(std::vector<double> budgets, std::vector<double> masks,
                         std::size_t subchannel_count)
    : subchannel_count_(subchannel_count),
      p_(budgets.size() * subchannel_count, 0.0),
      budgets_(std::move(budgets)),
      masks_(std::move(masks)) {
  if (masks_.size() != budgets_.size() * subchannel_count_) {
    throw std::invalid_argument("mask table has the wrong size");
  }
}

PowerMatrix PowerMatrix::for_network(const Network& network) {
  const std::size_t S = network.subchannel_count();
  std::vector<double> budgets;
  std::vector<double> masks;
  for (const BaseStation& bs : network.base_stations()) {
    budgets.push_back(bs.max_power_w);
    masks.insert(masks.end(), bs.mask_w.begin(), bs.mask_w.end());
  }
  return PowerMatrix(std::move(budgets), std::move(masks), S);
}

void PowerMatrix::set_row(BsIndex n, std::span<const double> values) {
  if (values.size() != subchannel_count_) {
    throw std::invalid_argument("power row has the wrong size");
  }
  std::copy(values.begin(), values.end(), row(n).begin());
}

double PowerMatrix::total(BsIndex n) const {
  const auto r = row(n);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

std::size_t PowerMatrix::violations(double rel_tol) const {
  std::size_t bad = 0;
  for (BsIndex n = 0; n < bs_count(); ++n) {
    if (total(n) > budgets_[n] * (1.0 + rel_tol)) ++bad;
    for (std::size_t s = 0; s < subchannel_count_; ++s) {
      const double p = at(n, s);
      if (!(p >= 0.0) || p > mask(n, s) * (1.0 + rel_tol)) ++bad;
    }
  }
  return bad;
}

std::vector<double> equal_power(double budget_w,
                                std::span<const double> mask_w) {
  std::vector<double> p(mask_w.size());
  const double share = budget_w / static_cast<double>(mask_w.size());
  for (std::size_t s = 0; s < p.size(); ++s) p[s] = std::min(share, mask_w[s]);
  return p;
}

std::vector<double> equal_power_on_allowed(double budget_w,
                                           std::span<const double> mask_w) {
  const auto allowed = std::count_if(mask_w.begin(), mask_w.end(),
                                     [](double m) { return m > 0.0; });
  std::vector<double> p(mask_w.size(), 0.0);
  if (allowed == 0) return p;
  const double share = budget_w / static_cast<double>(allowed);
  for (std::size_t s = 0; s < p.size(); ++s) p[s] = std::min(share, mask_w[s]);
  return p;
}

double taxation_term(std::span<const ReferenceMeasurement> references,
                     double sinr_gap) {
  double t = 0.0;
  for (const ReferenceMeasurement& r : references) {
    if (r.interference_noise_w <= 0.0) continue;
    const double gamma = r.signal_w / r.interference_noise_w;
    t += r.weight * r.cross_gain * gamma /
         (sinr_gap * r.interference_noise_w + r.signal_w);
  }
  return t;
}

double kkt_power(double weight, double lambda, double tax,
                 double interference_noise_w, double own_gain, double mask_w,
                 double sinr_gap) {
  if (own_gain <= 0.0 || weight <= 0.0 || mask_w <= 0.0) return 0.0;
  const double denom = lambda * std::numbers::ln2 + tax;
  if (denom <= 0.0) return mask_w;
  const double p = weight / denom - sinr_gap * interference_noise_w / own_gain;
  return std::clamp(p, 0.0, mask_w);
}

namespace {

double fill(std::span<const SubchannelInput> inputs, double lambda,
            double sinr_gap, std::vector<double>& out) {
  double sum = 0.0;
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    const SubchannelInput& in = inputs[s];
    out[s] = kkt_power(in.weight, lambda, in.tax, in.interference_noise_w,
                       in.own_gain, in.mask_w, sinr_gap);
    sum += out[s];
  }
  return sum;
}

}  // namespace

BisectionResult allocate_bisection(std::span<const SubchannelInput> inputs,
                                   double budget_w,
                                   const BisectionOptions& options) {
  if (!(budget_w > 0.0)) throw std::invalid_argument("budget must be > 0");
  if (!(options.budget_rel_tol > 0.0) || !(options.lambda_rel_tol > 0.0)) {
    throw std::invalid_argument("bisection tolerances must be > 0");
  }
  BisectionResult result;
  result.powers.assign(inputs.size(), 0.0);
  const double gap = options.sinr_gap;
  if (fill(inputs, 0.0, gap, result.powers) <= budget_w) return result;

  double lambda_max = 0.0;
  for (const SubchannelInput& in : inputs) {
    if (in.weight <= 0.0 || in.own_gain <= 0.0 || in.mask_w <= 0.0) continue;
    lambda_max = std::max(lambda_max, in.weight * in.own_gain /
                                          (gap * in.interference_noise_w *
                                           std::numbers::ln2));
  }
  std::vector<double> p(inputs.size());
  int doublings = 0;
  while (!(lambda_max > 0.0) || fill(inputs, lambda_max, gap, p) > budget_w) {
    if (doublings++ >= options.max_doublings) {
      throw std::runtime_error("bisection could not bracket the multiplier");
    }
    lambda_max = lambda_max > 0.0 ? 2.0 * lambda_max : 1.0;
  }

  const double delta = options.budget_rel_tol * budget_w;
  const double delta_lambda = options.lambda_rel_tol * lambda_max;
  result.lambda_max = lambda_max;
  result.iteration_bound =
      static_cast<int>(std::ceil(std::log2(lambda_max / delta_lambda)));
  double a = 0.0;
  double b = lambda_max;
  while (b - a > delta_lambda) {
    ++result.iterations;
    const double mid = 0.5 * (a + b);
    const double sum = fill(inputs, mid, gap, p);
    if (std::abs(sum - budget_w) < delta) {
      result.powers = p;
      result.lambda = mid;
      return result;
    }
    if (sum > budget_w) {
      a = mid;
    } else {
      b = mid;
    }
  }
  fill(inputs, b, gap, result.powers);
  result.lambda = b;
  return result;
}

PowerMatrix initial_power(InitialPowerRule rule, const PowerMatrix& previous,
                          std::size_t slot, std::mt19937_64& rng) {
  if (rule == InitialPowerRule::kPrevious && slot > 0) return previous;
  PowerMatrix out = previous;
  const std::size_t S = out.subchannel_count();
  for (BsIndex n = 0; n < out.bs_count(); ++n) {
    const auto masks = out.mask_row(n);
    std::vector<double> p = equal_power_on_allowed(out.budget(n), masks);
    if (rule == InitialPowerRule::kRandom) {
      const double cap = out.budget(n) / static_cast<double>(S);
      std::uniform_real_distribution<double> draw(0.0, cap);
      double sum = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        p[s] = masks[s] > 0.0 ? draw(rng) : 0.0;
        sum += p[s];
      }
      if (sum > 0.0) {
        for (std::size_t s = 0; s < S; ++s) {
          p[s] = std::min(p[s] * out.budget(n) / sum, masks[s]);
        }
      }
    }
    out.set_row(n, p);
  }
  return out;
}

BisectionResult water_filling(std::span<const SubchannelInput> inputs,
                              double budget_w,
                              const BisectionOptions& options) {
  std::vector<SubchannelInput> untaxed(inputs.begin(), inputs.end());
  for (SubchannelInput& in : untaxed) in.tax = 0.0;
  return allocate_bisection(untaxed, budget_w, options);
}

BisectionResult refim_step(std::span<const SubchannelInput> inputs,
                           double budget_w, const BisectionOptions& options) {
  return allocate_bisection(inputs, budget_w, options);
}

}  // namespace refim
