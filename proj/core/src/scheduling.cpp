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

#include "refim/scheduling.hpp"

#include <cmath>
#include <stdexcept>

namespace refim {

double sinr(const GainSnapshot& gains, const PowerMatrix& powers, UserIndex k,
            BsIndex n, std::size_t s) {
  double interference = 0.0;
  for (BsIndex m = 0; m < gains.bs_count; ++m) {
    if (m != n) interference += gains.gain(k, m, s) * powers.at(m, s);
  }
  return gains.gain(k, n, s) * powers.at(n, s) /
         (interference + gains.noise_w(k, s));
}

double rate(double gamma, double sinr_gap, double subchannel_bandwidth_hz) {
  return subchannel_bandwidth_hz * std::log2(1.0 + gamma / sinr_gap);
}

ReceivedField::ReceivedField(const GainSnapshot& gains,
                             const PowerMatrix& powers)
    : gains_(&gains),
      powers_(&powers),
      subchannel_count_(gains.subchannel_count),
      total_(gains.user_count * gains.subchannel_count, 0.0) {
  const std::size_t S = subchannel_count_;
  for (UserIndex k = 0; k < gains.user_count; ++k) {
    double* out = &total_[k * S];
    for (BsIndex m = 0; m < gains.bs_count; ++m) {
      const double* g = &gains.gains[(k * gains.bs_count + m) * S];
      const auto p = powers.row(m);
      for (std::size_t s = 0; s < S; ++s) out[s] += g[s] * p[s];
    }
  }
}

double ReceivedField::interference_noise(UserIndex k, BsIndex n,
                                         std::size_t s) const {
  const double in = total(k, s) - signal(k, n, s);
  return std::max(in, 0.0) + gains_->noise_w(k, s);
}

std::vector<UserState> initial_user_states(std::size_t user_count,
                                           double initial_throughput_bps) {
  if (!(initial_throughput_bps > 0.0)) {
    throw std::invalid_argument("initial throughput must be > 0");
  }
  return std::vector<UserState>(
      user_count, UserState{initial_throughput_bps, 1.0 / initial_throughput_bps});
}

std::vector<double> update_weights(std::span<UserState> states,
                                   const Utility& utility) {
  std::vector<double> w(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double r = states[k].avg_throughput_bps;
    states[k].weight = utility.kind == UtilityKind::kLog || utility.alpha == 1.0
                           ? 1.0 / r
                           : std::pow(r, -utility.alpha);
    w[k] = states[k].weight;
  }
  return w;
}

void update_throughput(std::span<UserState> states,
                       std::span<const double> served_bps, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("EWMA beta must be in (0, 1]");
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    states[k].avg_throughput_bps =
        (1.0 - beta) * states[k].avg_throughput_bps + beta * served_bps[k];
  }
}

std::size_t schedule_violations(const Network& network,
                                const ScheduleMap& schedule) {
  std::size_t bad = 0;
  for (BsIndex n = 0; n < schedule.bs_count(); ++n) {
    for (std::size_t s = 0; s < schedule.subchannel_count(); ++s) {
      const UserIndex k = schedule.at(n, s);
      if (k == kNoUser) continue;
      if (k >= network.user_count() || network.user(k).serving_bs != n) ++bad;
    }
  }
  return bad;
}

void schedule_users(const Network& network, BsIndex n,
                    const GainSnapshot& gains, const PowerMatrix& powers,
                    const ReceivedField& field, std::span<const double> weights,
                    double sinr_gap, ScheduleMap& schedule) {
  const auto members = network.users_of(n);
  for (std::size_t s = 0; s < gains.subchannel_count; ++s) {
    UserIndex best = kNoUser;
    if (powers.mask(n, s) > 0.0 && !members.empty()) {
      const bool silent = powers.at(n, s) <= 0.0;
      double best_score = -1.0;
      for (UserIndex k : members) {
        const double in = field.interference_noise(k, n, s);
        const double score =
            silent ? weights[k] * gains.gain(k, n, s) / in
                   : weights[k] * rate(field.signal(k, n, s) / in, sinr_gap, 1.0);
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
    }
    schedule.at(n, s) = best;
  }
}

ScheduleMap schedule_all(const Network& network, const GainSnapshot& gains,
                         const PowerMatrix& powers,
                         std::span<const double> weights, double sinr_gap) {
  ScheduleMap schedule(network.bs_count(), gains.subchannel_count);
  const ReceivedField field(gains, powers);
  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    schedule_users(network, n, gains, powers, field, weights, sinr_gap,
                   schedule);
  }
  return schedule;
}

double objective(const GainSnapshot& gains, const PowerMatrix& powers,
                 const ScheduleMap& schedule, std::span<const double> weights,
                 double sinr_gap, double subchannel_bandwidth_hz) {
  double h = 0.0;
  for (BsIndex n = 0; n < schedule.bs_count(); ++n) {
    for (std::size_t s = 0; s < schedule.subchannel_count(); ++s) {
      const UserIndex k = schedule.at(n, s);
      if (k == kNoUser) continue;
      h += weights[k] * rate(sinr(gains, powers, k, n, s), sinr_gap,
                             subchannel_bandwidth_hz);
    }
  }
  return h;
}

std::vector<double> served_rates(const GainSnapshot& gains,
                                 const PowerMatrix& powers,
                                 const ScheduleMap& schedule, double sinr_gap,
                                 double subchannel_bandwidth_hz) {
  std::vector<double> served(gains.user_count, 0.0);
  const ReceivedField field(gains, powers);
  for (BsIndex n = 0; n < schedule.bs_count(); ++n) {
    for (std::size_t s = 0; s < schedule.subchannel_count(); ++s) {
      const UserIndex k = schedule.at(n, s);
      if (k == kNoUser) continue;
      const double gamma =
          field.signal(k, n, s) / field.interference_noise(k, n, s);
      served[k] += rate(gamma, sinr_gap, subchannel_bandwidth_hz);
    }
  }
  return served;
}

}  // namespace refim
