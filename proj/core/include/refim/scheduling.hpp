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

#ifndef REFIM_SCHEDULING_HPP_
#define REFIM_SCHEDULING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "refim/channel.hpp"
#include "refim/power_matrix.hpp"
#include "refim/topology.hpp"

namespace refim {

// g p / (sum_{m != n} g_m p_m + sigma) for user k served by n on s.
double sinr(const GainSnapshot& gains, const PowerMatrix& powers, UserIndex k,
            BsIndex n, std::size_t s);

// (B/S) log2(1 + gamma / gap).
double rate(double gamma, double sinr_gap, double subchannel_bandwidth_hz);

// Total received power sum_m g[k][m][s] p[m][s], laid out [k][s].
class ReceivedField {
 public:
  ReceivedField(const GainSnapshot& gains, const PowerMatrix& powers);

  double total(UserIndex k, std::size_t s) const {
    return total_[k * subchannel_count_ + s];
  }
  // Interference plus noise seen by k when served by n on s.
  double interference_noise(UserIndex k, BsIndex n, std::size_t s) const;
  double signal(UserIndex k, BsIndex n, std::size_t s) const {
    return gains_->gain(k, n, s) * powers_->at(n, s);
  }

 private:
  const GainSnapshot* gains_;
  const PowerMatrix* powers_;
  std::size_t subchannel_count_;
  std::vector<double> total_;
};

enum class UtilityKind { kLog, kAlphaFair };

struct Utility {
  UtilityKind kind = UtilityKind::kLog;
  double alpha = 1.0;
};

struct UserState {
  double avg_throughput_bps = 1e-3;
  double weight = 1e3;
};

std::vector<UserState> initial_user_states(std::size_t user_count,
                                           double initial_throughput_bps);

// Sets each weight to the marginal utility at R and returns the weights.
std::vector<double> update_weights(std::span<UserState> states,
                                   const Utility& utility);

// R <- (1 - beta) R + beta * served.
void update_throughput(std::span<UserState> states,
                       std::span<const double> served_bps, double beta);

class ScheduleMap {
 public:
  ScheduleMap() = default;
  ScheduleMap(std::size_t bs_count, std::size_t subchannel_count)
      : subchannel_count_(subchannel_count),
        users_(bs_count * subchannel_count, kNoUser) {}

  std::size_t bs_count() const {
    return subchannel_count_ == 0 ? 0 : users_.size() / subchannel_count_;
  }
  std::size_t subchannel_count() const { return subchannel_count_; }
  UserIndex at(BsIndex n, std::size_t s) const {
    return users_[n * subchannel_count_ + s];
  }
  UserIndex& at(BsIndex n, std::size_t s) {
    return users_[n * subchannel_count_ + s];
  }
  bool indicator(UserIndex k, BsIndex n, std::size_t s) const {
    return at(n, s) == k;
  }
  bool operator==(const ScheduleMap&) const = default;

 private:
  std::size_t subchannel_count_ = 0;
  std::vector<UserIndex> users_;
};

// Counts (n, s) entries naming a user that does not belong to n. A map
// stores one user per entry, so at most one user per (n, s) holds by
// construction.
std::size_t schedule_violations(const Network& network,
                                const ScheduleMap& schedule);

// argmax over k in K_n of w_k * r_k on every subchannel, ties to the lowest
// index. Subchannels with a zero mask get no user. When the BS transmits
// nothing on s all rates are zero, and users are ranked by w g / (I + sigma)
// instead.
void schedule_users(const Network& network, BsIndex n,
                    const GainSnapshot& gains, const PowerMatrix& powers,
                    const ReceivedField& field, std::span<const double> weights,
                    double sinr_gap, ScheduleMap& schedule);

ScheduleMap schedule_all(const Network& network, const GainSnapshot& gains,
                         const PowerMatrix& powers,
                         std::span<const double> weights, double sinr_gap);

// sum over (n, s) of w_{k(n,s)} r_{k(n,s)}.
double objective(const GainSnapshot& gains, const PowerMatrix& powers,
                 const ScheduleMap& schedule, std::span<const double> weights,
                 double sinr_gap, double subchannel_bandwidth_hz = 1.0);

// Rate delivered to every user in this slot, summed over subchannels.
std::vector<double> served_rates(const GainSnapshot& gains,
                                 const PowerMatrix& powers,
                                 const ScheduleMap& schedule, double sinr_gap,
                                 double subchannel_bandwidth_hz);

}  // namespace refim

#endif  // REFIM_SCHEDULING_HPP_
