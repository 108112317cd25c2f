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

#include "refim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

namespace refim {
namespace {

struct Candidate {
  double objective = -1.0;
  std::size_t power_index = 0;  // lexicographic over BS rows
  std::vector<std::size_t> schedule_choice;
  bool found = false;

  bool better_than(const Candidate& other) const {
    if (!other.found) return found;
    if (objective != other.objective) return objective > other.objective;
    return power_index < other.power_index;
  }
};

}  // namespace

double combination_count(const Network& network, const GridSpec& grid) {
  const auto L = static_cast<double>(grid.levels);
  const auto N = static_cast<double>(network.bs_count());
  const auto S = static_cast<double>(network.subchannel_count());
  double count = std::pow(L, N * S);
  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    count *= std::pow(static_cast<double>(network.users_of(n).size()), S);
  }
  return count;
}

OracleResult brute_force(const Network& network, const GainSnapshot& gains,
                         std::span<const double> weights,
                         const GridSpec& grid, double sinr_gap) {
  const std::size_t N = network.bs_count();
  const std::size_t S = network.subchannel_count();
  if (grid.levels < 2) throw OracleRefused("grid needs at least 2 levels");
  if (N > grid.max_bs || S > grid.max_subchannels) {
    throw OracleRefused("instance too large: " + std::to_string(N) + " BSs x " +
                        std::to_string(S) + " subchannels, limit " +
                        std::to_string(grid.max_bs) + " x " +
                        std::to_string(grid.max_subchannels));
  }
  for (BsIndex n = 0; n < N; ++n) {
    const std::size_t users = network.users_of(n).size();
    if (users < 1 || users > grid.max_users_per_bs) {
      throw OracleRefused("BS " + std::to_string(n) + " has " +
                          std::to_string(users) + " users, limit " +
                          std::to_string(grid.max_users_per_bs));
    }
  }
  const double count = combination_count(network, grid);
  if (count > grid.cap) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "instance needs %.0f combinations, cap is %.0f", count,
                  grid.cap);
    throw OracleRefused(msg);
  }

  const PowerMatrix limits = PowerMatrix::for_network(network);
  const std::size_t L = grid.levels;
  // Budget-feasible rows per BS, lexicographic with subchannel 0 leading.
  std::vector<std::vector<std::vector<double>>> rows(N);
  std::size_t per_bs = 1;
  for (std::size_t s = 0; s < S; ++s) per_bs *= L;
  for (BsIndex n = 0; n < N; ++n) {
    for (std::size_t code = 0; code < per_bs; ++code) {
      std::vector<double> row(S);
      std::size_t rest = code;
      double sum = 0.0;
      for (std::size_t s = S; s-- > 0;) {
        const std::size_t level = rest % L;
        rest /= L;
        row[s] = limits.mask(n, s) * static_cast<double>(level) /
                 static_cast<double>(L - 1);
        sum += row[s];
      }
      if (sum <= limits.budget(n) * (1.0 + 1e-12)) rows[n].push_back(row);
    }
  }

  std::size_t power_points = 1;
  for (const auto& r : rows) power_points *= r.size();
  std::size_t schedules = 1;
  for (BsIndex n = 0; n < N; ++n) {
    for (std::size_t s = 0; s < S; ++s) schedules *= network.users_of(n).size();
  }

  auto search = [&](std::size_t begin, std::size_t end) {
    Candidate best;
    PowerMatrix p = limits;
    std::vector<double> value(N * S * grid.max_users_per_bs);
    std::vector<std::size_t> choice(N * S);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rest = idx;
      for (BsIndex n = N; n-- > 0;) {
        p.set_row(n, rows[n][rest % rows[n].size()]);
        rest /= rows[n].size();
      }
      for (BsIndex n = 0; n < N; ++n) {
        const auto members = network.users_of(n);
        for (std::size_t s = 0; s < S; ++s) {
          for (std::size_t i = 0; i < members.size(); ++i) {
            const UserIndex k = members[i];
            value[(n * S + s) * grid.max_users_per_bs + i] =
                weights[k] * rate(sinr(gains, p, k, n, s), sinr_gap, 1.0);
          }
        }
      }
      for (std::size_t code = 0; code < schedules; ++code) {
        std::size_t r = code;
        double h = 0.0;
        for (std::size_t e = N * S; e-- > 0;) {
          const std::size_t users = network.users_of(e / S).size();
          choice[e] = r % users;
          r /= users;
          h += value[e * grid.max_users_per_bs + choice[e]];
        }
        if (!best.found || h > best.objective) {
          best.objective = h;
          best.power_index = idx;
          best.schedule_choice = choice;
          best.found = true;
        }
      }
    }
    return best;
  };

  const std::size_t threads = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), power_points);
  std::vector<Candidate> partial(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (power_points + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(power_points, t * chunk);
    const std::size_t end = std::min(power_points, begin + chunk);
    if (t + 1 == threads) {
      partial[t] = search(begin, end);
    } else {
      pool.emplace_back([&, t, begin, end] { partial[t] = search(begin, end); });
    }
  }
  for (std::thread& th : pool) th.join();
  Candidate best;
  for (const Candidate& c : partial) {
    if (c.better_than(best)) best = c;
  }

  OracleResult out;
  out.objective = best.objective;
  out.feasible_power_points = power_points;
  out.powers = limits;
  std::size_t rest = best.power_index;
  for (BsIndex n = N; n-- > 0;) {
    out.powers.set_row(n, rows[n][rest % rows[n].size()]);
    rest /= rows[n].size();
  }
  out.schedule = ScheduleMap(N, S);
  for (BsIndex n = 0; n < N; ++n) {
    for (std::size_t s = 0; s < S; ++s) {
      out.schedule.at(n, s) =
          network.users_of(n)[best.schedule_choice[n * S + s]];
    }
  }
  return out;
}

}  // namespace refim
