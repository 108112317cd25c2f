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

// Small hand-built instances shared by the unit tests.

#ifndef REFIM_TESTS_TEST_UTIL_HPP_
#define REFIM_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "refim/channel.hpp"
#include "refim/power_matrix.hpp"
#include "refim/topology.hpp"

namespace refim::testing {

// BSs on a line, every BS a neighbor of every other, users numbered in BS
// order. Masks default to the budget.
inline Network tiny_network(const std::vector<std::size_t>& users_per_bs,
                            std::size_t subchannels, double budget_w = 1.0,
                            double mask_w = 0.0) {
  const std::size_t n_bs = users_per_bs.size();
  std::vector<BaseStation> bss;
  std::vector<std::vector<BsIndex>> neighbors(n_bs);
  for (BsIndex n = 0; n < n_bs; ++n) {
    BaseStation bs;
    bs.id = n;
    bs.position = {1000.0 * static_cast<double>(n), 0.0};
    bs.max_power_w = budget_w;
    bs.mask_w.assign(subchannels, mask_w > 0.0 ? mask_w : budget_w);
    bs.coverage = {Coverage::Shape::kDisc, bs.position, 400.0};
    bss.push_back(bs);
    for (BsIndex m = 0; m < n_bs; ++m) {
      if (m != n) neighbors[n].push_back(m);
    }
  }
  std::vector<User> users;
  for (BsIndex n = 0; n < n_bs; ++n) {
    for (std::size_t i = 0; i < users_per_bs[n]; ++i) {
      User u;
      u.id = users.size();
      u.position = {bss[n].position.x + 10.0 * static_cast<double>(i + 1), 0.0};
      u.serving_bs = n;
      users.push_back(u);
    }
  }
  return Network(std::move(bss), std::move(users), std::move(neighbors), {},
                 subchannels, 1.0 * static_cast<double>(subchannels));
}

// Log-uniform gains in [lo, hi] and constant noise.
inline GainSnapshot random_snapshot(const Network& net, std::mt19937_64& rng,
                                    double lo = 1e-3, double hi = 1.0,
                                    double noise = 0.1) {
  GainSnapshot g = make_snapshot(net.user_count(), net.bs_count(),
                                 net.subchannel_count(), 1.0, noise);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  for (double& x : g.gains) x = std::exp(u(rng));
  return g;
}

inline PowerMatrix random_powers(const Network& net, std::mt19937_64& rng) {
  PowerMatrix p = PowerMatrix::for_network(net);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (BsIndex n = 0; n < net.bs_count(); ++n) {
    std::vector<double> row(net.subchannel_count());
    double sum = 0.0;
    for (double& x : row) sum += (x = u(rng));
    for (double& x : row) x *= net.bs(n).max_power_w * u(rng) / sum;
    p.set_row(n, row);
  }
  return p;
}

}  // namespace refim::testing

#endif  // REFIM_TESTS_TEST_UTIL_HPP_
