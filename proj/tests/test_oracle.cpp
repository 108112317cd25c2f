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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "refim/engine.hpp"
#include "refim/oracle.hpp"
#include "test_util.hpp"

using namespace refim;
using refim::testing::random_snapshot;
using refim::testing::tiny_network;

namespace {

// Independent enumeration for one user per BS: every BS transmits to its
// only user, so the schedule is fixed and only powers vary.
double enumerate_single_users(const Network& net, const GainSnapshot& g,
                              const std::vector<double>& w, std::size_t levels) {
  const std::size_t N = net.bs_count();
  const std::size_t S = net.subchannel_count();
  std::vector<std::vector<double>> rows;  // feasible rows, shared by all BSs
  std::vector<std::size_t> digits(S, 0);
  const double budget = net.bs(0).max_power_w;
  const double mask = net.bs(0).mask_w[0];
  while (true) {
    std::vector<double> row(S);
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      row[s] = mask * static_cast<double>(digits[s]) / static_cast<double>(levels - 1);
      total += row[s];
    }
    if (total <= budget * (1.0 + 1e-12)) rows.push_back(row);
    std::size_t i = 0;
    while (i < S && ++digits[i] == levels) digits[i++] = 0;
    if (i == S) break;
  }
  double best = 0.0;
  std::vector<std::size_t> pick(N, 0);
  while (true) {
    double h = 0.0;
    for (BsIndex n = 0; n < N; ++n) {
      const UserIndex k = net.users_of(n)[0];
      for (std::size_t s = 0; s < S; ++s) {
        double den = g.noise_w(k, s);
        for (BsIndex m = 0; m < N; ++m) {
          if (m != n) den += g.gain(k, m, s) * rows[pick[m]][s];
        }
        h += w[k] * std::log2(1.0 + g.gain(k, n, s) * rows[pick[n]][s] / den);
      }
    }
    best = std::max(best, h);
    std::size_t i = 0;
    while (i < N && ++pick[i] == rows.size()) pick[i++] = 0;
    if (i == N) break;
  }
  return best;
}

}  // namespace

TEST_CASE("two-cell single-subchannel example") {
  const Network net = tiny_network({1, 1}, 1, 1.0);
  GainSnapshot g = make_snapshot(2, 2, 1, 0.5, 0.5);
  g.gain(0, 0, 0) = 1.0;
  g.gain(1, 1, 0) = 1.0;
  GridSpec grid;
  grid.levels = 2;
  const OracleResult r = brute_force(net, g, std::vector<double>{1.0, 1.0}, grid);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.powers.at(0, 0) == 1.0);
  CHECK(r.powers.at(1, 0) == 1.0);
  CHECK(r.schedule.at(0, 0) == 0);
  CHECK(r.schedule.at(1, 0) == 1);
  CHECK(r.feasible_power_points == 4);
}

TEST_CASE("oracle agrees with an independent enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t N = 1 + trial % 3;
    const Network net = tiny_network(std::vector<std::size_t>(N, 1), 2, 1.0, 0.7);
    const GainSnapshot g = random_snapshot(net, rng, 1e-2, 1.0, 0.05);
    std::vector<double> w(N);
    for (double& x : w) x = u(rng);
    GridSpec grid;
    grid.levels = 5;
    const OracleResult r = brute_force(net, g, w, grid);
    CHECK(r.objective == doctest::Approx(enumerate_single_users(net, g, w, 5)).epsilon(1e-12));
    CHECK(r.powers.violations() == 0);
    CHECK(schedule_violations(net, r.schedule) == 0);
    CHECK(objective(g, r.powers, r.schedule, w, 1.0) == doctest::Approx(r.objective));
  }
}

TEST_CASE("single isolated link matches water-filling on the grid") {
  const Network net = tiny_network({1}, 2, 1.0);
  GainSnapshot g = make_snapshot(1, 1, 2, 1.0, 0.1);
  g.gain(0, 0, 1) = 0.5;
  GridSpec grid;
  grid.levels = 17;
  const OracleResult r = brute_force(net, g, std::vector<double>{1.0}, grid);
  // Continuous optimum: a = [0.1, 0.2], level 0.65, p = [0.55, 0.45]. The
  // nearest budget-feasible grid points are checked by hand.
  double best = 0.0;
  for (int i = 0; i <= 16; ++i) {
    for (int j = 0; i + j <= 16; ++j) {
      const double h = std::log2(1.0 + i / 16.0 / 0.1) + std::log2(1.0 + 0.5 * j / 16.0 / 0.1);
      best = std::max(best, h);
    }
  }
  CHECK(r.objective == doctest::Approx(best).epsilon(1e-12));
  const double continuous = std::log2(1.0 + 0.55 / 0.1) + std::log2(1.0 + 0.45 / 0.2);
  CHECK(r.objective <= continuous);
  CHECK(r.objective >= continuous - 0.01);
}

TEST_CASE("without cross gains the optimum decomposes per cell") {
  std::mt19937_64 rng(3);
  const Network net = tiny_network({2, 2}, 2, 1.0);
  GainSnapshot g = random_snapshot(net, rng, 1e-2, 1.0, 0.05);
  for (UserIndex k = 0; k < 4; ++k) {
    g.gain(k, 1 - net.user(k).serving_bs, 0) = 1e-300;
    g.gain(k, 1 - net.user(k).serving_bs, 1) = 1e-300;
  }
  const std::vector<double> w = {1.0, 2.0, 0.5, 1.5};
  const OracleResult joint = brute_force(net, g, w);

  double separate = 0.0;
  for (BsIndex n = 0; n < 2; ++n) {
    const Network one = tiny_network({2}, 2, 1.0);
    GainSnapshot gn = make_snapshot(2, 1, 2, 1.0, 0.05);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t s = 0; s < 2; ++s) gn.gain(i, 0, s) = g.gain(2 * n + i, n, s);
    }
    separate += brute_force(one, gn, std::vector<double>{w[2 * n], w[2 * n + 1]}).objective;
  }
  CHECK(joint.objective == doctest::Approx(separate).epsilon(1e-12));
}

TEST_CASE("finer grids never do worse and bound the algorithms") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    NetworkSpec spec;
    spec.layout = Layout::kToy;
    spec.users.macro = 1;
    spec.bs.subchannel_count = 2;
    const Network net = build_network(spec, 100 + trial);
    const ChannelModel ch(net, {}, 100 + trial);
    const GainSnapshot g = ch.snapshot(0);
    const std::vector<double> w(net.user_count(), 1.0);
    double prev = -1.0;
    double coarse = 0.0;
    for (std::size_t levels : {5, 9, 17}) {
      GridSpec grid;
      grid.levels = levels;
      const double h = brute_force(net, g, w, grid).objective;
      CHECK(h >= prev);
      if (levels == 5) coarse = h;
      prev = h;
    }
    const double eps_grid = prev - coarse;
    for (Algorithm a : {Algorithm::kEq, Algorithm::kWf, Algorithm::kRefim}) {
      const StaticResult r = evaluate_static(net, g, w, a);
      CHECK(prev >= r.objective - eps_grid - 1e-9);
    }
  }
}

TEST_CASE("oversized instances are refused") {
  const Network big = tiny_network({1, 1, 1}, 2);
  GridSpec grid;
  grid.levels = 17;
  CHECK(combination_count(big, grid) == doctest::Approx(std::pow(17.0, 6)));
  const GainSnapshot g = make_snapshot(3, 3, 2, 1.0, 1.0);
  CHECK_THROWS_AS(brute_force(big, g, std::vector<double>(3, 1.0), grid), OracleRefused);

  const Network four = tiny_network({1, 1, 1, 1}, 1);
  CHECK_THROWS_AS(brute_force(four, make_snapshot(4, 4, 1, 1.0, 1.0),
                              std::vector<double>(4, 1.0)),
                  OracleRefused);
  const Network crowded = tiny_network({3}, 1);
  CHECK_THROWS_AS(brute_force(crowded, make_snapshot(3, 1, 1, 1.0, 1.0),
                              std::vector<double>(3, 1.0)),
                  OracleRefused);
  const Network wide = tiny_network({1}, 3);
  CHECK_THROWS_AS(brute_force(wide, make_snapshot(1, 1, 3, 1.0, 1.0),
                              std::vector<double>(1, 1.0)),
                  OracleRefused);
}

TEST_CASE("oracle is deterministic and breaks ties lexicographically") {
  const Network net = tiny_network({2, 2}, 2);
  const GainSnapshot flat = make_snapshot(4, 2, 2, 1e-9, 1.0);
  const std::vector<double> w(4, 1.0);
  const OracleResult a = brute_force(net, flat, w);
  const OracleResult b = brute_force(net, flat, w);
  CHECK(a.objective == b.objective);
  CHECK(a.schedule == b.schedule);
  CHECK(std::vector<double>(a.powers.values().begin(), a.powers.values().end()) ==
        std::vector<double>(b.powers.values().begin(), b.powers.values().end()));
  // Identical users: the first one wins.
  CHECK(a.schedule.at(0, 0) == 0);
  CHECK(a.schedule.at(1, 0) == 2);
}
