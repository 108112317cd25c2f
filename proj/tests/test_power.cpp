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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "refim/power.hpp"
#include "refim/power_matrix.hpp"
#include "test_util.hpp"

using namespace refim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Budget spent at multiplier `lambda`, recomputed from the KKT formula.
double spent(const std::vector<SubchannelInput>& in, double lambda) {
  double total = 0.0;
  for (const auto& x : in) {
    total += kkt_power(x.weight, lambda, x.tax, x.interference_noise_w, x.own_gain,
                       x.mask_w, 1.0);
  }
  return total;
}

// A positive multiplier either spends the budget to within delta or sits
// at the feasible end of a bracket no wider than delta_lambda.
bool tight(const std::vector<SubchannelInput>& in, const BisectionResult& r,
           double budget) {
  const double total = spent(in, r.lambda);
  if (std::abs(total - budget) <= 1e-6 * budget) return true;
  const double lower = std::max(0.0, r.lambda - 1e-9 * r.lambda_max);
  return total <= budget && spent(in, lower) >= budget - 1e-6 * budget;
}

// Classic water-filling with unequal weights and no masks: p_s = [nu w_s -
// a_s]^+ with nu set by the budget. Active sets are found by sorting a_s/w_s.
std::vector<double> water_filling_oracle(const std::vector<double>& w,
                                         const std::vector<double>& a,
                                         double budget) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i] / w[i] < a[j] / w[j]; });
  double nu = 0.0;
  double sum_a = 0.0;
  double sum_w = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sum_a += a[order[i]];
    sum_w += w[order[i]];
    const double candidate = (budget + sum_a) / sum_w;
    if (i + 1 == order.size() ||
        candidate * w[order[i + 1]] <= a[order[i + 1]]) {
      nu = candidate;
      break;
    }
  }
  std::vector<double> p(w.size());
  for (std::size_t s = 0; s < w.size(); ++s) p[s] = std::max(nu * w[s] - a[s], 0.0);
  return p;
}

std::vector<SubchannelInput> inputs_from(const std::vector<double>& w,
                                         const std::vector<double>& a,
                                         double mask = kInf) {
  std::vector<SubchannelInput> in(w.size());
  for (std::size_t s = 0; s < w.size(); ++s) {
    in[s] = {w[s], 1.0, a[s], 0.0, mask};
  }
  return in;
}

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("equal power") {
  CHECK(equal_power(2.0, std::vector<double>(4, kInf)) ==
        std::vector<double>(4, 0.5));
  CHECK(equal_power(2.0, std::vector<double>(4, 0.3)) ==
        std::vector<double>(4, 0.3));
  CHECK(equal_power(2.0, std::vector<double>(1, kInf)) ==
        std::vector<double>(1, 2.0));
  const auto allowed = equal_power_on_allowed(2.0, std::vector<double>{1.0, 0.0, 1.0, 0.0});
  CHECK(allowed == std::vector<double>{1.0, 0.0, 1.0, 0.0});
}

TEST_CASE("taxation term") {
  CHECK(taxation_term({}) == 0.0);
  // Reference signal 1, interference 0.2 plus noise 0.8, cross gain 0.2.
  const ReferenceMeasurement ref{1.0, 0.2, 1.0, 1.0};
  CHECK(taxation_term(std::vector<ReferenceMeasurement>{ref}) ==
        doctest::Approx(0.1));
  ReferenceMeasurement closer = ref;
  closer.cross_gain = 0.4;
  CHECK(taxation_term(std::vector<ReferenceMeasurement>{closer}) ==
        doctest::Approx(0.2));
  CHECK(taxation_term(std::vector<ReferenceMeasurement>{ref, closer}) ==
        doctest::Approx(0.3));
}

TEST_CASE("kkt power clipping") {
  CHECK(kkt_power(1.0, 0.0, 2.0, 0.1, 1.0, 10.0) == doctest::Approx(0.4));
  CHECK(kkt_power(1.0, 2.0 / std::numbers::ln2, 0.0, 0.1, 1.0, 10.0) ==
        doctest::Approx(0.4));
  CHECK(kkt_power(1.0, 0.0, 0.05, 0.1, 1.0, 10.0) == 10.0);
  CHECK(kkt_power(1.0, 0.0, 2.0, 5.0, 1.0, 10.0) == 0.0);
  CHECK(kkt_power(1.0, 0.0, 0.0, 0.1, 1.0, 3.0) == 3.0);
}

TEST_CASE("kkt power is monotone in lambda and in the tax") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double w = u(rng);
    const double a = u(rng);
    const double g = u(rng);
    const double lambda = u(rng);
    const double t = u(rng);
    const double base = kkt_power(w, lambda, 0.0, a, g, 5.0);
    CHECK(kkt_power(w, lambda, t, a, g, 5.0) <= base);
    CHECK(kkt_power(w, lambda * 1.5, 0.0, a, g, 5.0) <= base);
  }
}

TEST_CASE("bisection matches closed-form water-filling") {
  const auto r = allocate_bisection(inputs_from({1, 1}, {0.5, 1.0}), 2.5);
  REQUIRE(r.powers.size() == 2);
  CHECK(r.powers[0] == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(r.powers[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(1.0 / (r.lambda * std::numbers::ln2) == doctest::Approx(2.0).epsilon(1e-5));

  const auto sym = allocate_bisection(inputs_from({1, 1}, {0.3, 0.3}), 2.0);
  CHECK(sym.powers[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sym.powers[1] == doctest::Approx(1.0).epsilon(1e-5));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 4.0);
  std::uniform_int_distribution<int> sc(1, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = sc(rng);
    std::vector<double> w(S);
    std::vector<double> a(S);
    for (int s = 0; s < S; ++s) {
      w[s] = u(rng);
      a[s] = u(rng);
    }
    const double budget = u(rng) * S;
    const auto oracle = water_filling_oracle(w, a, budget);
    const auto got = allocate_bisection(inputs_from(w, a), budget);
    CHECK(got.iterations <= got.iteration_bound);
    CHECK(std::abs(sum(got.powers) - budget) <= 1e-6 * budget);
    for (int s = 0; s < S; ++s) {
      CHECK(got.powers[s] == doctest::Approx(oracle[s]).epsilon(1e-5).scale(budget));
    }
  }
}

TEST_CASE("bisection with loose budget returns the unconstrained point") {
  const auto r = allocate_bisection(inputs_from({1, 1, 1}, {0.1, 0.1, 0.1}, 0.5), 10.0);
  CHECK(r.lambda == 0.0);
  for (double p : r.powers) CHECK(p == 0.5);

  std::vector<SubchannelInput> idle(3);
  const auto none = allocate_bisection(idle, 1.0);
  for (double p : none.powers) CHECK(p == 0.0);
}

TEST_CASE("bisection stays feasible with masks and taxes") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int S = 1 + static_cast<int>(u(rng) * 16);
    std::vector<SubchannelInput> in(S);
    for (auto& x : in) {
      x.weight = u(rng) < 0.1 ? 0.0 : std::exp(8.0 * (u(rng) - 0.5));
      x.own_gain = std::exp(10.0 * (u(rng) - 0.5));
      x.interference_noise_w = std::exp(10.0 * (u(rng) - 0.5));
      x.tax = u(rng) < 0.5 ? 0.0 : std::exp(10.0 * (u(rng) - 0.5));
      x.mask_w = u(rng) < 0.2 ? 0.0 : 0.1 + u(rng);
    }
    const double budget = 0.2 + 5.0 * u(rng);
    const auto r = allocate_bisection(in, budget);
    CHECK(r.iterations <= r.iteration_bound);
    CHECK(r.lambda >= 0.0);
    double total = 0.0;
    for (int s = 0; s < S; ++s) {
      CHECK(r.powers[s] >= 0.0);
      CHECK(r.powers[s] <= in[s].mask_w);
      total += r.powers[s];
    }
    CHECK(total <= budget * (1.0 + 1e-6));
    // Complementary slackness, up to the bisection resolution.
    if (r.lambda > 0.0) CHECK(tight(in, r, budget));
  }
}

TEST_CASE("water-filling ignores taxes and REFIM reduces to it") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<SubchannelInput> in(8);
  for (auto& x : in) x = {u(rng), u(rng), u(rng), u(rng), 10.0};
  std::vector<SubchannelInput> untaxed = in;
  for (auto& x : untaxed) x.tax = 0.0;
  const auto wf = water_filling(in, 3.0);
  const auto ref = refim_step(untaxed, 3.0);
  CHECK(wf.powers == ref.powers);
  const auto taxed = refim_step(in, 3.0);
  CHECK(taxed.powers != wf.powers);
}

TEST_CASE("single flat user splits the budget evenly") {
  std::vector<SubchannelInput> in(4, SubchannelInput{1.0, 1e-9, 1e-13, 0.0, 20.0});
  const auto r = refim_step(in, 20.0);
  for (double p : r.powers) CHECK(p == r.powers[0]);
  CHECK(r.powers[0] == doctest::Approx(5.0).epsilon(1e-4));
  CHECK(tight(in, r, 20.0));
}

TEST_CASE("initial power rules") {
  const Network net = refim::testing::tiny_network({1, 1}, 4, 2.0);
  PowerMatrix prev = PowerMatrix::for_network(net);
  std::mt19937_64 rng(9);
  const PowerMatrix uni = initial_power(InitialPowerRule::kUniform, prev, 3, rng);
  for (double p : uni.values()) CHECK(p == 0.5);

  for (int trial = 0; trial < 20; ++trial) {
    const PowerMatrix rnd = initial_power(InitialPowerRule::kRandom, prev, 3, rng);
    CHECK(rnd.total(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rnd.total(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rnd.violations() == 0);
  }

  for (std::size_t s = 0; s < 4; ++s) prev.at(1, s) = 0.1 * static_cast<double>(s);
  const PowerMatrix same = initial_power(InitialPowerRule::kPrevious, prev, 5, rng);
  CHECK(std::vector<double>(same.values().begin(), same.values().end()) ==
        std::vector<double>(prev.values().begin(), prev.values().end()));
  const PowerMatrix first = initial_power(InitialPowerRule::kPrevious, prev, 0, rng);
  for (double p : first.values()) CHECK(p == 0.5);
}

TEST_CASE("power matrix violation counting") {
  PowerMatrix p({2.0}, {1.0, 1.0, 1.0}, 3);
  p.at(0, 0) = 1.0;
  p.at(0, 1) = 0.5;
  CHECK(p.total(0) == 1.5);
  CHECK(p.violations() == 0);
  p.at(0, 2) = 1.0 + 1e-7;  // inside the relative tolerance
  CHECK(p.violations() == 1);  // budget 2.5 > 2
  p.at(0, 1) = 0.0;
  CHECK(p.violations() == 0);
  p.at(0, 0) = 0.5;
  p.at(0, 2) = 1.1;
  CHECK(p.violations() == 1);
  p.at(0, 2) = -0.1;
  CHECK(p.violations() == 1);
  CHECK_THROWS_AS(PowerMatrix({1.0}, {1.0}, 2), std::invalid_argument);
}
