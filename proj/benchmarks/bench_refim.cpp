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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "refim/engine.hpp"

using namespace refim;

namespace {

std::vector<SubchannelInput> random_inputs(std::size_t S, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<SubchannelInput> in(S);
  for (SubchannelInput& x : in) {
    x.weight = u(rng);
    x.own_gain = 1e-9 * u(rng);
    x.interference_noise_w = 1e-13 * u(rng);
    x.tax = 1e-3 * u(rng);
    x.mask_w = 20.0;
  }
  return in;
}

void BM_Bisection(benchmark::State& state) {
  const auto in = random_inputs(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(refim_step(in, 20.0));
}
BENCHMARK(BM_Bisection)->Arg(16)->Arg(64);

struct Hex19 {
  Network net;
  GainSnapshot gains;
  PowerMatrix powers;
  std::vector<double> weights;

  Hex19() : net(build_network(NetworkSpec{}, 1)) {
    ChannelModel ch(net, {}, 1);
    gains = ch.snapshot(0);
    powers = effective_powers(net, {});
    for (BsIndex n = 0; n < net.bs_count(); ++n) {
      std::vector<double> row(net.subchannel_count(),
                              net.bs(n).max_power_w / static_cast<double>(net.subchannel_count()));
      powers.set_row(n, row);
    }
    weights.assign(net.user_count(), 1.0);
  }
};

void BM_Scheduling(benchmark::State& state) {
  const Hex19 h;
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_all(h.net, h.gains, h.powers, h.weights, 1.0));
  }
}
BENCHMARK(BM_Scheduling);

void BM_FadingAdvance(benchmark::State& state) {
  const Network net = build_network(NetworkSpec{}, 1);
  ChannelModel ch(net, {}, 1);
  for (auto _ : state) ch.advance(1e-3);
}
BENCHMARK(BM_FadingAdvance);

void BM_RefimSlot(benchmark::State& state) {
  const Hex19 h;
  for (auto _ : state) {
    benchmark::DoNotOptimize(general_algorithm(h.net, h.gains, h.weights, h.powers, {}));
  }
}
BENCHMARK(BM_RefimSlot);

}  // namespace

BENCHMARK_MAIN();
