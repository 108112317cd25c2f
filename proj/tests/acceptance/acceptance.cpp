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

// One line per acceptance criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "../test_util.hpp"
#include "config.hpp"
#include "outputs.hpp"
#include "refim/engine.hpp"
#include "refim/oracle.hpp"

using namespace refim;
using refim::testing::random_powers;
using refim::testing::random_snapshot;
using refim::testing::tiny_network;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every simulated result feeds the constraint and bisection checks.
struct Ledger {
  std::size_t power_violations = 0;
  std::size_t schedule_violations = 0;
  std::size_t runs = 0;
  BisectionStats bisection;

  void add(const RunResult& r) {
    power_violations += r.power_violations;
    schedule_violations += r.schedule_violations;
    bisection.merge(r.bisection);
    ++runs;
  }
  void add(const Network& net, const PowerMatrix& p, const ScheduleMap& m,
           const BisectionStats& b) {
    power_violations += p.violations();
    schedule_violations += schedule_violations_of(net, m);
    bisection.merge(b);
    ++runs;
  }
  static std::size_t schedule_violations_of(const Network& net, const ScheduleMap& m) {
    return refim::schedule_violations(net, m);
  }
};

Ledger ledger;

std::vector<RunResult> simulate(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out = run_all(scenarios, 0);
  for (const RunResult& r : out) ledger.add(r);
  return out;
}

Outcome ordering() {
  std::vector<Scenario> v;
  for (Algorithm a : {Algorithm::kEq, Algorithm::kWf, Algorithm::kRefim}) {
    Scenario s = cli::preset("hex19");
    s.algorithm = a;
    v.push_back(s);
  }
  const auto r = simulate(v);
  const bool pass = r[2].gat_bps > r[1].gat_bps && r[1].gat_bps >= r[0].gat_bps &&
                    r[2].aet_bps >= 1.2 * r[0].aet_bps;
  return {pass, fmt("GAT eq %.4g wf %.4g refim %.4g, AET refim/eq %.3f", r[0].gat_bps,
                    r[1].gat_bps, r[2].gat_bps, r[2].aet_bps / r[0].aet_bps)};
}

Outcome near_optimality() {
  const Scenario base = cli::preset("toy");
  double sum = 0.0;
  int at_least_wf = 0;
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    const Network net = build_network(base.network, seed);
    const ChannelModel ch(net, base.propagation, seed);
    const GainSnapshot g = ch.snapshot(0);
    const std::vector<double> w(net.user_count(), 1.0);
    const OracleResult o = brute_force(net, g, w);
    const StaticResult refim = evaluate_static(net, g, w, Algorithm::kRefim);
    const StaticResult wf = evaluate_static(net, g, w, Algorithm::kWf);
    ledger.add(net, o.powers, o.schedule, {});
    ledger.add(net, refim.powers, refim.schedule, refim.bisection);
    ledger.add(net, wf.powers, wf.schedule, wf.bisection);
    const double rr = refim.objective / o.objective;
    sum += rr;
    at_least_wf += rr >= wf.objective / o.objective;
  }
  const double mean = sum / seeds;
  return {mean >= 0.90 && at_least_wf >= 16,
          fmt("mean REFIM/oracle %.4f, REFIM >= WF on %d/%d seeds", mean, at_least_wf, seeds)};
}

Outcome wf_reduction() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> wdist(0.2, 5.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    NetworkSpec spec;
    spec.rings = 1;
    spec.users.macro = 4;
    const Network net = build_network(spec, 500 + trial);
    const ChannelModel ch(net, {}, 500 + trial);
    const GainSnapshot g = ch.snapshot(0);
    const PowerMatrix init = random_powers(net, rng);
    std::vector<double> w(net.user_count());
    for (double& x : w) x = wdist(rng);
    GeneralOptions opt;
    opt.feedback.reference_count = 0;
    const GeneralResult got = general_algorithm(net, g, w, init, opt);
    ledger.add(net, got.powers, got.schedule, got.bisection);
    const ReceivedField field(g, init);
    const std::vector<std::vector<ReferenceInfo>> none(net.subchannel_count());
    for (BsIndex n = 0; n < net.bs_count(); ++n) {
      const auto in = power_inputs(n, g, field, init, got.schedule, w, none, 1.0);
      const BisectionResult wf = water_filling(in, net.bs(n).max_power_w);
      for (std::size_t s = 0; s < net.subchannel_count(); ++s) {
        worst = std::max(worst, std::abs(got.powers.at(n, s) - wf.powers[s]));
      }
    }
  }
  return {worst <= 1e-9, fmt("max |p_refim - p_wf| = %.3g W over 100 instances", worst)};
}

Outcome decomposition() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> small(1, 2);
  std::uniform_int_distribution<std::size_t> users(1, 3);
  std::uniform_real_distribution<double> wdist(0.1, 5.0);
  int exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> per_bs(small(rng));
    for (auto& c : per_bs) c = users(rng);
    const std::size_t S = small(rng);
    const Network net = tiny_network(per_bs, S);
    const GainSnapshot g = random_snapshot(net, rng);
    const PowerMatrix p = random_powers(net, rng);
    std::vector<double> w(net.user_count());
    for (double& x : w) x = wdist(rng);
    const ScheduleMap greedy_map = schedule_all(net, g, p, w, 1.0);
    ledger.add(net, p, greedy_map, {});
    const double greedy = objective(g, p, greedy_map, w, 1.0);
    ScheduleMap m(net.bs_count(), S);
    double best = -1.0;
    std::function<void(std::size_t)> enumerate = [&](std::size_t cell) {
      if (cell == net.bs_count() * S) {
        best = std::max(best, objective(g, p, m, w, 1.0));
        return;
      }
      const BsIndex n = cell / S;
      const std::size_t s = cell % S;
      m.at(n, s) = kNoUser;
      enumerate(cell + 1);
      for (UserIndex k : net.users_of(n)) {
        m.at(n, s) = k;
        enumerate(cell + 1);
      }
    };
    enumerate(0);
    exact += greedy == best;
  }
  return {exact == 100, fmt("argmax equals enumeration on %d/100 instances", exact)};
}

Outcome partition() {
  Scenario s = cli::preset("two-cell");
  s.slots = 700;
  s.warmup = 500;
  s.trace.powers = true;
  s.trace.schedule = true;
  s.trace.from_slot = 500;
  s.trace.to_slot = 700;
  const Network net = build_network(s.network, s.seed);
  const RunResult r = run(s, net);
  ledger.add(r);
  const std::size_t N = r.bs_count;
  const std::size_t S = r.subchannel_count;
  const std::size_t T = r.traced_slots;
  std::vector<std::vector<bool>> upper(N, std::vector<bool>(S, false));
  for (std::size_t n = 0; n < N; ++n) {
    std::vector<double> avg(S, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t c = 0; c < S; ++c) avg[c] += r.power_trace[(t * N + n) * S + c];
    }
    std::vector<std::size_t> rank(S);
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(),
                     [&](std::size_t a, std::size_t b) { return avg[a] > avg[b]; });
    for (std::size_t i = 0; i < S / 2; ++i) upper[n][rank[i]] = true;
  }
  std::size_t hits = 0;
  std::size_t served = 0;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t c = 0; c < S; ++c) {
        const UserIndex k = r.schedule_trace[(t * N + n) * S + c];
        if (k == kNoUser) continue;
        if (distance(net.user(k).position, net.bs(n).position) < s.network.edge_band.min_m) {
          continue;
        }
        ++served;
        hits += upper[n][c];
      }
    }
  }
  const double share = served == 0 ? 0.0 : static_cast<double>(hits) / served;
  return {share >= 0.80, fmt("edge pairs on upper-half subchannels %.3f (%zu pairs)", share,
                             served)};
}

Outcome staleness() {
  std::vector<Scenario> v;
  for (MobilityKind kind : {MobilityKind::kNomadic, MobilityKind::kMobile}) {
    for (std::size_t period : {1, 200}) {
      Scenario s = cli::preset("hex19");
      s.network.mobility = kind;
      s.network.speed_kmh = kind == MobilityKind::kMobile ? 60.0 : 3.0;
      s.feedback.period_slots = period;
      v.push_back(s);
    }
  }
  const auto r = simulate(v);
  const double nomadic = (r[0].gat_bps - r[1].gat_bps) / r[0].gat_bps;
  const double mobile = (r[2].gat_bps - r[3].gat_bps) / r[2].gat_bps;
  return {mobile >= 0.03 && nomadic < 0.05,
          fmt("GAT gap T=1 vs T=200: mobile %.2f%%, nomadic %.2f%%", 100 * mobile,
              100 * nomadic)};
}

Outcome sharing_vs_splitting() {
  Scenario base = cli::preset("hetnet10");
  base.network.rings = 1;
  std::vector<Scenario> v{base};
  const std::size_t S = base.network.bs.subchannel_count;
  for (std::size_t m = 0; m <= S; ++m) {
    Scenario s = base;
    s.algorithm = Algorithm::kEq;
    s.spectrum = {true, m};
    v.push_back(s);
  }
  const auto r = simulate(v);
  std::size_t best = 1;
  for (std::size_t i = 2; i < r.size(); ++i) {
    if (r[i].gat_bps > r[best].gat_bps) best = i;
  }
  return {r[0].gat_bps >= r[best].gat_bps,
          fmt("REFIM sharing GAT %.4g, best EQ split %.4g at %zu macro subchannels",
              r[0].gat_bps, r[best].gat_bps, best - 1)};
}

Outcome partial_deployment() {
  const Scenario base = cli::preset("mixed-density");
  Scenario eq = base;
  eq.algorithm = Algorithm::kEq;
  Scenario half = base;
  half.network.deployment_fraction = 0.5;
  const auto r = simulate({eq, base, half});
  const double ratio = (r[2].gat_bps - r[0].gat_bps) / (r[1].gat_bps - r[0].gat_bps);
  return {r[1].gat_bps > r[0].gat_bps && ratio >= 0.70,
          fmt("half deployment keeps %.3f of the full GAT gain over EQ", ratio)};
}

Outcome determinism() {
  Scenario s = cli::preset("two-cell");
  s.slots = 400;
  s.warmup = 100;
  s.trace.powers = true;
  const Network net = build_network(s.network, s.seed);
  std::string out[2];
  for (std::string& o : out) {
    const RunResult r = run(s, net);
    ledger.add(r);
    o = cli::summary_json(s, r) + cli::users_csv(net, r) + cli::powers_csv(r);
  }
  const bool same = out[0] == out[1];
  // The bound is ceil(log2(lambda_max / delta_lambda)) with
  // delta_lambda = 1e-9 lambda_max.
  const int bound = static_cast<int>(std::ceil(std::log2(1e9)));
  const bool bounded = ledger.bisection.bound_violations == 0 &&
                       ledger.bisection.max_iterations <= bound;
  return {same && bounded,
          fmt("outputs %s, %zu bisections, max %d iterations (bound %d), %zu over bound",
              same ? "identical" : "differ", ledger.bisection.runs,
              ledger.bisection.max_iterations, bound, ledger.bisection.bound_violations)};
}

Outcome channel_properties() {
  const PropagationConfig cfg;
  const double macro = path_loss_db({Tier::kMacro, false}, 100.0, cfg);
  const double femto = path_loss_db({Tier::kFemto, false}, 10.0, cfg);
  const bool spots = std::abs(macro - 91.82) <= 0.01 && std::abs(femto - 69.0) <= 0.01;

  const std::size_t users = 50;
  const std::size_t subchannels = 4;
  const double speed = 3.0 / 3.6;
  const double dt = 1e-3;
  const std::vector<double> speeds(users, speed);
  const std::vector<std::uint8_t> faded(users, 1);
  FadingState f(speeds, 1, subchannels, faded, cfg.carrier_hz, 11);
  const double fd = doppler_hz(speed, cfg.carrier_hz);
  const std::vector<std::size_t> lags = {1, 10, 25, 50, 100};
  const std::size_t horizon = 100000;
  const std::size_t links = users * subchannels;
  const std::size_t span = lags.back() + 1;
  std::vector<std::complex<double>> ring(span * links);
  std::vector<std::complex<double>> corr(lags.size());
  double power_sum = 0.0;
  double norm = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0) f.advance(dt);
    const std::size_t slot = t % span;
    for (std::size_t i = 0; i < links; ++i) {
      ring[slot * links + i] = f.coefficient(i / subchannels, 0, i % subchannels);
      power_sum += f.power(i / subchannels, 0, i % subchannels);
    }
    if (t + 1 < span) continue;
    for (std::size_t j = 0; j < lags.size(); ++j) {
      const std::size_t back = (t - lags[j]) % span;
      for (std::size_t i = 0; i < links; ++i) {
        corr[j] += ring[slot * links + i] * std::conj(ring[back * links + i]);
      }
    }
    for (std::size_t i = 0; i < links; ++i) norm += std::norm(ring[slot * links + i]);
  }
  const double mean = power_sum / static_cast<double>(horizon * links);
  double worst = 0.0;
  for (std::size_t j = 0; j < lags.size(); ++j) {
    const double j0 = std::cyl_bessel_j(
        0.0, 2.0 * std::numbers::pi * fd * static_cast<double>(lags[j]) * dt);
    worst = std::max(worst, std::abs(corr[j].real() / norm - j0));
  }
  return {spots && std::abs(mean - 1.0) <= 0.03 && worst <= 0.02,
          fmt("path loss %.4f / %.4f dB, fading mean %.4f, max |rho - J0| %.4f", macro, femto,
              mean, worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // Constraint safety and determinism read the ledger filled by the others.
  const std::vector<Criterion> criteria = {
      {1, "algorithm ordering", ordering},
      {2, "near-optimality vs oracle", near_optimality},
      {3, "zero-tax reduction to water-filling", wf_reduction},
      {4, "per-subchannel scheduling decomposition", decomposition},
      {5, "two-cell emergent partition", partition},
      {6, "feedback staleness", staleness},
      {8, "sharing vs splitting", sharing_vs_splitting},
      {9, "partial deployment", partial_deployment},
      {10, "determinism and bisection bounds", determinism},
      {11, "channel model properties", channel_properties},
      {7, "constraint safety",
       [] {
         return Outcome{ledger.power_violations == 0 && ledger.schedule_violations == 0,
                        fmt("%zu runs, %zu power and %zu schedule violations", ledger.runs,
                            ledger.power_violations, ledger.schedule_violations)};
       }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = c.check();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
