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

#include "refim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "refim/metrics.hpp"
#include "refim/seeding.hpp"

namespace refim {
namespace {

constexpr double kKmhToMps = 1000.0 / 3600.0;

Network build_toy(const NetworkSpec& spec, std::uint64_t seed) {
  std::vector<BaseStation> bss;
  std::vector<std::vector<BsIndex>> neighbors(spec.toy_bs_count);
  for (BsIndex n = 0; n < spec.toy_bs_count; ++n) {
    BaseStation bs;
    bs.id = n;
    bs.tier = Tier::kMacro;
    bs.position = {spec.isd_m * static_cast<double>(n), 0.0};
    bs.max_power_w = spec.bs.macro_power_w;
    bs.mask_w.assign(spec.bs.subchannel_count, spec.bs.macro_power_w);
    bs.coverage = {Coverage::Shape::kDisc, bs.position, 0.5 * spec.isd_m};
    bss.push_back(std::move(bs));
    for (BsIndex m = 0; m < spec.toy_bs_count; ++m) {
      if (m != n) neighbors[n].push_back(m);
    }
  }
  const double extent = spec.isd_m * static_cast<double>(spec.toy_bs_count);
  const Network empty(std::move(bss), {}, std::move(neighbors), {},
                      spec.bs.subchannel_count, spec.bs.bandwidth_hz, {},
                      Rect{-spec.isd_m, -spec.isd_m, extent, spec.isd_m});
  return place_users(empty, spec.users, seed);
}

Network with_mobility(const Network& network, MobilityKind kind,
                      double speed_mps) {
  std::vector<User> users(network.users().begin(), network.users().end());
  for (User& u : users) u.mobility = {kind, speed_mps};
  return network.with_users(std::move(users));
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a non-negative integer: " + std::string(text));
  }
  return v;
}

double parse_real(std::string_view text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(std::string(text), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument("not a number: " + std::string(text));
  }
  return v;
}

LoopCaps parse_caps(std::string_view text) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) {
    throw std::invalid_argument("loop caps must look like 3x3");
  }
  LoopCaps caps{parse_count(text.substr(0, x)), parse_count(text.substr(x + 1))};
  if (caps.scheduling < 1 || caps.power < 1) {
    throw std::invalid_argument("loop caps must be >= 1");
  }
  return caps;
}

}  // namespace

void validate(const NetworkSpec& spec) {
  if (spec.rings < 0) throw std::invalid_argument("rings must be >= 0");
  if (!(spec.isd_m > 0.0)) throw std::invalid_argument("isd must be > 0");
  if (spec.bs.subchannel_count < 1) {
    throw std::invalid_argument("need at least one subchannel");
  }
  if (!(spec.bs.bandwidth_hz > 0.0) || !(spec.bs.macro_power_w > 0.0) ||
      !(spec.bs.femto_power_w > 0.0)) {
    throw std::invalid_argument("bandwidth and BS powers must be > 0");
  }
  if (spec.deployment_fraction < 0.0 || spec.deployment_fraction > 1.0) {
    throw std::invalid_argument("deployment fraction must be in [0, 1]");
  }
  if (spec.speed_kmh < 0.0) throw std::invalid_argument("speed must be >= 0");
  if (spec.layout == Layout::kToy && spec.toy_bs_count < 1) {
    throw std::invalid_argument("toy layout needs at least one BS");
  }
  if (spec.users.macro < 1) {
    throw std::invalid_argument("every cell needs at least one user");
  }
  if (spec.layout == Layout::kHeterogeneous && spec.femtos_per_macro > 0 &&
      spec.users.femto < 1) {
    throw std::invalid_argument("every femto cell needs at least one user");
  }
  if (spec.layout == Layout::kTwoCell && spec.users_per_group < 1) {
    throw std::invalid_argument("users per group must be >= 1");
  }
}

Network build_network(const NetworkSpec& spec, std::uint64_t seed) {
  validate(spec);
  const std::uint64_t topo = derive_seed(seed, StreamTag::kTopology);
  const std::uint64_t users = derive_seed(seed, StreamTag::kUsers);
  Network network = [&] {
    switch (spec.layout) {
      case Layout::kHexGrid:
        return place_users(build_hex_grid(spec.rings, spec.isd_m, spec.wrap,
                                          spec.bs),
                           spec.users, users);
      case Layout::kTwoCell:
        return build_linear_two_cell(spec.bs_distance_m, spec.center_band,
                                     spec.edge_band, spec.users_per_group,
                                     users, spec.bs);
      case Layout::kHeterogeneous:
        return place_users(
            build_heterogeneous(build_hex_grid(spec.rings, spec.isd_m,
                                               spec.wrap, spec.bs),
                                spec.femtos_per_macro, spec.mix,
                                spec.home_size_m, topo, spec.bs),
            spec.users, users);
      case Layout::kMixedDensity:
        return place_users(build_mixed_density(spec.isd_m, topo, spec.bs),
                           spec.users, users);
      case Layout::kToy:
        return build_toy(spec, users);
    }
    throw std::invalid_argument("unknown layout");
  }();
  network = with_mobility(network, spec.mobility, spec.speed_kmh * kKmhToMps);
  if (spec.deployment_fraction < 1.0) {
    network = with_refim_deployment(network, spec.deployment_fraction);
  }
  return network;
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kEq:
      return "eq";
    case Algorithm::kWf:
      return "wf";
    case Algorithm::kRefim:
      return "refim";
    case Algorithm::kGeneral:
      return "general";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kEq, Algorithm::kWf, Algorithm::kRefim,
                      Algorithm::kGeneral}) {
    if (name == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm: " + std::string(name));
}

void validate(const Scenario& scenario) {
  validate(scenario.network);
  validate(scenario.propagation);
  validate(scenario.feedback);
  if (scenario.slots < 1) throw std::invalid_argument("slots must be >= 1");
  if (scenario.warmup >= scenario.slots) {
    throw std::invalid_argument("warmup must be shorter than the run");
  }
  if (scenario.spectrum.splitting &&
      scenario.spectrum.macro_subchannels > scenario.network.bs.subchannel_count) {
    throw std::invalid_argument("split ratio exceeds the subchannel count");
  }
  if (!(scenario.slot_s > 0.0)) throw std::invalid_argument("slot length must be > 0");
  if (!(scenario.ewma_beta > 0.0 && scenario.ewma_beta <= 1.0)) {
    throw std::invalid_argument("EWMA beta must be in (0, 1]");
  }
  if (!(scenario.initial_throughput_bps > 0.0)) {
    throw std::invalid_argument("initial throughput must be > 0");
  }
  if (scenario.caps.scheduling < 1 || scenario.caps.power < 1) {
    throw std::invalid_argument("loop caps must be >= 1");
  }
  if (scenario.utility.kind == UtilityKind::kAlphaFair &&
      !(scenario.utility.alpha > 0.0)) {
    throw std::invalid_argument("alpha must be > 0");
  }
  if (scenario.measurement_noise_db < 0.0) {
    throw std::invalid_argument("measurement noise must be >= 0");
  }
}

PowerMatrix effective_powers(const Network& network,
                             const SpectrumPolicy& policy) {
  PowerMatrix powers = PowerMatrix::for_network(network);
  if (!policy.splitting) return powers;
  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    const bool femto = network.bs(n).tier == Tier::kFemto;
    for (std::size_t s = 0; s < network.subchannel_count(); ++s) {
      const bool macro_band = s < policy.macro_subchannels;
      if (femto == macro_band) powers.set_mask(n, s, 0.0);
    }
  }
  return powers;
}

RunResult run(const Scenario& scenario) {
  validate(scenario);
  return run(scenario, build_network(scenario.network, scenario.seed));
}

RunResult run(const Scenario& scenario, const Network& network) {
  validate(scenario);
  const std::size_t K = network.user_count();
  const std::size_t N = network.bs_count();
  const std::size_t S = network.subchannel_count();
  const double gap = scenario.propagation.sinr_gap;
  const double sub_bw = network.subchannel_bandwidth_hz();

  ChannelModel channel(network, scenario.propagation, scenario.seed);
  std::vector<UserState> states =
      initial_user_states(K, scenario.initial_throughput_bps);
  PowerMatrix previous = effective_powers(network, scenario.spectrum);
  std::mt19937_64 init_rng = make_stream(scenario.seed, StreamTag::kInitialPower);
  std::mt19937_64 meas_rng = make_stream(scenario.seed, StreamTag::kMeasurement);

  const bool uses_tables = scenario.algorithm == Algorithm::kRefim ||
                           scenario.algorithm == Algorithm::kGeneral;
  std::optional<CandidateTables> tables;
  if (uses_tables) tables.emplace(network, scenario.feedback);

  RunResult result;
  result.slots = scenario.slots;
  result.bs_count = N;
  result.subchannel_count = S;
  result.edge = classify_edge_users(network, channel.mean_snapshot(),
                                    scenario.feedback.edge_threshold_db);
  if (scenario.trace.protocol) result.protocol.emplace();
  result.trace_from = std::min(scenario.trace.from_slot, scenario.slots);
  const bool tracing = scenario.trace.powers || scenario.trace.schedule;

  GeneralOptions options;
  options.bisection.sinr_gap = gap;
  options.feedback = scenario.feedback;
  options.measurement_noise_db = scenario.measurement_noise_db;
  options.measurement_rng = &meas_rng;
  options.trace = result.protocol ? &*result.protocol : nullptr;
  if (scenario.algorithm == Algorithm::kWf) options.feedback.reference_count = 0;
  if (scenario.algorithm == Algorithm::kGeneral) options.caps = scenario.caps;

  std::vector<double> served_sum(K, 0.0);
  for (std::size_t t = 0; t < scenario.slots; ++t) {
    if (t > 0) channel.advance(scenario.slot_s);
    const GainSnapshot gains = channel.snapshot(t);
    const std::vector<double> weights = update_weights(states, scenario.utility);

    PowerMatrix committed;
    ScheduleMap schedule;
    if (scenario.algorithm == Algorithm::kEq) {
      committed = previous;
      for (BsIndex n = 0; n < N; ++n) {
        committed.set_row(n, equal_power_on_allowed(committed.budget(n),
                                                    committed.mask_row(n)));
      }
      schedule = schedule_all(network, gains, committed, weights, gap);
    } else {
      const PowerMatrix initial =
          initial_power(scenario.initial_power, previous, t, init_rng);
      if (tables) {
        tables->observe(gains, ReceivedField(gains, initial), weights, t,
                        options.trace);
        options.tables = &*tables;
      }
      options.slot = t;
      GeneralResult step =
          general_algorithm(network, gains, weights, initial, options);
      result.bisection.merge(step.bisection);
      committed = std::move(step.powers);
      schedule = std::move(step.schedule);
    }

    result.power_violations += committed.violations();
    result.schedule_violations += schedule_violations(network, schedule);
    const std::vector<double> served =
        served_rates(gains, committed, schedule, gap, sub_bw);
    update_throughput(states, served, scenario.ewma_beta);
    if (t >= scenario.warmup) {
      for (UserIndex k = 0; k < K; ++k) served_sum[k] += served[k];
    }
    if (tracing && t >= scenario.trace.from_slot && t < scenario.trace.to_slot) {
      ++result.traced_slots;
      if (scenario.trace.powers) {
        const auto v = committed.values();
        result.power_trace.insert(result.power_trace.end(), v.begin(), v.end());
      }
      if (scenario.trace.schedule) {
        for (BsIndex n = 0; n < N; ++n) {
          for (std::size_t s = 0; s < S; ++s) {
            result.schedule_trace.push_back(schedule.at(n, s));
          }
        }
      }
    }
    previous = std::move(committed);
  }

  const double window = static_cast<double>(scenario.slots - scenario.warmup);
  result.throughput_bps.resize(K);
  result.final_ewma_bps.resize(K);
  for (UserIndex k = 0; k < K; ++k) {
    result.throughput_bps[k] = served_sum[k] / window;
    result.final_ewma_bps[k] = states[k].avg_throughput_bps;
  }
  result.gat_bps = gat(result.throughput_bps, &result.zero_throughput_users);
  result.aet_bps = aet(result.throughput_bps);
  result.aat_bps = aat(result.throughput_bps);
  return result;
}

std::vector<RunResult> run_all(std::span<const Scenario> scenarios,
                               std::size_t threads) {
  for (const Scenario& s : scenarios) validate(s);
  std::vector<RunResult> results(scenarios.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(scenarios.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(scenarios.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        results[i] = run(scenarios[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kFeedbackPeriod:
      return "feedback_period";
    case SweepAxis::kSplitRatio:
      return "split_ratio";
    case SweepAxis::kFemtoDensity:
      return "femto_density";
    case SweepAxis::kRefCount:
      return "ref_count";
    case SweepAxis::kLoopCaps:
      return "loop_caps";
    case SweepAxis::kDeploymentFraction:
      return "deployment_fraction";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (SweepAxis a :
       {SweepAxis::kFeedbackPeriod, SweepAxis::kSplitRatio,
        SweepAxis::kFemtoDensity, SweepAxis::kRefCount, SweepAxis::kLoopCaps,
        SweepAxis::kDeploymentFraction}) {
    if (name == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown sweep axis: " + std::string(name));
}

std::vector<std::string> parse_sweep_values(std::string_view text) {
  std::vector<std::string> out;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    const std::size_t lo = parse_count(text.substr(0, dots));
    const std::size_t hi = parse_count(text.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty value range");
    for (std::size_t v = lo; v <= hi; ++v) out.push_back(std::to_string(v));
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const std::string_view item = text.substr(start, end - start);
    if (item.empty()) throw std::invalid_argument("empty sweep value");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<SweepPoint> sweep_points(const Scenario& base, SweepAxis axis,
                                     std::span<const std::string> values) {
  if (values.empty()) throw std::invalid_argument("no sweep values");
  std::vector<SweepPoint> points;
  for (const std::string& v : values) {
    Scenario s = base;
    switch (axis) {
      case SweepAxis::kFeedbackPeriod:
        s.feedback.period_slots = parse_count(v);
        s.feedback.nomadic_period_slots = 0;
        s.feedback.mobile_period_slots = 0;
        break;
      case SweepAxis::kSplitRatio:
        s.spectrum = {true, parse_count(v)};
        break;
      case SweepAxis::kFemtoDensity:
        s.network.femtos_per_macro = parse_count(v);
        break;
      case SweepAxis::kRefCount:
        s.feedback.reference_count = parse_count(v);
        break;
      case SweepAxis::kLoopCaps:
        s.algorithm = Algorithm::kGeneral;
        s.caps = parse_caps(v);
        break;
      case SweepAxis::kDeploymentFraction:
        s.network.deployment_fraction = parse_real(v);
        break;
    }
    validate(s);
    points.push_back({v, std::move(s)});
  }
  if (axis == SweepAxis::kSplitRatio) {
    Scenario s = base;
    s.spectrum = {};
    points.push_back({"sharing", std::move(s)});
  }
  return points;
}

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            std::span<const std::string> values,
                            std::size_t threads) {
  std::vector<SweepPoint> points = sweep_points(base, axis, values);
  std::vector<Scenario> scenarios;
  for (const SweepPoint& p : points) scenarios.push_back(p.scenario);
  std::vector<RunResult> results = run_all(scenarios, threads);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back({points[i].value, std::move(results[i])});
  }
  return rows;
}

StaticResult evaluate_static(const Network& network, const GainSnapshot& gains,
                             std::span<const double> weights,
                             Algorithm algorithm, std::size_t passes,
                             const FeedbackConfig& feedback, double sinr_gap) {
  StaticResult out;
  std::mt19937_64 unused(0);
  PowerMatrix powers = initial_power(InitialPowerRule::kUniform,
                                     PowerMatrix::for_network(network), 0,
                                     unused);
  if (algorithm != Algorithm::kEq) {
    GeneralOptions options;
    options.feedback = feedback;
    options.bisection.sinr_gap = sinr_gap;
    if (algorithm == Algorithm::kWf) options.feedback.reference_count = 0;
    for (std::size_t i = 0; i < std::max<std::size_t>(passes, 1); ++i) {
      GeneralResult r = general_algorithm(network, gains, weights, powers, options);
      out.bisection.merge(r.bisection);
      powers = std::move(r.powers);
    }
  }
  out.schedule = schedule_all(network, gains, powers, weights, sinr_gap);
  out.objective = objective(gains, powers, out.schedule, weights, sinr_gap);
  out.powers = std::move(powers);
  return out;
}

}  // namespace refim
