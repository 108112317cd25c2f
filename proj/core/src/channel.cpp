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

#include "refim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "refim/seeding.hpp"

namespace refim {
namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::vector<double> draw_shadowing(const Network& network,
                                   const PropagationConfig& config,
                                   std::uint64_t seed) {
  std::mt19937_64 rng = make_stream(seed, StreamTag::kShadowing);
  std::vector<double> out(network.user_count() * network.bs_count());
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    for (BsIndex n = 0; n < network.bs_count(); ++n) {
      const double sigma = network.bs(n).tier == Tier::kFemto
                               ? config.shadowing_femto_db
                               : config.shadowing_macro_db;
      out[k * network.bs_count() + n] = sample_shadowing(rng, sigma);
    }
  }
  return out;
}

std::vector<Position> initial_positions(const Network& network) {
  std::vector<Position> out;
  out.reserve(network.user_count());
  for (const User& u : network.users()) out.push_back(u.position);
  return out;
}

double link_loss_db(const Network& network, const PropagationConfig& config,
                    std::span<const double> shadowing, Position p,
                    UserIndex k, BsIndex n) {
  const double d = network.distance_to_bs(p, n);
  return path_loss_db(link_class(network, k, n), d, config) +
         shadowing[k * network.bs_count() + n];
}

LargeScale compute_large_scale(const Network& network,
                               const PropagationConfig& config,
                               std::span<const double> shadowing,
                               std::span<const Position> positions) {
  LargeScale ls;
  ls.bs_count = network.bs_count();
  ls.loss_db.resize(network.user_count() * network.bs_count());
  ls.linear.resize(ls.loss_db.size());
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    for (BsIndex n = 0; n < network.bs_count(); ++n) {
      const double loss =
          link_loss_db(network, config, shadowing, positions[k], k, n);
      ls.loss_db[k * ls.bs_count + n] = loss;
      ls.linear[k * ls.bs_count + n] = std::pow(10.0, -loss / 10.0);
    }
  }
  return ls;
}

FadingState build_fading(const Network& network,
                         const PropagationConfig& config,
                         const LargeScale& ls, std::uint64_t seed) {
  const std::size_t n_bs = network.bs_count();
  std::vector<double> speeds;
  std::vector<std::uint8_t> faded(network.user_count() * n_bs, 0);
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    speeds.push_back(network.user(k).mobility.speed_mps);
    double strongest = -std::numeric_limits<double>::infinity();
    std::vector<double> rx(n_bs);
    for (BsIndex n = 0; n < n_bs; ++n) {
      rx[n] = watts_to_dbm(network.bs(n).max_power_w) - ls.at(k, n);
      strongest = std::max(strongest, rx[n]);
    }
    for (BsIndex n = 0; n < n_bs; ++n) {
      faded[k * n_bs + n] = rx[n] >= strongest - config.fading_floor_db;
    }
  }
  return FadingState(speeds, n_bs, network.subchannel_count(), faded,
                     config.carrier_hz, derive_seed(seed, StreamTag::kFading),
                     config.oscillators);
}

}  // namespace

void validate(const PropagationConfig& c) {
  if (!(c.macro_pl_b_db > 0.0) || !(c.indoor_pl_b_db > 0.0)) {
    throw std::invalid_argument("path-loss slope must be positive");
  }
  if (!(c.sinr_gap >= 1.0)) {
    throw std::invalid_argument("SINR gap must be >= 1");
  }
  if (c.shadowing_macro_db < 0.0 || c.shadowing_femto_db < 0.0) {
    throw std::invalid_argument("shadowing sigma must be >= 0");
  }
  if (!(c.carrier_hz > 0.0) || !(c.min_distance_m > 0.0)) {
    throw std::invalid_argument("carrier and minimum distance must be > 0");
  }
  if (c.oscillators < 1) {
    throw std::invalid_argument("need at least one fading oscillator");
  }
}

LinkClass link_class(const Network& network, UserIndex k, BsIndex n) {
  const BaseStation& bs = network.bs(n);
  const User& u = network.user(k);
  if (bs.tier == Tier::kFemto) {
    return {Tier::kFemto, u.home != bs.home};
  }
  return {bs.tier, u.indoor};
}

double path_loss_db(LinkClass link, double distance_m,
                    const PropagationConfig& config) {
  const double d = std::max(distance_m, config.min_distance_m);
  double loss = link.bs_tier == Tier::kFemto
                    ? config.indoor_pl_a_db + config.indoor_pl_b_db * std::log10(d)
                    : config.macro_pl_a_db + config.macro_pl_b_db * std::log10(d);
  if (link.crosses_wall) loss += config.penetration_loss_db;
  return loss;
}

double sample_shadowing(std::mt19937_64& rng, double sigma_db) {
  if (sigma_db <= 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma_db);
  return dist(rng);
}

double doppler_hz(double speed_mps, double carrier_hz) {
  return speed_mps * carrier_hz / kSpeedOfLight;
}

double noise_watts(const PropagationConfig& config,
                   double subchannel_bandwidth_hz) {
  const double dbm = config.noise_psd_dbm_hz +
                     10.0 * std::log10(subchannel_bandwidth_hz) +
                     config.noise_figure_db;
  return dbm_to_watts(dbm);
}

FadingState::FadingState(std::span<const double> user_speeds_mps,
                         std::size_t bs_count, std::size_t subchannel_count,
                         std::span<const std::uint8_t> faded_links,
                         double carrier_hz, std::uint64_t seed,
                         int oscillators)
    : user_count_(user_speeds_mps.size()),
      bs_count_(bs_count),
      subchannel_count_(subchannel_count),
      oscillators_(oscillators) {
  if (oscillators_ < 1) throw std::invalid_argument("oscillators must be >= 1");
  if (faded_links.size() != user_count_ * bs_count_) {
    throw std::invalid_argument("faded-link mask has the wrong size");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const auto m = static_cast<std::size_t>(oscillators_);

  doppler_rad_s_.resize(user_count_);
  freq_i_.resize(user_count_ * m);
  freq_q_.resize(user_count_ * m);
  for (UserIndex k = 0; k < user_count_; ++k) {
    const double wd =
        2.0 * std::numbers::pi * doppler_hz(user_speeds_mps[k], carrier_hz);
    doppler_rad_s_[k] = wd;
    // Arrival angles restricted to one quadrant keep the oscillator
    // frequencies distinct.
    const double theta = phase(rng) - std::numbers::pi;
    for (std::size_t i = 0; i < m; ++i) {
      const double alpha =
          (2.0 * std::numbers::pi * static_cast<double>(i + 1) -
           std::numbers::pi + theta) /
          (4.0 * static_cast<double>(m));
      freq_i_[k * m + i] = wd * std::cos(alpha);
      freq_q_[k * m + i] = wd * std::sin(alpha);
    }
  }

  link_slot_.assign(user_count_ * bs_count_, -1);
  std::ptrdiff_t next = 0;
  for (std::size_t idx = 0; idx < faded_links.size(); ++idx) {
    if (faded_links[idx] != 0) {
      link_slot_[idx] = next++;
      slot_user_.push_back(idx / bs_count_);
    }
  }
  const std::size_t links = static_cast<std::size_t>(next) * subchannel_count_;
  phasors_.resize(links * 2 * m);
  power_.resize(links);
  for (std::size_t l = 0; l < links; ++l) {
    double xi = 0.0;
    double xq = 0.0;
    for (std::size_t i = 0; i < 2 * m; ++i) {
      const std::complex<double> z = std::polar(1.0, phase(rng));
      phasors_[l * 2 * m + i] = z;
      (i < m ? xi : xq) += z.real();
    }
    power_[l] = (xi * xi + xq * xq) / static_cast<double>(m);
  }
}

void FadingState::refresh_rotations(double dt_s) {
  if (dt_s == cached_dt_s_) return;
  rot_i_.resize(freq_i_.size());
  rot_q_.resize(freq_q_.size());
  for (std::size_t i = 0; i < freq_i_.size(); ++i) {
    rot_i_[i] = std::polar(1.0, freq_i_[i] * dt_s);
    rot_q_[i] = std::polar(1.0, freq_q_[i] * dt_s);
  }
  cached_dt_s_ = dt_s;
}

void FadingState::advance(double dt_s) {
  if (dt_s < 0.0) throw std::invalid_argument("dt must be >= 0");
  if (dt_s == 0.0) return;
  refresh_rotations(dt_s);
  elapsed_s_ += dt_s;
  const auto m = static_cast<std::size_t>(oscillators_);
  const double norm = 1.0 / static_cast<double>(m);
  for (std::size_t link = 0; link < slot_user_.size(); ++link) {
    const UserIndex k = slot_user_[link];
    const std::complex<double>* ri = &rot_i_[k * m];
    const std::complex<double>* rq = &rot_q_[k * m];
    for (std::size_t s = 0; s < subchannel_count_; ++s) {
      const std::size_t l = link * subchannel_count_ + s;
      std::complex<double>* z = &phasors_[l * 2 * m];
      double xi = 0.0;
      double xq = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        z[i] *= ri[i];
        xi += z[i].real();
      }
      for (std::size_t i = 0; i < m; ++i) {
        z[m + i] *= rq[i];
        xq += z[m + i].real();
      }
      power_[l] = (xi * xi + xq * xq) * norm;
    }
  }
}

std::complex<double> FadingState::coefficient(UserIndex k, BsIndex n,
                                              std::size_t s) const {
  const std::ptrdiff_t slot = link_slot_[k * bs_count_ + n];
  if (slot < 0) return {1.0, 0.0};
  const auto m = static_cast<std::size_t>(oscillators_);
  const std::size_t l = static_cast<std::size_t>(slot) * subchannel_count_ + s;
  double xi = 0.0;
  double xq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xi += phasors_[l * 2 * m + i].real();
    xq += phasors_[l * 2 * m + m + i].real();
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  return {xi * scale, xq * scale};
}

double FadingState::power(UserIndex k, BsIndex n, std::size_t s) const {
  const std::ptrdiff_t slot = link_slot_[k * bs_count_ + n];
  if (slot < 0) return 1.0;
  return power_[static_cast<std::size_t>(slot) * subchannel_count_ + s];
}

GainSnapshot make_snapshot(std::size_t users, std::size_t bss,
                           std::size_t subchannels, double gain,
                           double noise) {
  GainSnapshot g;
  g.user_count = users;
  g.bs_count = bss;
  g.subchannel_count = subchannels;
  g.gains.assign(users * bss * subchannels, gain);
  g.noise.assign(users * subchannels, noise);
  return g;
}

GainSnapshot snapshot(const Network& network, const PropagationConfig& config,
                      const LargeScale& large_scale, const FadingState* fading,
                      std::size_t slot) {
  const std::size_t S = network.subchannel_count();
  GainSnapshot g = make_snapshot(network.user_count(), network.bs_count(), S,
                                 0.0,
                                 noise_watts(config,
                                             network.subchannel_bandwidth_hz()));
  g.slot = slot;
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    for (BsIndex n = 0; n < network.bs_count(); ++n) {
      const double base = large_scale.gain(k, n);
      for (std::size_t s = 0; s < S; ++s) {
        g.gain(k, n, s) = fading ? base * fading->power(k, n, s) : base;
      }
    }
  }
  return g;
}

ChannelModel::ChannelModel(const Network& network,
                           const PropagationConfig& config, std::uint64_t seed)
    : network_(&network),
      config_(config),
      shadowing_db_((validate(config), draw_shadowing(network, config, seed))),
      positions_(initial_positions(network)),
      waypoints_(positions_),
      mobility_rng_(make_stream(seed, StreamTag::kMobility)),
      large_scale_(
          compute_large_scale(network, config, shadowing_db_, positions_)),
      fading_(build_fading(network, config, large_scale_, seed)) {
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    if (network.user(k).mobility.kind == MobilityKind::kMobile) {
      waypoints_[k] =
          sample_in_coverage(network, network.user(k).serving_bs, mobility_rng_);
    }
  }
}

void ChannelModel::update_large_scale(UserIndex k) {
  const std::size_t n_bs = network_->bs_count();
  for (BsIndex n = 0; n < n_bs; ++n) {
    const double loss =
        link_loss_db(*network_, config_, shadowing_db_, positions_[k], k, n);
    large_scale_.loss_db[k * n_bs + n] = loss;
    large_scale_.linear[k * n_bs + n] = std::pow(10.0, -loss / 10.0);
  }
}

void ChannelModel::advance(double dt_s) {
  for (UserIndex k = 0; k < network_->user_count(); ++k) {
    const User& u = network_->user(k);
    if (u.mobility.kind != MobilityKind::kMobile || u.mobility.speed_mps <= 0.0) {
      continue;
    }
    double step = u.mobility.speed_mps * dt_s;
    // Simplified random waypoint: head for the waypoint, draw a new one in
    // the serving cell on arrival.
    while (step > 0.0) {
      Position& p = positions_[k];
      const Position w = waypoints_[k];
      const double remaining = distance(p, w);
      if (remaining <= step) {
        p = w;
        step -= remaining;
        waypoints_[k] = sample_in_coverage(*network_, u.serving_bs, mobility_rng_);
        if (remaining == 0.0 && distance(p, waypoints_[k]) == 0.0) break;
      } else {
        p.x += (w.x - p.x) * step / remaining;
        p.y += (w.y - p.y) * step / remaining;
        step = 0.0;
      }
    }
    update_large_scale(k);
  }
  fading_.advance(dt_s);
}

GainSnapshot ChannelModel::snapshot(std::size_t slot) const {
  return refim::snapshot(*network_, config_, large_scale_, &fading_, slot);
}

GainSnapshot ChannelModel::mean_snapshot() const {
  return refim::snapshot(*network_, config_, large_scale_, nullptr, 0);
}

std::vector<bool> classify_edge_users(const Network& network,
                                      const GainSnapshot& gains,
                                      double threshold_db) {
  std::vector<bool> edge(network.user_count(), false);
  const std::size_t S = gains.subchannel_count;
  auto mean_gain = [&](UserIndex k, BsIndex n) {
    double acc = 0.0;
    for (std::size_t s = 0; s < S; ++s) acc += gains.gain(k, n, s);
    return acc / static_cast<double>(S);
  };
  for (UserIndex k = 0; k < network.user_count(); ++k) {
    const BsIndex serving = network.user(k).serving_bs;
    const auto nbrs = network.neighbors(serving);
    if (nbrs.empty()) continue;
    double strongest = 0.0;
    for (BsIndex m : nbrs) strongest = std::max(strongest, mean_gain(k, m));
    const double ratio_db =
        10.0 * std::log10(strongest / mean_gain(k, serving));
    edge[k] = ratio_db >= -threshold_db;
  }
  return edge;
}

double edge_fraction(const std::vector<bool>& edge) {
  if (edge.empty()) return 0.0;
  const auto count = std::count(edge.begin(), edge.end(), true);
  return static_cast<double>(count) / static_cast<double>(edge.size());
}

void write_snapshot_csv(std::ostream& out, const GainSnapshot& gains) {
  out << "user,bs,subchannel,gain\n";
  const auto old_precision = out.precision(17);
  for (UserIndex k = 0; k < gains.user_count; ++k) {
    for (BsIndex n = 0; n < gains.bs_count; ++n) {
      for (std::size_t s = 0; s < gains.subchannel_count; ++s) {
        out << k << ',' << n << ',' << s << ',' << gains.gain(k, n, s) << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace refim
