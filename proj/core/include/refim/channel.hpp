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

#ifndef REFIM_CHANNEL_HPP_
#define REFIM_CHANNEL_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "refim/topology.hpp"

namespace refim {

struct PropagationConfig {
  double macro_pl_a_db = 16.62;
  double macro_pl_b_db = 37.6;
  double indoor_pl_a_db = 37.0;
  double indoor_pl_b_db = 32.0;
  double penetration_loss_db = 10.0;
  double shadowing_macro_db = 8.0;
  double shadowing_femto_db = 4.0;
  double carrier_hz = 2e9;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 9.0;
  double sinr_gap = 1.0;  // linear, >= 1
  double min_distance_m = 1.0;
  int oscillators = 8;
  // Links whose mean gain is this many dB below the user's strongest link
  // keep their mean gain instead of a faded one.
  double fading_floor_db = 40.0;
};

// Throws std::invalid_argument when a field is out of range.
void validate(const PropagationConfig& config);

struct LinkClass {
  Tier bs_tier = Tier::kMacro;
  bool crosses_wall = false;
};

LinkClass link_class(const Network& network, UserIndex k, BsIndex n);

// Macro/pico links use the outdoor model, femto links the indoor one; a
// wall crossing adds the penetration loss. Distances below
// `min_distance_m` are clamped.
double path_loss_db(LinkClass link, double distance_m,
                    const PropagationConfig& config = {});

double sample_shadowing(std::mt19937_64& rng, double sigma_db);

double doppler_hz(double speed_mps, double carrier_hz);

double noise_watts(const PropagationConfig& config,
                   double subchannel_bandwidth_hz);

// Sum-of-sinusoids Rayleigh fading. Each user has its own set of arrival
// angles; each (user, BS, subchannel) link has its own random oscillator
// phases. In-phase and quadrature parts use `oscillators` sinusoids each.
class FadingState {
 public:
  FadingState(std::span<const double> user_speeds_mps, std::size_t bs_count,
              std::size_t subchannel_count,
              std::span<const std::uint8_t> faded_links, double carrier_hz,
              std::uint64_t seed, int oscillators = 8);

  void advance(double dt_s);

  std::complex<double> coefficient(UserIndex k, BsIndex n,
                                   std::size_t s) const;
  // |h|^2; 1 for links without fading.
  double power(UserIndex k, BsIndex n, std::size_t s) const;

  bool faded(UserIndex k, BsIndex n) const {
    return link_slot_[k * bs_count_ + n] >= 0;
  }
  double elapsed_s() const { return elapsed_s_; }

 private:
  void refresh_rotations(double dt_s);

  std::size_t user_count_;
  std::size_t bs_count_;
  std::size_t subchannel_count_;
  int oscillators_;
  double elapsed_s_ = 0.0;
  double cached_dt_s_ = -1.0;
  std::vector<double> doppler_rad_s_;  // per user
  std::vector<double> freq_i_;         // per user x oscillator
  std::vector<double> freq_q_;
  std::vector<std::complex<double>> rot_i_;
  std::vector<std::complex<double>> rot_q_;
  std::vector<std::ptrdiff_t> link_slot_;  // per (k, n), -1 if unfaded
  std::vector<UserIndex> slot_user_;       // per faded (k, n)
  // Per faded (k, n, s): oscillators phasors for I then for Q.
  std::vector<std::complex<double>> phasors_;
  std::vector<double> power_;  // per faded (k, n, s), cached |h|^2
};

// Per-slot linear gains g[k][n][s] and noise powers sigma[k][s].
struct GainSnapshot {
  std::size_t user_count = 0;
  std::size_t bs_count = 0;
  std::size_t subchannel_count = 0;
  std::size_t slot = 0;
  std::vector<double> gains;
  std::vector<double> noise;

  double gain(UserIndex k, BsIndex n, std::size_t s) const {
    return gains[(k * bs_count + n) * subchannel_count + s];
  }
  double& gain(UserIndex k, BsIndex n, std::size_t s) {
    return gains[(k * bs_count + n) * subchannel_count + s];
  }
  double noise_w(UserIndex k, std::size_t s) const {
    return noise[k * subchannel_count + s];
  }
  double& noise_w(UserIndex k, std::size_t s) {
    return noise[k * subchannel_count + s];
  }
};

// Builds an empty snapshot of the right shape with all gains set to
// `gain` and all noise set to `noise`.
GainSnapshot make_snapshot(std::size_t users, std::size_t bss,
                           std::size_t subchannels, double gain, double noise);

// Large-scale attenuation (path loss + shadowing) in dB per (k, n).
struct LargeScale {
  std::size_t bs_count = 0;
  std::vector<double> loss_db;
  std::vector<double> linear;  // 10^(-loss_db/10)
  double at(UserIndex k, BsIndex n) const { return loss_db[k * bs_count + n]; }
  double gain(UserIndex k, BsIndex n) const { return linear[k * bs_count + n]; }
};

// g = 10^(-(PL + SH)/10) * |h|^2 and sigma = N0 * B/S * NF.
GainSnapshot snapshot(const Network& network, const PropagationConfig& config,
                      const LargeScale& large_scale, const FadingState* fading,
                      std::size_t slot);

// Owns everything that evolves in the channel: shadowing (fixed), mobile
// user positions (random waypoint inside the serving cell) and fading.
class ChannelModel {
 public:
  ChannelModel(const Network& network, const PropagationConfig& config,
               std::uint64_t seed);

  void advance(double dt_s);
  GainSnapshot snapshot(std::size_t slot) const;
  // Same as snapshot() with |h|^2 = 1 on every link.
  GainSnapshot mean_snapshot() const;

  const LargeScale& large_scale() const { return large_scale_; }
  const FadingState& fading() const { return fading_; }
  std::span<const Position> positions() const { return positions_; }

 private:
  void update_large_scale(UserIndex k);

  const Network* network_;
  PropagationConfig config_;
  std::vector<double> shadowing_db_;  // per (k, n)
  std::vector<Position> positions_;
  std::vector<Position> waypoints_;
  std::mt19937_64 mobility_rng_;
  LargeScale large_scale_;
  FadingState fading_;
};

// Edge iff (strongest neighbor gain / serving gain) >= -threshold_db, with
// gains averaged over subchannels. Users of BSs without neighbors are never
// edge users.
std::vector<bool> classify_edge_users(const Network& network,
                                      const GainSnapshot& gains,
                                      double threshold_db);

double edge_fraction(const std::vector<bool>& edge);

// Debug dump: user,bs,subchannel,gain
void write_snapshot_csv(std::ostream& out, const GainSnapshot& gains);

}  // namespace refim

#endif  // REFIM_CHANNEL_HPP_
