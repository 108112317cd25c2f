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

#ifndef REFIM_TOPOLOGY_HPP_
#define REFIM_TOPOLOGY_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refim {

using BsIndex = std::size_t;
using UserIndex = std::size_t;

inline constexpr UserIndex kNoUser = std::numeric_limits<UserIndex>::max();

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b);

enum class Tier : std::uint8_t { kMacro, kPico, kFemto };

std::string_view to_string(Tier tier);

// Region in which a cell's users are dropped and mobile users pick waypoints.
struct Coverage {
  enum class Shape : std::uint8_t {
    kHexagon,  // regular hexagon, `extent` = inter-site distance
    kDisc,     // disc, `extent` = radius
    kNearest,  // points whose nearest BS is this one, searched in a square
               // of half-side `extent` around `center`
  };
  Shape shape = Shape::kHexagon;
  Position center;
  double extent = 0.0;
};

struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool contains(Position p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
};

struct BaseStation {
  BsIndex id = 0;
  Tier tier = Tier::kMacro;
  Position position;
  double max_power_w = 0.0;
  std::vector<double> mask_w;  // per subchannel
  bool refim_enabled = true;
  int home = -1;  // femto BSs only
  Coverage coverage;
};

enum class MobilityKind : std::uint8_t { kNomadic, kMobile };

// Nomadic users keep their position; `speed_mps` then only drives the
// Doppler of the fast fading.
struct Mobility {
  MobilityKind kind = MobilityKind::kNomadic;
  double speed_mps = 0.0;
};

struct User {
  UserIndex id = 0;
  Position position;
  BsIndex serving_bs = 0;
  Mobility mobility;
  bool indoor = false;
  int home = -1;
};

struct Home {
  Position center;
  double size_m = 0.0;
};

// Immutable BS/user layout. Construction validates the partition and
// neighbor invariants and throws std::invalid_argument on violation.
class Network {
 public:
  Network(std::vector<BaseStation> base_stations, std::vector<User> users,
          std::vector<std::vector<BsIndex>> neighbor_sets,
          std::vector<Home> homes, std::size_t subchannel_count,
          double bandwidth_hz, std::vector<Position> wrap_offsets = {},
          Rect bounds = {});

  std::span<const BaseStation> base_stations() const { return base_stations_; }
  std::span<const User> users() const { return users_; }
  std::span<const Home> homes() const { return homes_; }
  const BaseStation& bs(BsIndex n) const { return base_stations_[n]; }
  const User& user(UserIndex k) const { return users_[k]; }
  std::span<const BsIndex> neighbors(BsIndex n) const {
    return neighbor_sets_[n];
  }
  std::span<const UserIndex> users_of(BsIndex n) const { return members_[n]; }
  bool is_neighbor(BsIndex n, BsIndex m) const;

  std::size_t bs_count() const { return base_stations_.size(); }
  std::size_t user_count() const { return users_.size(); }
  std::size_t subchannel_count() const { return subchannel_count_; }
  double bandwidth_hz() const { return bandwidth_hz_; }
  double subchannel_bandwidth_hz() const {
    return bandwidth_hz_ / static_cast<double>(subchannel_count_);
  }
  std::span<const Position> wrap_offsets() const { return wrap_offsets_; }
  const Rect& bounds() const { return bounds_; }

  // Distance from `p` to BS `n`, taking the closest wrap-around image.
  double distance_to_bs(Position p, BsIndex n) const;

  // Copies with one part replaced; the result is validated again.
  Network with_users(std::vector<User> users) const;
  Network with_base_stations(std::vector<BaseStation> base_stations) const;

 private:
  std::vector<BaseStation> base_stations_;
  std::vector<User> users_;
  std::vector<std::vector<BsIndex>> neighbor_sets_;
  std::vector<Home> homes_;
  std::size_t subchannel_count_;
  double bandwidth_hz_;
  std::vector<Position> wrap_offsets_;
  Rect bounds_;
  std::vector<std::vector<UserIndex>> members_;
};

struct BsDefaults {
  double macro_power_w = 19.952623149688797;  // 43 dBm
  double femto_power_w = 0.031622776601683791;  // 15 dBm
  std::size_t subchannel_count = 16;
  double bandwidth_hz = 10e6;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// 1 + 3*rings*(rings+1) macro cells on a hexagonal lattice. Neighbor sets
// are the lattice-adjacent cells (wrapped when `wrap` is set).
Network build_hex_grid(int rings, double inter_site_distance_m, bool wrap,
                       const BsDefaults& defaults = {});

struct Band {
  double min_m = 0.0;
  double max_m = 0.0;
};

// Two macro BSs `bs_distance_m` apart on the x axis. Each cell gets
// `users_per_group` users in the center band and as many in the edge band,
// placed on the segment towards the other BS's side.
Network build_linear_two_cell(double bs_distance_m, Band center_band,
                              Band edge_band, std::size_t users_per_group,
                              std::uint64_t seed,
                              const BsDefaults& defaults = {});

enum class FemtoDeployment : std::uint8_t { kSingle, kSymmetricPair, kAsymmetricPair };

struct DeploymentMix {
  double single = 1.0;
  double symmetric_pair = 1.0;
  double asymmetric_pair = 1.0;
};

// Adds femto BSs inside each macro cell. Paired cases occupy two adjacent
// homes; in the asymmetric case the first femto sits on the shared wall.
Network build_heterogeneous(const Network& macro, std::size_t femtos_per_macro,
                            const DeploymentMix& mix, double home_size_m,
                            std::uint64_t seed,
                            const BsDefaults& defaults = {});

// Three zones (urban, suburban, rural) side by side with inter-site
// distances isd, 1.5*isd and 2*isd.
Network build_mixed_density(double urban_isd_m, std::uint64_t seed,
                            const BsDefaults& defaults = {});

struct UserCounts {
  std::size_t macro = 20;
  std::size_t femto = 4;
};

// Drops users uniformly in each cell's coverage. Femto users are indoor and
// belong to the femto's home. Mixed-density layouts use nearest-BS
// association with per-cell quotas. All users get `mobility`.
Network place_users(const Network& network, const UserCounts& counts,
                    std::uint64_t seed, Mobility mobility = {});

// Uniform point inside BS `n`'s coverage region.
Position sample_in_coverage(const Network& network, BsIndex n,
                            std::mt19937_64& rng);

bool inside_coverage(const Network& network, BsIndex n, Position p);

// Marks the `fraction` of BSs with the smallest nearest-neighbor distance
// as REFIM-capable and the rest as not.
Network with_refim_deployment(const Network& network, double fraction);

}  // namespace refim

#endif  // REFIM_TOPOLOGY_HPP_
