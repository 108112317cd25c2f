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

#include "refim/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace refim {
namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr int kMaxPlacementAttempts = 10000;

struct Axial {
  int q = 0;
  int r = 0;
  bool operator==(const Axial&) const = default;
};

constexpr std::array<Axial, 6> kHexDirections = {
    Axial{1, 0}, Axial{1, -1}, Axial{0, -1},
    Axial{-1, 0}, Axial{-1, 1}, Axial{0, 1}};

int hex_norm(Axial a) {
  return std::max({std::abs(a.q), std::abs(a.r), std::abs(a.q + a.r)});
}

Position axial_to_xy(Axial a, double isd) {
  return {isd * (a.q + 0.5 * a.r), isd * (0.5 * kSqrt3 * a.r)};
}

std::vector<Axial> hex_cells(int rings) {
  std::vector<Axial> cells{{0, 0}};
  for (int k = 1; k <= rings; ++k) {
    Axial cur{kHexDirections[4].q * k, kHexDirections[4].r * k};
    for (int side = 0; side < 6; ++side) {
      for (int j = 0; j < k; ++j) {
        cells.push_back(cur);
        cur = {cur.q + kHexDirections[side].q, cur.r + kHexDirections[side].r};
      }
    }
  }
  return cells;
}

// Translations of a radius-`rings` hex cluster that tile the plane.
std::vector<Axial> wrap_translations(int rings) {
  const Axial a{2 * rings + 1, -rings};
  const Axial b{rings, rings + 1};
  const Axial c{b.q - a.q, b.r - a.r};
  return {a, b, c, {-a.q, -a.r}, {-b.q, -b.r}, {-c.q, -c.r}};
}

double nearest_neighbor_distance(std::span<const BaseStation> bss,
                                 BsIndex n) {
  double best = std::numeric_limits<double>::infinity();
  for (const BaseStation& other : bss) {
    if (other.id == n) continue;
    best = std::min(best, distance(bss[n].position, other.position));
  }
  return best;
}

BaseStation make_bs(BsIndex id, Tier tier, Position pos, double power,
                    std::size_t subchannels, Coverage coverage) {
  BaseStation bs;
  bs.id = id;
  bs.tier = tier;
  bs.position = pos;
  bs.max_power_w = power;
  bs.mask_w.assign(subchannels, power);
  bs.coverage = coverage;
  return bs;
}

}  // namespace

double distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::kMacro:
      return "macro";
    case Tier::kPico:
      return "pico";
    case Tier::kFemto:
      return "femto";
  }
  return "unknown";
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

Network::Network(std::vector<BaseStation> base_stations,
                 std::vector<User> users,
                 std::vector<std::vector<BsIndex>> neighbor_sets,
                 std::vector<Home> homes, std::size_t subchannel_count,
                 double bandwidth_hz, std::vector<Position> wrap_offsets,
                 Rect bounds)
    : base_stations_(std::move(base_stations)),
      users_(std::move(users)),
      neighbor_sets_(std::move(neighbor_sets)),
      homes_(std::move(homes)),
      subchannel_count_(subchannel_count),
      bandwidth_hz_(bandwidth_hz),
      wrap_offsets_(std::move(wrap_offsets)),
      bounds_(bounds) {
  if (subchannel_count_ < 1) {
    throw std::invalid_argument("network needs at least one subchannel");
  }
  if (!(bandwidth_hz_ > 0.0)) {
    throw std::invalid_argument("bandwidth must be positive");
  }
  const std::size_t n_bs = base_stations_.size();
  if (neighbor_sets_.size() != n_bs) {
    throw std::invalid_argument("one neighbor set per BS required");
  }
  for (BsIndex n = 0; n < n_bs; ++n) {
    const BaseStation& bs = base_stations_[n];
    if (bs.id != n) throw std::invalid_argument("BS ids must be dense");
    if (!(bs.max_power_w > 0.0)) {
      throw std::invalid_argument("BS max power must be positive");
    }
    if (bs.mask_w.size() != subchannel_count_) {
      throw std::invalid_argument("BS mask must cover every subchannel");
    }
    for (double m : bs.mask_w) {
      if (!(m > 0.0)) throw std::invalid_argument("BS mask must be positive");
    }
    auto& nbrs = neighbor_sets_[n];
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) {
      throw std::invalid_argument("duplicate neighbor");
    }
    for (BsIndex m : nbrs) {
      if (m == n) throw std::invalid_argument("neighbor set contains self");
      if (m >= n_bs) throw std::invalid_argument("neighbor index out of range");
    }
  }
  members_.assign(n_bs, {});
  for (UserIndex k = 0; k < users_.size(); ++k) {
    const User& u = users_[k];
    if (u.id != k) throw std::invalid_argument("user ids must be dense");
    if (u.serving_bs >= n_bs) {
      throw std::invalid_argument("user served by unknown BS");
    }
    members_[u.serving_bs].push_back(k);
  }
}

bool Network::is_neighbor(BsIndex n, BsIndex m) const {
  const auto& nbrs = neighbor_sets_[n];
  return std::binary_search(nbrs.begin(), nbrs.end(), m);
}

double Network::distance_to_bs(Position p, BsIndex n) const {
  const Position b = base_stations_[n].position;
  double best = distance(p, b);
  for (const Position& off : wrap_offsets_) {
    best = std::min(best, distance(p, {b.x + off.x, b.y + off.y}));
  }
  return best;
}

Network Network::with_users(std::vector<User> users) const {
  return Network(base_stations_, std::move(users), neighbor_sets_, homes_,
                 subchannel_count_, bandwidth_hz_, wrap_offsets_, bounds_);
}

Network Network::with_base_stations(
    std::vector<BaseStation> base_stations) const {
  return Network(std::move(base_stations), users_, neighbor_sets_, homes_,
                 subchannel_count_, bandwidth_hz_, wrap_offsets_, bounds_);
}

Network build_hex_grid(int rings, double inter_site_distance_m, bool wrap,
                       const BsDefaults& defaults) {
  if (rings < 0) throw std::invalid_argument("rings must be >= 0");
  if (!(inter_site_distance_m > 0.0)) {
    throw std::invalid_argument("inter-site distance must be positive");
  }
  const std::vector<Axial> cells = hex_cells(rings);
  const std::vector<Axial> shifts =
      wrap ? wrap_translations(rings) : std::vector<Axial>{};

  auto index_of = [&](Axial a) -> std::ptrdiff_t {
    auto it = std::find(cells.begin(), cells.end(), a);
    return it == cells.end() ? -1 : it - cells.begin();
  };

  std::vector<BaseStation> bss;
  std::vector<std::vector<BsIndex>> neighbors(cells.size());
  for (BsIndex n = 0; n < cells.size(); ++n) {
    const Position pos = axial_to_xy(cells[n], inter_site_distance_m);
    bss.push_back(make_bs(n, Tier::kMacro, pos, defaults.macro_power_w,
                          defaults.subchannel_count,
                          {Coverage::Shape::kHexagon, pos,
                           inter_site_distance_m}));
    for (Axial d : kHexDirections) {
      Axial cand{cells[n].q + d.q, cells[n].r + d.r};
      std::ptrdiff_t idx = -1;
      if (hex_norm(cand) <= rings) {
        idx = index_of(cand);
      } else {
        for (Axial s : shifts) {
          Axial moved{cand.q - s.q, cand.r - s.r};
          if (hex_norm(moved) <= rings) {
            idx = index_of(moved);
            break;
          }
        }
      }
      if (idx < 0 || static_cast<BsIndex>(idx) == n) continue;
      auto& nb = neighbors[n];
      if (std::find(nb.begin(), nb.end(), static_cast<BsIndex>(idx)) ==
          nb.end()) {
        nb.push_back(static_cast<BsIndex>(idx));
      }
    }
  }
  std::vector<Position> offsets;
  for (Axial s : shifts) offsets.push_back(axial_to_xy(s, inter_site_distance_m));

  const double half = inter_site_distance_m * (rings + 1);
  return Network(std::move(bss), {}, std::move(neighbors), {},
                 defaults.subchannel_count, defaults.bandwidth_hz,
                 std::move(offsets), Rect{-half, -half, half, half});
}

Network build_linear_two_cell(double bs_distance_m, Band center_band,
                              Band edge_band, std::size_t users_per_group,
                              std::uint64_t seed, const BsDefaults& defaults) {
  auto valid = [&](Band b) {
    return b.min_m > 0.0 && b.min_m < b.max_m && b.max_m < bs_distance_m;
  };
  if (!(bs_distance_m > 0.0) || !valid(center_band) || !valid(edge_band)) {
    throw std::invalid_argument("bands must lie inside (0, bs_distance)");
  }
  if (center_band.max_m > edge_band.min_m) {
    throw std::invalid_argument("center band must lie inside the edge band");
  }
  const double half = 0.5 * bs_distance_m;
  std::vector<BaseStation> bss;
  bss.push_back(make_bs(0, Tier::kMacro, {0.0, 0.0}, defaults.macro_power_w,
                        defaults.subchannel_count,
                        {Coverage::Shape::kDisc, {0.0, 0.0}, half}));
  bss.push_back(make_bs(1, Tier::kMacro, {bs_distance_m, 0.0},
                        defaults.macro_power_w, defaults.subchannel_count,
                        {Coverage::Shape::kDisc, {bs_distance_m, 0.0}, half}));

  std::mt19937_64 rng(seed);
  std::vector<User> users;
  for (BsIndex n = 0; n < 2; ++n) {
    const double dir = n == 0 ? 1.0 : -1.0;
    for (Band band : {center_band, edge_band}) {
      std::uniform_real_distribution<double> dist(band.min_m, band.max_m);
      for (std::size_t i = 0; i < users_per_group; ++i) {
        User u;
        u.id = users.size();
        u.position = {bss[n].position.x + dir * dist(rng), 0.0};
        u.serving_bs = n;
        users.push_back(u);
      }
    }
  }
  return Network(std::move(bss), std::move(users), {{1}, {0}}, {},
                 defaults.subchannel_count, defaults.bandwidth_hz, {},
                 Rect{-half, -half, bs_distance_m + half, half});
}

Network build_heterogeneous(const Network& macro, std::size_t femtos_per_macro,
                            const DeploymentMix& mix, double home_size_m,
                            std::uint64_t seed, const BsDefaults& defaults) {
  if (femtos_per_macro == 0) return macro;
  if (!(home_size_m > 0.0)) {
    throw std::invalid_argument("home size must be positive");
  }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick_case(
      {mix.single, mix.symmetric_pair, mix.asymmetric_pair});
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  std::vector<BaseStation> bss(macro.base_stations().begin(),
                               macro.base_stations().end());
  std::vector<std::vector<BsIndex>> neighbors;
  for (BsIndex n = 0; n < macro.bs_count(); ++n) {
    auto nb = macro.neighbors(n);
    neighbors.emplace_back(nb.begin(), nb.end());
  }
  std::vector<Home> homes(macro.homes().begin(), macro.homes().end());
  const std::size_t subchannels = macro.subchannel_count();
  const double min_bs_clearance = home_size_m + 20.0;

  auto home_ok = [&](Position c, BsIndex covering) {
    if (!inside_coverage(macro, covering, c)) return false;
    for (const BaseStation& bs : bss) {
      if (distance(bs.position, c) < min_bs_clearance &&
          bs.tier != Tier::kFemto) {
        return false;
      }
    }
    for (const Home& h : homes) {
      if (distance(h.center, c) < 1.5 * home_size_m) return false;
    }
    return true;
  };

  auto add_femto = [&](Position pos, int home, BsIndex covering) {
    const BsIndex id = bss.size();
    bss.push_back(make_bs(id, Tier::kFemto, pos, defaults.femto_power_w,
                          subchannels,
                          {Coverage::Shape::kDisc, homes[home].center,
                           0.5 * home_size_m}));
    bss.back().home = home;
    neighbors.push_back({covering});
    neighbors[covering].push_back(id);
    return id;
  };

  for (BsIndex m = 0; m < macro.bs_count(); ++m) {
    if (macro.bs(m).tier != Tier::kMacro) continue;
    std::size_t placed = 0;
    while (placed < femtos_per_macro) {
      auto kind = static_cast<FemtoDeployment>(pick_case(rng));
      if (femtos_per_macro - placed == 1) kind = FemtoDeployment::kSingle;
      bool done = false;
      for (int attempt = 0; attempt < kMaxPlacementAttempts && !done;
           ++attempt) {
        const Position c1 = sample_in_coverage(macro, m, rng);
        if (!home_ok(c1, m)) continue;
        if (kind == FemtoDeployment::kSingle) {
          homes.push_back({c1, home_size_m});
          add_femto(c1, static_cast<int>(homes.size() - 1), m);
          placed += 1;
          done = true;
          continue;
        }
        const double theta = angle(rng);
        const Position c2{c1.x + home_size_m * std::cos(theta),
                          c1.y + home_size_m * std::sin(theta)};
        if (!home_ok(c2, m)) continue;
        homes.push_back({c1, home_size_m});
        const int h1 = static_cast<int>(homes.size() - 1);
        homes.push_back({c2, home_size_m});
        const int h2 = static_cast<int>(homes.size() - 1);
        const Position f1 = kind == FemtoDeployment::kAsymmetricPair
                                ? Position{0.5 * (c1.x + c2.x),
                                           0.5 * (c1.y + c2.y)}
                                : c1;
        const BsIndex a = add_femto(f1, h1, m);
        const BsIndex b = add_femto(c2, h2, m);
        neighbors[a].push_back(b);
        neighbors[b].push_back(a);
        placed += 2;
        done = true;
      }
      if (!done) {
        throw std::runtime_error("could not place femto home in macro cell " +
                                 std::to_string(m));
      }
    }
  }
  auto offsets = macro.wrap_offsets();
  return Network(std::move(bss), std::vector<User>(macro.users().begin(),
                                                   macro.users().end()),
                 std::move(neighbors), std::move(homes), subchannels,
                 macro.bandwidth_hz(),
                 std::vector<Position>(offsets.begin(), offsets.end()),
                 macro.bounds());
}

Network build_mixed_density(double urban_isd_m, std::uint64_t seed,
                            const BsDefaults& defaults) {
  if (!(urban_isd_m > 0.0)) {
    throw std::invalid_argument("inter-site distance must be positive");
  }
  struct Zone {
    double isd;
    int rows;
    int cols;
  };
  const std::array<Zone, 3> zones = {Zone{urban_isd_m, 3, 4},
                                     Zone{1.5 * urban_isd_m, 2, 5},
                                     Zone{2.0 * urban_isd_m, 2, 4}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.08, 0.08);

  std::vector<BaseStation> bss;
  std::vector<double> local_isd;
  double x0 = 0.0;
  Rect bounds{std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};
  for (const Zone& z : zones) {
    const double row_pitch = 0.5 * kSqrt3 * z.isd;
    const double y_offset = -0.5 * row_pitch * (z.rows - 1);
    double zone_x_max = x0;
    for (int r = 0; r < z.rows; ++r) {
      for (int c = 0; c < z.cols; ++c) {
        Position pos{x0 + z.isd * (c + 0.5 * (r % 2)) + z.isd * jitter(rng),
                     y_offset + row_pitch * r + z.isd * jitter(rng)};
        bss.push_back(make_bs(bss.size(), Tier::kMacro, pos,
                              defaults.macro_power_w, defaults.subchannel_count,
                              {Coverage::Shape::kNearest, pos, 2.0 * z.isd}));
        local_isd.push_back(z.isd);
        zone_x_max = std::max(zone_x_max, pos.x);
        bounds.x_min = std::min(bounds.x_min, pos.x - 0.5 * z.isd);
        bounds.y_min = std::min(bounds.y_min, pos.y - 0.5 * z.isd);
        bounds.x_max = std::max(bounds.x_max, pos.x + 0.5 * z.isd);
        bounds.y_max = std::max(bounds.y_max, pos.y + 0.5 * z.isd);
      }
    }
    x0 = zone_x_max + z.isd;
  }
  std::vector<std::vector<BsIndex>> neighbors(bss.size());
  for (BsIndex n = 0; n < bss.size(); ++n) {
    for (BsIndex m = 0; m < bss.size(); ++m) {
      if (m == n) continue;
      if (distance(bss[n].position, bss[m].position) <=
          1.3 * std::max(local_isd[n], local_isd[m])) {
        neighbors[n].push_back(m);
      }
    }
  }
  return Network(std::move(bss), {}, std::move(neighbors), {},
                 defaults.subchannel_count, defaults.bandwidth_hz, {}, bounds);
}

bool inside_coverage(const Network& network, BsIndex n, Position p) {
  const Coverage& cov = network.bs(n).coverage;
  const double dx = p.x - cov.center.x;
  const double dy = p.y - cov.center.y;
  switch (cov.shape) {
    case Coverage::Shape::kHexagon: {
      const double h = 0.5 * cov.extent;
      const double u1 = dx;
      const double u2 = 0.5 * dx + 0.5 * kSqrt3 * dy;
      const double u3 = -0.5 * dx + 0.5 * kSqrt3 * dy;
      return std::abs(u1) <= h && std::abs(u2) <= h && std::abs(u3) <= h;
    }
    case Coverage::Shape::kDisc:
      return std::hypot(dx, dy) <= cov.extent;
    case Coverage::Shape::kNearest: {
      if (!network.bounds().contains(p)) return false;
      const double own = network.distance_to_bs(p, n);
      for (BsIndex m = 0; m < network.bs_count(); ++m) {
        if (m != n && network.distance_to_bs(p, m) < own) return false;
      }
      return true;
    }
  }
  return false;
}

Position sample_in_coverage(const Network& network, BsIndex n,
                            std::mt19937_64& rng) {
  const Coverage& cov = network.bs(n).coverage;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (cov.shape) {
    case Coverage::Shape::kDisc: {
      const double r = cov.extent * std::sqrt(unit(rng));
      const double a = 2.0 * std::numbers::pi * unit(rng);
      return {cov.center.x + r * std::cos(a), cov.center.y + r * std::sin(a)};
    }
    case Coverage::Shape::kHexagon:
    case Coverage::Shape::kNearest: {
      const bool hex = cov.shape == Coverage::Shape::kHexagon;
      const double hx = hex ? 0.5 * cov.extent : cov.extent;
      const double hy = hex ? cov.extent / kSqrt3 : cov.extent;
      for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
        Position p{cov.center.x + hx * (2.0 * unit(rng) - 1.0),
                   cov.center.y + hy * (2.0 * unit(rng) - 1.0)};
        if (inside_coverage(network, n, p)) return p;
      }
      throw std::runtime_error("coverage sampling failed for BS " +
                               std::to_string(n));
    }
  }
  return cov.center;
}

Network place_users(const Network& network, const UserCounts& counts,
                    std::uint64_t seed, Mobility mobility) {
  std::mt19937_64 rng(seed);
  auto quota = [&](const BaseStation& bs) {
    return bs.tier == Tier::kFemto ? counts.femto : counts.macro;
  };
  std::vector<User> users;
  auto push = [&](Position p, BsIndex n) {
    const BaseStation& bs = network.bs(n);
    User u;
    u.id = users.size();
    u.position = p;
    u.serving_bs = n;
    u.mobility = mobility;
    u.indoor = bs.tier == Tier::kFemto;
    u.home = bs.home;
    users.push_back(u);
  };

  const bool nearest =
      std::any_of(network.base_stations().begin(), network.base_stations().end(),
                  [](const BaseStation& bs) {
                    return bs.coverage.shape == Coverage::Shape::kNearest;
                  });
  if (nearest) {
    // Users are generated over the whole area and attached to the closest
    // BS until that BS is full.
    std::vector<std::size_t> filled(network.bs_count(), 0);
    std::size_t remaining = 0;
    for (const BaseStation& bs : network.base_stations()) remaining += quota(bs);
    const Rect& b = network.bounds();
    std::uniform_real_distribution<double> ux(b.x_min, b.x_max);
    std::uniform_real_distribution<double> uy(b.y_min, b.y_max);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * (remaining + 1) * network.bs_count();
    while (remaining > 0) {
      if (++attempts > max_attempts) {
        throw std::runtime_error("nearest-BS user placement did not converge");
      }
      const Position p{ux(rng), uy(rng)};
      BsIndex best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (BsIndex n = 0; n < network.bs_count(); ++n) {
        const double d = network.distance_to_bs(p, n);
        if (d < best_d) {
          best_d = d;
          best = n;
        }
      }
      if (filled[best] >= quota(network.bs(best))) continue;
      filled[best] += 1;
      remaining -= 1;
      push(p, best);
    }
    // Users are numbered cell by cell, like the other layouts.
    std::stable_sort(users.begin(), users.end(),
                     [](const User& a, const User& b) {
                       return a.serving_bs < b.serving_bs;
                     });
    for (UserIndex k = 0; k < users.size(); ++k) users[k].id = k;
    return network.with_users(std::move(users));
  }

  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    const std::size_t count = quota(network.bs(n));
    for (std::size_t i = 0; i < count; ++i) {
      push(sample_in_coverage(network, n, rng), n);
    }
  }
  return network.with_users(std::move(users));
}

Network with_refim_deployment(const Network& network, double fraction) {
  if (fraction < 0.0 || fraction > 1.0) {
    throw std::invalid_argument("deployment fraction must be in [0, 1]");
  }
  const std::size_t n_bs = network.bs_count();
  std::vector<std::pair<double, BsIndex>> order;
  for (BsIndex n = 0; n < n_bs; ++n) {
    order.emplace_back(nearest_neighbor_distance(network.base_stations(), n), n);
  }
  std::stable_sort(order.begin(), order.end());
  const auto enabled =
      static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n_bs)));
  std::vector<BaseStation> bss(network.base_stations().begin(),
                               network.base_stations().end());
  for (BaseStation& bs : bss) bs.refim_enabled = false;
  for (std::size_t i = 0; i < enabled; ++i) bss[order[i].second].refim_enabled = true;
  return network.with_base_stations(std::move(bss));
}

}  // namespace refim
