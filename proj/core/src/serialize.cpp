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

#include "refim/serialize.hpp"

#include <stdexcept>

#include "json.hpp"

namespace refim {
namespace {

using nlohmann::json;

std::string_view shape_name(Coverage::Shape shape) {
  switch (shape) {
    case Coverage::Shape::kHexagon:
      return "hexagon";
    case Coverage::Shape::kDisc:
      return "disc";
    case Coverage::Shape::kNearest:
      return "nearest";
  }
  return "hexagon";
}

Coverage::Shape parse_shape(const std::string& name) {
  if (name == "hexagon") return Coverage::Shape::kHexagon;
  if (name == "disc") return Coverage::Shape::kDisc;
  if (name == "nearest") return Coverage::Shape::kNearest;
  throw std::invalid_argument("unknown coverage shape: " + name);
}

Tier parse_tier(const std::string& name) {
  for (Tier t : {Tier::kMacro, Tier::kPico, Tier::kFemto}) {
    if (name == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown tier: " + name);
}

json point(Position p) { return json::array({p.x, p.y}); }

Position position(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

std::string serialize_network(const Network& network) {
  json doc;
  doc["subchannels"] = network.subchannel_count();
  doc["bandwidth_hz"] = network.bandwidth_hz();
  json bss = json::array();
  for (const BaseStation& bs : network.base_stations()) {
    bss.push_back({{"id", bs.id},
                   {"tier", std::string(to_string(bs.tier))},
                   {"position_m", point(bs.position)},
                   {"max_power_w", bs.max_power_w},
                   {"mask_w", bs.mask_w},
                   {"refim_enabled", bs.refim_enabled},
                   {"home", bs.home},
                   {"coverage",
                    {{"shape", std::string(shape_name(bs.coverage.shape))},
                     {"center_m", point(bs.coverage.center)},
                     {"extent_m", bs.coverage.extent}}}});
  }
  doc["base_stations"] = std::move(bss);
  json users = json::array();
  for (const User& u : network.users()) {
    users.push_back(
        {{"id", u.id},
         {"position_m", point(u.position)},
         {"serving_bs", u.serving_bs},
         {"mobility", u.mobility.kind == MobilityKind::kMobile ? "mobile" : "nomadic"},
         {"speed_mps", u.mobility.speed_mps},
         {"indoor", u.indoor},
         {"home", u.home}});
  }
  doc["users"] = std::move(users);
  json neighbors = json::array();
  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    const auto nb = network.neighbors(n);
    neighbors.push_back(std::vector<BsIndex>(nb.begin(), nb.end()));
  }
  doc["neighbors"] = std::move(neighbors);
  json homes = json::array();
  for (const Home& h : network.homes()) {
    homes.push_back({{"center_m", point(h.center)}, {"size_m", h.size_m}});
  }
  doc["homes"] = std::move(homes);
  json wraps = json::array();
  for (Position p : network.wrap_offsets()) wraps.push_back(point(p));
  doc["wrap_offsets"] = std::move(wraps);
  const Rect& b = network.bounds();
  doc["bounds_m"] = json::array({b.x_min, b.y_min, b.x_max, b.y_max});
  return doc.dump(1);
}

Network deserialize_network(std::string_view text) {
  try {
    const json doc = json::parse(text);
    std::vector<BaseStation> bss;
    for (const json& j : doc.at("base_stations")) {
      BaseStation bs;
      bs.id = j.at("id").get<BsIndex>();
      bs.tier = parse_tier(j.at("tier").get<std::string>());
      bs.position = position(j.at("position_m"));
      bs.max_power_w = j.at("max_power_w").get<double>();
      bs.mask_w = j.at("mask_w").get<std::vector<double>>();
      bs.refim_enabled = j.at("refim_enabled").get<bool>();
      bs.home = j.at("home").get<int>();
      const json& c = j.at("coverage");
      bs.coverage = {parse_shape(c.at("shape").get<std::string>()),
                     position(c.at("center_m")), c.at("extent_m").get<double>()};
      bss.push_back(std::move(bs));
    }
    std::vector<User> users;
    for (const json& j : doc.at("users")) {
      User u;
      u.id = j.at("id").get<UserIndex>();
      u.position = position(j.at("position_m"));
      u.serving_bs = j.at("serving_bs").get<BsIndex>();
      const std::string kind = j.at("mobility").get<std::string>();
      if (kind != "mobile" && kind != "nomadic") {
        throw std::invalid_argument("unknown mobility: " + kind);
      }
      u.mobility = {kind == "mobile" ? MobilityKind::kMobile
                                     : MobilityKind::kNomadic,
                    j.at("speed_mps").get<double>()};
      u.indoor = j.at("indoor").get<bool>();
      u.home = j.at("home").get<int>();
      users.push_back(u);
    }
    auto neighbors =
        doc.at("neighbors").get<std::vector<std::vector<BsIndex>>>();
    std::vector<Home> homes;
    for (const json& j : doc.at("homes")) {
      homes.push_back({position(j.at("center_m")), j.at("size_m").get<double>()});
    }
    std::vector<Position> wraps;
    for (const json& j : doc.at("wrap_offsets")) wraps.push_back(position(j));
    const json& b = doc.at("bounds_m");
    const Rect bounds{b.at(0).get<double>(), b.at(1).get<double>(),
                      b.at(2).get<double>(), b.at(3).get<double>()};
    return Network(std::move(bss), std::move(users), std::move(neighbors),
                   std::move(homes), doc.at("subchannels").get<std::size_t>(),
                   doc.at("bandwidth_hz").get<double>(), std::move(wraps),
                   bounds);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed network document: ") +
                                e.what());
  }
}

}  // namespace refim
