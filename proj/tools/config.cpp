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

#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace refim::cli {
namespace {

using nlohmann::json;

std::string quoted(const std::string& key) { return "'" + key + "'"; }

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(quoted(key) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(quoted(key) + " must be finite");
  return x;
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(quoted(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(quoted(key) + " must be true or false");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(quoted(key) + " must be a string");
  return v.get<std::string>();
}

Band as_band(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2) {
    throw ConfigError(quoted(key) + " must be [min, max]");
  }
  return {as_real(v[0], key), as_real(v[1], key)};
}

const std::map<std::string, Layout>& layouts() {
  static const std::map<std::string, Layout> m = {
      {"hex", Layout::kHexGrid},
      {"two-cell", Layout::kTwoCell},
      {"hetnet", Layout::kHeterogeneous},
      {"mixed-density", Layout::kMixedDensity},
      {"toy", Layout::kToy},
  };
  return m;
}

template <class E>
E lookup(const std::map<std::string, E>& table, const json& v,
         const std::string& key) {
  const std::string name = as_string(v, key);
  auto it = table.find(name);
  if (it == table.end()) {
    std::string options;
    for (const auto& [k, _] : table) options += (options.empty() ? "" : ", ") + k;
    throw ConfigError(quoted(key) + ": unknown value '" + name +
                      "' (expected one of " + options + ")");
  }
  return it->second;
}

template <class E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "unknown";
}

const std::map<std::string, MobilityKind> kMobility = {
    {"nomadic", MobilityKind::kNomadic}, {"mobile", MobilityKind::kMobile}};
const std::map<std::string, InitialPowerRule> kInitial = {
    {"uniform", InitialPowerRule::kUniform},
    {"random", InitialPowerRule::kRandom},
    {"previous", InitialPowerRule::kPrevious}};
const std::map<std::string, UtilityKind> kUtility = {
    {"log", UtilityKind::kLog}, {"alpha-fair", UtilityKind::kAlphaFair}};
const std::map<std::string, Algorithm> kAlgorithms = {
    {"eq", Algorithm::kEq},
    {"wf", Algorithm::kWf},
    {"refim", Algorithm::kRefim},
    {"general", Algorithm::kGeneral}};
const std::map<std::string, bool> kSpectrum = {{"sharing", false},
                                              {"splitting", true}};

using Setter = std::function<void(Scenario&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      // Network.
      {"layout", [](Scenario& s, const json& v, const std::string& k) {
         s.network.layout = lookup(layouts(), v, k);
       }},
      {"rings", [](Scenario& s, const json& v, const std::string& k) {
         s.network.rings = static_cast<int>(as_count(v, k));
       }},
      {"isd_m", [](Scenario& s, const json& v, const std::string& k) {
         s.network.isd_m = as_real(v, k);
       }},
      {"wrap", [](Scenario& s, const json& v, const std::string& k) {
         s.network.wrap = as_bool(v, k);
       }},
      {"bs_distance_m", [](Scenario& s, const json& v, const std::string& k) {
         s.network.bs_distance_m = as_real(v, k);
       }},
      {"center_band_m", [](Scenario& s, const json& v, const std::string& k) {
         s.network.center_band = as_band(v, k);
       }},
      {"edge_band_m", [](Scenario& s, const json& v, const std::string& k) {
         s.network.edge_band = as_band(v, k);
       }},
      {"users_per_group", [](Scenario& s, const json& v, const std::string& k) {
         s.network.users_per_group = as_count(v, k);
       }},
      {"femtos_per_macro", [](Scenario& s, const json& v, const std::string& k) {
         s.network.femtos_per_macro = as_count(v, k);
       }},
      {"deployment_mix", [](Scenario& s, const json& v, const std::string& k) {
         if (!v.is_object()) throw ConfigError(quoted(k) + " must be an object");
         for (const auto& [name, weight] : v.items()) {
           const std::string key = k + "." + name;
           if (name == "single") {
             s.network.mix.single = as_real(weight, key);
           } else if (name == "symmetric_pair") {
             s.network.mix.symmetric_pair = as_real(weight, key);
           } else if (name == "asymmetric_pair") {
             s.network.mix.asymmetric_pair = as_real(weight, key);
           } else {
             throw ConfigError("unknown key " + quoted(key));
           }
         }
       }},
      {"home_size_m", [](Scenario& s, const json& v, const std::string& k) {
         s.network.home_size_m = as_real(v, k);
       }},
      {"toy_bs_count", [](Scenario& s, const json& v, const std::string& k) {
         s.network.toy_bs_count = as_count(v, k);
       }},
      {"macro_users_per_cell", [](Scenario& s, const json& v, const std::string& k) {
         s.network.users.macro = as_count(v, k);
       }},
      {"femto_users_per_cell", [](Scenario& s, const json& v, const std::string& k) {
         s.network.users.femto = as_count(v, k);
       }},
      {"mobility", [](Scenario& s, const json& v, const std::string& k) {
         s.network.mobility = lookup(kMobility, v, k);
       }},
      {"speed_kmh", [](Scenario& s, const json& v, const std::string& k) {
         s.network.speed_kmh = as_real(v, k);
       }},
      {"deployment_fraction", [](Scenario& s, const json& v, const std::string& k) {
         s.network.deployment_fraction = as_real(v, k);
       }},
      {"macro_power_dbm", [](Scenario& s, const json& v, const std::string& k) {
         s.network.bs.macro_power_w = dbm_to_watts(as_real(v, k));
       }},
      {"femto_power_dbm", [](Scenario& s, const json& v, const std::string& k) {
         s.network.bs.femto_power_w = dbm_to_watts(as_real(v, k));
       }},
      {"subchannels", [](Scenario& s, const json& v, const std::string& k) {
         s.network.bs.subchannel_count = as_count(v, k);
       }},
      {"bandwidth_hz", [](Scenario& s, const json& v, const std::string& k) {
         s.network.bs.bandwidth_hz = as_real(v, k);
       }},
      // Propagation.
      {"shadowing_macro_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.shadowing_macro_db = as_real(v, k);
       }},
      {"shadowing_femto_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.shadowing_femto_db = as_real(v, k);
       }},
      {"penetration_loss_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.penetration_loss_db = as_real(v, k);
       }},
      {"carrier_hz", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.carrier_hz = as_real(v, k);
       }},
      {"noise_psd_dbm_hz", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.noise_psd_dbm_hz = as_real(v, k);
       }},
      {"noise_figure_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.noise_figure_db = as_real(v, k);
       }},
      {"sinr_gap_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.sinr_gap = std::pow(10.0, as_real(v, k) / 10.0);
       }},
      {"fading_floor_db", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.fading_floor_db = as_real(v, k);
       }},
      {"oscillators", [](Scenario& s, const json& v, const std::string& k) {
         s.propagation.oscillators = static_cast<int>(as_count(v, k));
       }},
      // Algorithm.
      {"algorithm", [](Scenario& s, const json& v, const std::string& k) {
         s.algorithm = lookup(kAlgorithms, v, k);
       }},
      {"scheduling_loops", [](Scenario& s, const json& v, const std::string& k) {
         s.caps.scheduling = as_count(v, k);
       }},
      {"power_loops", [](Scenario& s, const json& v, const std::string& k) {
         s.caps.power = as_count(v, k);
       }},
      {"feedback_period_slots", [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.period_slots = as_count(v, k);
       }},
      {"nomadic_feedback_period_slots",
       [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.nomadic_period_slots = as_count(v, k);
       }},
      {"mobile_feedback_period_slots",
       [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.mobile_period_slots = as_count(v, k);
       }},
      {"edge_only_feedback", [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.edge_only = as_bool(v, k);
       }},
      {"edge_threshold_db", [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.edge_threshold_db = as_real(v, k);
       }},
      {"femto_overhear", [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.femto_overhear = as_bool(v, k);
       }},
      {"reference_count", [](Scenario& s, const json& v, const std::string& k) {
         s.feedback.reference_count = as_count(v, k);
       }},
      {"initial_power", [](Scenario& s, const json& v, const std::string& k) {
         s.initial_power = lookup(kInitial, v, k);
       }},
      {"spectrum", [](Scenario& s, const json& v, const std::string& k) {
         s.spectrum.splitting = lookup(kSpectrum, v, k);
       }},
      {"macro_subchannels", [](Scenario& s, const json& v, const std::string& k) {
         s.spectrum.macro_subchannels = as_count(v, k);
       }},
      {"utility", [](Scenario& s, const json& v, const std::string& k) {
         s.utility.kind = lookup(kUtility, v, k);
       }},
      {"alpha", [](Scenario& s, const json& v, const std::string& k) {
         s.utility.alpha = as_real(v, k);
       }},
      // Run.
      {"slots", [](Scenario& s, const json& v, const std::string& k) {
         s.slots = as_count(v, k);
       }},
      {"warmup_slots", [](Scenario& s, const json& v, const std::string& k) {
         s.warmup = as_count(v, k);
       }},
      {"seed", [](Scenario& s, const json& v, const std::string& k) {
         s.seed = as_count(v, k);
       }},
      {"slot_ms", [](Scenario& s, const json& v, const std::string& k) {
         s.slot_s = as_real(v, k) * 1e-3;
       }},
      {"ewma_beta", [](Scenario& s, const json& v, const std::string& k) {
         s.ewma_beta = as_real(v, k);
       }},
      {"initial_throughput_bps", [](Scenario& s, const json& v, const std::string& k) {
         s.initial_throughput_bps = as_real(v, k);
       }},
      {"measurement_noise_db", [](Scenario& s, const json& v, const std::string& k) {
         s.measurement_noise_db = as_real(v, k);
       }},
  };
  return m;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"hex19", "two-cell", "hetnet5", "hetnet10", "mixed-density", "toy"};
}

Scenario preset(std::string_view name) {
  Scenario s;
  if (name == "hex19") return s;
  if (name == "two-cell") {
    s.network.layout = Layout::kTwoCell;
    return s;
  }
  if (name == "hetnet5" || name == "hetnet10") {
    s.network.layout = Layout::kHeterogeneous;
    s.network.femtos_per_macro = name == "hetnet5" ? 5 : 10;
    return s;
  }
  if (name == "mixed-density") {
    s.network.layout = Layout::kMixedDensity;
    return s;
  }
  if (name == "toy") {
    s.network.layout = Layout::kToy;
    s.network.users.macro = 1;
    s.network.bs.subchannel_count = 2;
    s.slots = 200;
    s.warmup = 50;
    return s;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scenario apply_config(const json& doc, Scenario base) {
  if (!doc.is_object()) throw ConfigError("scenario document must be an object");
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key " + quoted(key));
    it->second(base, value, key);
  }
  try {
    validate(base);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return base;
}

Scenario load_scenario(const std::string& source) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(source, ec)) {
    for (const std::string& name : preset_names()) {
      if (name == source) return apply_config(json::object(), preset(name));
    }
    throw ConfigError("no such file or preset: " + source);
  }
  std::ifstream in(source);
  if (!in) throw ConfigError("cannot read " + source);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  Scenario base;
  if (doc.is_object() && doc.contains("preset")) {
    base = preset(as_string(doc["preset"], "preset"));
  }
  return apply_config(doc, base);
}

json to_json(const Scenario& s) {
  json j;
  const NetworkSpec& n = s.network;
  j["layout"] = name_of(layouts(), n.layout);
  j["rings"] = n.rings;
  j["isd_m"] = n.isd_m;
  j["wrap"] = n.wrap;
  j["bs_distance_m"] = n.bs_distance_m;
  j["center_band_m"] = {n.center_band.min_m, n.center_band.max_m};
  j["edge_band_m"] = {n.edge_band.min_m, n.edge_band.max_m};
  j["users_per_group"] = n.users_per_group;
  j["femtos_per_macro"] = n.femtos_per_macro;
  j["deployment_mix"] = {{"single", n.mix.single},
                         {"symmetric_pair", n.mix.symmetric_pair},
                         {"asymmetric_pair", n.mix.asymmetric_pair}};
  j["home_size_m"] = n.home_size_m;
  j["toy_bs_count"] = n.toy_bs_count;
  j["macro_users_per_cell"] = n.users.macro;
  j["femto_users_per_cell"] = n.users.femto;
  j["mobility"] = name_of(kMobility, n.mobility);
  j["speed_kmh"] = n.speed_kmh;
  j["deployment_fraction"] = n.deployment_fraction;
  j["macro_power_dbm"] = watts_to_dbm(n.bs.macro_power_w);
  j["femto_power_dbm"] = watts_to_dbm(n.bs.femto_power_w);
  j["subchannels"] = n.bs.subchannel_count;
  j["bandwidth_hz"] = n.bs.bandwidth_hz;

  const PropagationConfig& p = s.propagation;
  j["shadowing_macro_db"] = p.shadowing_macro_db;
  j["shadowing_femto_db"] = p.shadowing_femto_db;
  j["penetration_loss_db"] = p.penetration_loss_db;
  j["carrier_hz"] = p.carrier_hz;
  j["noise_psd_dbm_hz"] = p.noise_psd_dbm_hz;
  j["noise_figure_db"] = p.noise_figure_db;
  j["sinr_gap_db"] = 10.0 * std::log10(p.sinr_gap);
  j["fading_floor_db"] = p.fading_floor_db;
  j["oscillators"] = p.oscillators;

  j["algorithm"] = std::string(to_string(s.algorithm));
  j["scheduling_loops"] = s.caps.scheduling;
  j["power_loops"] = s.caps.power;
  j["feedback_period_slots"] = s.feedback.period_slots;
  j["nomadic_feedback_period_slots"] = s.feedback.nomadic_period_slots;
  j["mobile_feedback_period_slots"] = s.feedback.mobile_period_slots;
  j["edge_only_feedback"] = s.feedback.edge_only;
  j["edge_threshold_db"] = s.feedback.edge_threshold_db;
  j["femto_overhear"] = s.feedback.femto_overhear;
  j["reference_count"] = s.feedback.reference_count;
  j["initial_power"] = name_of(kInitial, s.initial_power);
  j["spectrum"] = s.spectrum.splitting ? "splitting" : "sharing";
  j["macro_subchannels"] = s.spectrum.macro_subchannels;
  j["utility"] = name_of(kUtility, s.utility.kind);
  j["alpha"] = s.utility.alpha;

  j["slots"] = s.slots;
  j["warmup_slots"] = s.warmup;
  j["seed"] = s.seed;
  j["slot_ms"] = s.slot_s * 1e3;
  j["ewma_beta"] = s.ewma_beta;
  j["initial_throughput_bps"] = s.initial_throughput_bps;
  j["measurement_noise_db"] = s.measurement_noise_db;
  return j;
}

std::uint64_t config_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(scenario).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace refim::cli
