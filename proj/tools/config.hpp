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

#ifndef REFIM_TOOLS_CONFIG_HPP_
#define REFIM_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "refim/engine.hpp"

namespace refim::cli {

// Anything wrong with a scenario document: unreadable file, unknown key,
// wrong type, value out of range.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> preset_names();

// Throws ConfigError for an unknown name.
Scenario preset(std::string_view name);

// Applies the keys of `doc` on top of `base`. Unknown keys, wrong types and
// scenarios that fail validation throw ConfigError.
Scenario apply_config(const nlohmann::json& doc, Scenario base);

// `source` is either a preset name or a path to a JSON document. A document
// may start from a preset through its "preset" key; otherwise it starts from
// the built-in defaults.
Scenario load_scenario(const std::string& source);

// Every configurable field, with unit-suffixed keys. Feeding the result back
// through apply_config reproduces the scenario.
nlohmann::json to_json(const Scenario& scenario);

// 64-bit FNV-1a of the canonical JSON form.
std::uint64_t config_hash(const Scenario& scenario);
std::string hash_hex(std::uint64_t hash);

}  // namespace refim::cli

#endif  // REFIM_TOOLS_CONFIG_HPP_
