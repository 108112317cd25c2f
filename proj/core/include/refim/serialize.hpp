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

#ifndef REFIM_SERIALIZE_HPP_
#define REFIM_SERIALIZE_HPP_

#include <string>
#include <string_view>

#include "refim/topology.hpp"

namespace refim {

// JSON document with "subchannels", "bandwidth_hz", "base_stations",
// "users", "neighbors", "homes", "wrap_offsets" and "bounds". Doubles are
// written with round-trip precision, so equal networks give equal text.
std::string serialize_network(const Network& network);

// Inverse of serialize_network. Throws std::invalid_argument on malformed
// input.
Network deserialize_network(std::string_view text);

}  // namespace refim

#endif  // REFIM_SERIALIZE_HPP_
