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

#ifndef REFIM_SEEDING_HPP_
#define REFIM_SEEDING_HPP_

#include <cstdint>
#include <random>

namespace refim {

// Independent random streams derived from one scenario seed, so that e.g.
// switching the algorithm never changes the channel realization.
enum class StreamTag : std::uint32_t {
  kTopology = 1,
  kUsers = 2,
  kShadowing = 3,
  kFading = 4,
  kMobility = 5,
  kInitialPower = 6,
  kMeasurement = 7,
};

inline std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag) {
  return std::mt19937_64(derive_seed(seed, tag));
}

}  // namespace refim

#endif  // REFIM_SEEDING_HPP_
