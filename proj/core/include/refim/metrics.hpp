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

#ifndef REFIM_METRICS_HPP_
#define REFIM_METRICS_HPP_

#include <cstddef>
#include <span>

namespace refim {

// Geometric mean. Any zero entry makes the result 0; the number of such
// entries is written to `zero_count` when given.
double gat(std::span<const double> throughputs,
           std::size_t* zero_count = nullptr);

// Mean of the ceil(fraction * K) smallest values.
double aet(std::span<const double> throughputs, double fraction = 0.05);

double aat(std::span<const double> throughputs);

}  // namespace refim

#endif  // REFIM_METRICS_HPP_
