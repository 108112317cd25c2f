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

#include "refim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace refim {

double gat(std::span<const double> throughputs, std::size_t* zero_count) {
  if (throughputs.empty()) throw std::invalid_argument("no throughputs");
  std::size_t zeros = 0;
  double log_sum = 0.0;
  for (double r : throughputs) {
    if (r <= 0.0) {
      ++zeros;
    } else {
      log_sum += std::log(r);
    }
  }
  if (zero_count != nullptr) *zero_count = zeros;
  if (zeros > 0) return 0.0;
  return std::exp(log_sum / static_cast<double>(throughputs.size()));
}

double aet(std::span<const double> throughputs, double fraction) {
  if (throughputs.empty()) throw std::invalid_argument("no throughputs");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fraction must be in (0, 1]");
  }
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(fraction * static_cast<double>(throughputs.size()) -
                       1e-9)));
  std::vector<double> sorted(throughputs.begin(), throughputs.end());
  std::partial_sort(sorted.begin(), sorted.begin() + count, sorted.end());
  return std::accumulate(sorted.begin(), sorted.begin() + count, 0.0) /
         static_cast<double>(count);
}

double aat(std::span<const double> throughputs) {
  if (throughputs.empty()) throw std::invalid_argument("no throughputs");
  return std::accumulate(throughputs.begin(), throughputs.end(), 0.0) /
         static_cast<double>(throughputs.size());
}

}  // namespace refim
