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

#ifndef REFIM_POWER_MATRIX_HPP_
#define REFIM_POWER_MATRIX_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "refim/topology.hpp"

namespace refim {

// Transmit powers p[n][s] together with the budget and per-subchannel mask
// each row must respect. Masks here are the effective ones, so they may be 0
// on subchannels a BS is not allowed to use.
class PowerMatrix {
 public:
  PowerMatrix() = default;
  PowerMatrix(std::vector<double> budgets, std::vector<double> masks,
              std::size_t subchannel_count);

  // Zero powers; budgets and masks taken from the network.
  static PowerMatrix for_network(const Network& network);

  std::size_t bs_count() const { return budgets_.size(); }
  std::size_t subchannel_count() const { return subchannel_count_; }

  double at(BsIndex n, std::size_t s) const {
    return p_[n * subchannel_count_ + s];
  }
  double& at(BsIndex n, std::size_t s) { return p_[n * subchannel_count_ + s]; }
  std::span<const double> row(BsIndex n) const {
    return {p_.data() + n * subchannel_count_, subchannel_count_};
  }
  std::span<double> row(BsIndex n) {
    return {p_.data() + n * subchannel_count_, subchannel_count_};
  }
  std::span<const double> values() const { return p_; }

  double budget(BsIndex n) const { return budgets_[n]; }
  double mask(BsIndex n, std::size_t s) const {
    return masks_[n * subchannel_count_ + s];
  }
  std::span<const double> mask_row(BsIndex n) const {
    return {masks_.data() + n * subchannel_count_, subchannel_count_};
  }
  void set_mask(BsIndex n, std::size_t s, double watts) {
    masks_[n * subchannel_count_ + s] = watts;
  }
  void set_row(BsIndex n, std::span<const double> values);

  double total(BsIndex n) const;

  // Number of (n) budget violations plus (n, s) mask or sign violations,
  // each checked with relative tolerance `rel_tol`.
  std::size_t violations(double rel_tol = 1e-6) const;

 private:
  std::size_t subchannel_count_ = 0;
  std::vector<double> p_;
  std::vector<double> budgets_;
  std::vector<double> masks_;
};

}  // namespace refim

#endif  // REFIM_POWER_MATRIX_HPP_
