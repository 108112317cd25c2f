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

#ifndef REFIM_REFERENCE_HPP_
#define REFIM_REFERENCE_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "refim/channel.hpp"
#include "refim/power.hpp"
#include "refim/power_matrix.hpp"
#include "refim/scheduling.hpp"
#include "refim/topology.hpp"

namespace refim {

struct FeedbackConfig {
  std::size_t period_slots = 1;
  // Per-mobility overrides of `period_slots`; 0 keeps the common period.
  std::size_t nomadic_period_slots = 0;
  std::size_t mobile_period_slots = 0;
  bool edge_only = false;
  double edge_threshold_db = 6.0;
  bool femto_overhear = true;
  std::size_t reference_count = 1;
};

void validate(const FeedbackConfig& config);

std::size_t feedback_period(const FeedbackConfig& config, const User& user);

enum class MessageType { kScheduledIndices, kCandidateTable };

// Optional signaling log: one entry per BS-to-BS message.
class ProtocolTrace {
 public:
  struct Entry {
    std::size_t slot;
    BsIndex sender;
    BsIndex receiver;
    MessageType type;
    std::size_t bytes;
  };

  void add(const Entry& e) { entries_.push_back(e); }
  std::span<const Entry> entries() const { return entries_; }
  std::size_t total_bytes(MessageType type) const;
  // slot,sender,receiver,type,bytes
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
};

// Time-averaged feedback published by a candidate user.
struct CandidateRecord {
  UserIndex user = kNoUser;
  // F0: gain towards each neighbor of the serving BS, laid out
  // [neighbor position in neighbors(serving)][s].
  std::vector<double> f0;
  double f1 = 0.0;              // weight
  std::vector<double> f2;       // received signal g p, per s
  std::vector<double> f3;       // interference plus noise, per s
  std::size_t last_update_slot = 0;
  bool valid = false;
};

// The tables every BS keeps about its neighbors' candidate users. All
// copies are identical, so one instance serves the whole network.
class CandidateTables {
 public:
  CandidateTables(const Network& network, const FeedbackConfig& config);

  // Adds this slot's measurements (gains of the slot, powers the users
  // measured under) and publishes every window that ends at `slot`.
  void observe(const GainSnapshot& gains, const ReceivedField& field,
               std::span<const double> weights, std::size_t slot,
               ProtocolTrace* trace = nullptr);

  // nullptr when k has not published or was filtered out as a center user.
  const CandidateRecord* record(UserIndex k) const;

  // F0 of user k towards BS n on s; n must neighbor k's serving BS.
  double cross_gain(const CandidateRecord& record, BsIndex n,
                    std::size_t s) const;

  std::size_t valid_count() const;
  std::size_t publish_events() const { return publish_events_; }

 private:
  struct Window {
    std::vector<double> f0;
    std::vector<double> own_gain;  // per s, for edge filtering
    double f1 = 0.0;
    std::vector<double> f2;
    std::vector<double> f3;
    std::size_t count = 0;
  };

  void publish(UserIndex k, std::size_t slot, ProtocolTrace* trace);

  const Network* network_;
  FeedbackConfig config_;
  std::vector<std::size_t> periods_;
  std::vector<Window> windows_;
  std::vector<CandidateRecord> records_;
  std::size_t publish_events_ = 0;
};

struct VisibleUser {
  BsIndex bs;
  UserIndex user;
};

// What each BS learns about its neighbors' schedules on each subchannel.
class NeighborView {
 public:
  NeighborView(std::size_t bs_count, std::size_t subchannel_count)
      : subchannel_count_(subchannel_count),
        views_(bs_count * subchannel_count) {}

  std::span<const VisibleUser> at(BsIndex n, std::size_t s) const {
    return views_[n * subchannel_count_ + s];
  }
  std::vector<VisibleUser>& mutable_at(BsIndex n, std::size_t s) {
    return views_[n * subchannel_count_ + s];
  }

 private:
  std::size_t subchannel_count_;
  std::vector<std::vector<VisibleUser>> views_;
};

// Macro and pico BSs see each other's exact schedules. A femto BS sees its
// macro neighbors' schedules only by overhearing. Any femto BS is seen as
// its lowest-index user, except on subchannels it may not use. BSs without
// REFIM neither send nor receive.
NeighborView exchange_scheduled_indices(const Network& network,
                                        const ScheduleMap& schedule,
                                        const PowerMatrix& masks,
                                        const FeedbackConfig& config,
                                        std::size_t slot,
                                        ProtocolTrace* trace = nullptr);

struct ReferenceInfo {
  BsIndex ref_bs = 0;
  UserIndex user = kNoUser;
  ReferenceMeasurement measurement;
};

// The `count` visible neighbor users with the strongest recorded gain
// towards n on s, strongest first. Users without a table record are
// skipped.
std::vector<ReferenceInfo> select_reference(const Network& network, BsIndex n,
                                            std::size_t s,
                                            const NeighborView& view,
                                            const CandidateTables& tables,
                                            std::size_t count);

// Same selection from exact current gains and powers instead of tables.
std::vector<ReferenceInfo> select_reference_exact(
    BsIndex n, std::size_t s, const NeighborView& view,
    const GainSnapshot& gains, const ReceivedField& field,
    std::span<const double> weights, std::size_t count);

}  // namespace refim

#endif  // REFIM_REFERENCE_HPP_
