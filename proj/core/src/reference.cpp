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

#include "refim/reference.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace refim {
namespace {

constexpr std::size_t kIndexBytes = 2;
constexpr std::size_t kFieldBytes = 4;
constexpr std::size_t kFeedbackFields = 4;

bool is_femto(const BaseStation& bs) { return bs.tier == Tier::kFemto; }

}  // namespace

void validate(const FeedbackConfig& config) {
  if (config.period_slots < 1) {
    throw std::invalid_argument("feedback period must be >= 1 slot");
  }
}

std::size_t feedback_period(const FeedbackConfig& config, const User& user) {
  const std::size_t over = user.mobility.kind == MobilityKind::kMobile
                               ? config.mobile_period_slots
                               : config.nomadic_period_slots;
  return over > 0 ? over : config.period_slots;
}

std::size_t ProtocolTrace::total_bytes(MessageType type) const {
  std::size_t total = 0;
  for (const Entry& e : entries_) {
    if (e.type == type) total += e.bytes;
  }
  return total;
}

void ProtocolTrace::write_csv(std::ostream& out) const {
  out << "slot,sender,receiver,type,bytes\n";
  for (const Entry& e : entries_) {
    out << e.slot << ',' << e.sender << ',' << e.receiver << ','
        << (e.type == MessageType::kScheduledIndices ? "indices" : "table")
        << ',' << e.bytes << '\n';
  }
}

CandidateTables::CandidateTables(const Network& network,
                                 const FeedbackConfig& config)
    : network_(&network), config_(config) {
  validate(config);
  const std::size_t S = network.subchannel_count();
  for (const User& u : network.users()) {
    periods_.push_back(feedback_period(config, u));
    const std::size_t nbrs = network.neighbors(u.serving_bs).size();
    Window w;
    w.f0.assign(nbrs * S, 0.0);
    w.own_gain.assign(S, 0.0);
    w.f2.assign(S, 0.0);
    w.f3.assign(S, 0.0);
    windows_.push_back(std::move(w));
    CandidateRecord r;
    r.user = u.id;
    records_.push_back(std::move(r));
  }
}

void CandidateTables::observe(const GainSnapshot& gains,
                              const ReceivedField& field,
                              std::span<const double> weights,
                              std::size_t slot, ProtocolTrace* trace) {
  const std::size_t S = network_->subchannel_count();
  for (UserIndex k = 0; k < network_->user_count(); ++k) {
    const BsIndex serving = network_->user(k).serving_bs;
    const auto nbrs = network_->neighbors(serving);
    Window& w = windows_[k];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t s = 0; s < S; ++s) {
        w.f0[i * S + s] += gains.gain(k, nbrs[i], s);
      }
    }
    for (std::size_t s = 0; s < S; ++s) {
      w.own_gain[s] += gains.gain(k, serving, s);
      w.f2[s] += field.signal(k, serving, s);
      w.f3[s] += field.interference_noise(k, serving, s);
    }
    w.f1 += weights[k];
    ++w.count;
    if ((slot + 1) % periods_[k] == 0) publish(k, slot, trace);
  }
}

void CandidateTables::publish(UserIndex k, std::size_t slot,
                              ProtocolTrace* trace) {
  Window& w = windows_[k];
  CandidateRecord& r = records_[k];
  const double inv = 1.0 / static_cast<double>(w.count);
  const BsIndex serving = network_->user(k).serving_bs;
  const std::size_t S = network_->subchannel_count();

  bool send = true;
  if (config_.edge_only && !is_femto(network_->bs(serving))) {
    const auto nbrs = network_->neighbors(serving);
    double own = 0.0;
    for (double g : w.own_gain) own += g;
    double strongest = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      double acc = 0.0;
      for (std::size_t s = 0; s < S; ++s) acc += w.f0[i * S + s];
      strongest = std::max(strongest, acc);
    }
    send = !nbrs.empty() &&
           10.0 * std::log10(strongest / own) >= -config_.edge_threshold_db;
  }

  if (send) {
    r.f0.resize(w.f0.size());
    for (std::size_t i = 0; i < w.f0.size(); ++i) r.f0[i] = w.f0[i] * inv;
    r.f1 = w.f1 * inv;
    r.f2.resize(S);
    r.f3.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
      r.f2[s] = w.f2[s] * inv;
      r.f3[s] = w.f3[s] * inv;
    }
    r.last_update_slot = slot;
    r.valid = true;
    ++publish_events_;
    if (trace != nullptr) {
      for (BsIndex m : network_->neighbors(serving)) {
        trace->add({slot, serving, m, MessageType::kCandidateTable,
                    kFeedbackFields * S * kFieldBytes});
      }
    }
  } else {
    r.valid = false;
  }

  std::fill(w.f0.begin(), w.f0.end(), 0.0);
  std::fill(w.own_gain.begin(), w.own_gain.end(), 0.0);
  std::fill(w.f2.begin(), w.f2.end(), 0.0);
  std::fill(w.f3.begin(), w.f3.end(), 0.0);
  w.f1 = 0.0;
  w.count = 0;
}

const CandidateRecord* CandidateTables::record(UserIndex k) const {
  return records_[k].valid ? &records_[k] : nullptr;
}

double CandidateTables::cross_gain(const CandidateRecord& record, BsIndex n,
                                   std::size_t s) const {
  const auto nbrs = network_->neighbors(network_->user(record.user).serving_bs);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), n);
  if (it == nbrs.end() || *it != n) {
    throw std::invalid_argument("BS is not a neighbor of the user's cell");
  }
  const auto i = static_cast<std::size_t>(it - nbrs.begin());
  return record.f0[i * network_->subchannel_count() + s];
}

std::size_t CandidateTables::valid_count() const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(),
      [](const CandidateRecord& r) { return r.valid; }));
}

NeighborView exchange_scheduled_indices(const Network& network,
                                        const ScheduleMap& schedule,
                                        const PowerMatrix& masks,
                                        const FeedbackConfig& config,
                                        std::size_t slot,
                                        ProtocolTrace* trace) {
  const std::size_t S = network.subchannel_count();
  NeighborView view(network.bs_count(), S);
  for (BsIndex n = 0; n < network.bs_count(); ++n) {
    const BaseStation& receiver = network.bs(n);
    if (!receiver.refim_enabled) continue;
    for (BsIndex m : network.neighbors(n)) {
      const BaseStation& sender = network.bs(m);
      if (!sender.refim_enabled) continue;
      if (is_femto(sender)) {
        const auto members = network.users_of(m);
        if (members.empty()) continue;
        for (std::size_t s = 0; s < S; ++s) {
          if (masks.mask(m, s) > 0.0) {
            view.mutable_at(n, s).push_back({m, members.front()});
          }
        }
        continue;
      }
      if (is_femto(receiver) && !config.femto_overhear) continue;
      for (std::size_t s = 0; s < S; ++s) {
        const UserIndex k = schedule.at(m, s);
        if (k != kNoUser) view.mutable_at(n, s).push_back({m, k});
      }
      if (trace != nullptr && !is_femto(receiver)) {
        trace->add({slot, m, n, MessageType::kScheduledIndices,
                    S * kIndexBytes});
      }
    }
  }
  return view;
}

namespace {

void keep_strongest(std::vector<std::pair<double, ReferenceInfo>>& ranked,
                    std::size_t count, std::vector<ReferenceInfo>& out) {
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < ranked.size() && i < count; ++i) {
    out.push_back(ranked[i].second);
  }
}

}  // namespace

std::vector<ReferenceInfo> select_reference(const Network& network, BsIndex n,
                                            std::size_t s,
                                            const NeighborView& view,
                                            const CandidateTables& tables,
                                            std::size_t count) {
  (void)network;
  std::vector<ReferenceInfo> out;
  if (count == 0) return out;
  std::vector<std::pair<double, ReferenceInfo>> ranked;
  for (const VisibleUser& v : view.at(n, s)) {
    const CandidateRecord* r = tables.record(v.user);
    if (r == nullptr) continue;
    const double g = tables.cross_gain(*r, n, s);
    ranked.push_back({g, {v.bs, v.user, {r->f1, g, r->f2[s], r->f3[s]}}});
  }
  keep_strongest(ranked, count, out);
  return out;
}

std::vector<ReferenceInfo> select_reference_exact(
    BsIndex n, std::size_t s, const NeighborView& view,
    const GainSnapshot& gains, const ReceivedField& field,
    std::span<const double> weights, std::size_t count) {
  std::vector<ReferenceInfo> out;
  if (count == 0) return out;
  std::vector<std::pair<double, ReferenceInfo>> ranked;
  for (const VisibleUser& v : view.at(n, s)) {
    const double g = gains.gain(v.user, n, s);
    ranked.push_back({g,
                      {v.bs, v.user,
                       {weights[v.user], g, field.signal(v.user, v.bs, s),
                        field.interference_noise(v.user, v.bs, s)}}});
  }
  keep_strongest(ranked, count, out);
  return out;
}

}  // namespace refim
