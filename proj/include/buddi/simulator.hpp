// Copyright 2026 The BuDDI-Sim Authors
//
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

// Deterministic network model. Envelopes are delivered at tick granularity
// with seeded delay, duplication and loss; lost envelopes are resent with
// exponential backoff, so delivery is at-least-once. Cut worker pairs hold
// traffic until the partition heals.

#ifndef BUDDI_SIMULATOR_HPP_
#define BUDDI_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "buddi/crdt.hpp"
#include "buddi/random.hpp"
#include "buddi/types.hpp"

namespace buddi::runtime {

struct Event {
  std::uint64_t tick = 0;
  std::string kind;
  std::optional<WorkerId> src;
  std::optional<WorkerId> dst;
  std::uint64_t token_id = 0;
  std::uint64_t use_id = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// Line format: tick,event_kind,src,dst,token_id,use_id ('-' for no worker).
std::string to_line(const Event& e);

class EventLog {
 public:
  void record(Event e) { events_.push_back(std::move(e)); }
  const std::vector<Event>& events() const { return events_; }
  std::size_t count(const std::string& kind) const;
  void write(std::ostream& out) const;
  std::string text() const;

 private:
  std::vector<Event> events_;
};

struct DeliverySchedule {
  std::uint64_t seed = 0;
  double duplicate_prob = 0.0;
  std::uint32_t reorder_window = 0;  // extra delay in ticks, uniform in [0, window]
  double drop_prob = 0.0;            // each attempt; dropped attempts are resent
};

inline constexpr std::uint64_t kBackoffBase = 2;
inline constexpr std::uint64_t kBackoffCap = 32;

struct Envelope {
  std::uint64_t token_id = 0;
  std::uint64_t use_id = 0;
  WorkerId src{};
  WorkerId dst{};
  std::string channel;
  std::string payload;
  std::uint64_t send_tick = 0;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

struct MemberRecord {
  std::uint32_t id = 0;
  std::string meta;
  friend auto operator<=>(const MemberRecord&, const MemberRecord&) = default;
};

class Simulator {
 public:
  explicit Simulator(DeliverySchedule schedule);

  // Allocates the next id and inserts (id, meta) into the membership set.
  WorkerId register_worker(std::string meta);
  // Merges membership records arriving again, e.g. from a redelivery.
  bool merge_membership(const lattice::GSet<MemberRecord>& records);
  const lattice::GSet<MemberRecord>& membership() const { return membership_; }
  std::size_t worker_count() const { return membership_.size(); }

  // Never blocks; the envelope is stamped with the current tick.
  void send(Envelope env);

  // Advances one tick and returns this tick's deliveries, ordered by
  // (due tick, send sequence). Equivalent to begin_tick() + deliver_due().
  std::vector<Envelope> tick();
  void begin_tick() { ++now_; }
  std::vector<Envelope> deliver_due();

  std::uint64_t now() const { return now_; }
  bool in_flight() const { return !queue_.empty(); }
  std::size_t in_flight_count() const { return queue_.size(); }

  void partition(WorkerId a, WorkerId b);
  void heal(WorkerId a, WorkerId b);
  void heal_all();
  const NetworkCondition& network() const { return net_; }

  // Program-level events share the log with network events.
  void note(std::string kind, std::optional<WorkerId> src, std::optional<WorkerId> dst,
            std::uint64_t token = 0, std::uint64_t use = 0);

  EventLog& log() { return log_; }
  const EventLog& log() const { return log_; }

  std::uint64_t messages_sent() const { return sent_; }
  std::uint64_t deliveries() const { return delivered_; }
  std::uint64_t remote_messages() const { return remote_sent_; }

  const DeliverySchedule& schedule() const { return schedule_; }

 private:
  struct InFlight {
    Envelope env;
    std::uint32_t attempts = 0;
    bool held = false;
  };

  std::uint64_t delay();

  DeliverySchedule schedule_;
  Rng rng_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::map<std::pair<std::uint64_t, std::uint64_t>, InFlight> queue_;  // (due, seq)
  NetworkCondition net_;
  lattice::GSet<MemberRecord> membership_;
  EventLog log_;
  std::uint64_t sent_ = 0;
  std::uint64_t remote_sent_ = 0;
  std::uint64_t delivered_ = 0;
};

}  // namespace buddi::runtime

#endif  // BUDDI_SIMULATOR_HPP_
