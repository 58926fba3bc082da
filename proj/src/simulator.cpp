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

#include "buddi/simulator.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace buddi::runtime {

std::string to_line(const Event& e) {
  auto w = [](const std::optional<WorkerId>& x) { return x ? to_string(*x) : std::string("-"); };
  return std::to_string(e.tick) + "," + e.kind + "," + w(e.src) + "," + w(e.dst) + "," +
         std::to_string(e.token_id) + "," + std::to_string(e.use_id);
}

std::size_t EventLog::count(const std::string& kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [&](const Event& e) { return e.kind == kind; }));
}

void EventLog::write(std::ostream& out) const {
  for (const auto& e : events_) out << to_line(e) << '\n';
}

std::string EventLog::text() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

Simulator::Simulator(DeliverySchedule schedule) : schedule_(schedule), rng_(schedule.seed) {
  if (schedule_.duplicate_prob < 0 || schedule_.duplicate_prob > 1 || schedule_.drop_prob < 0 ||
      schedule_.drop_prob >= 1) {
    throw std::invalid_argument("duplicate_prob must be in [0,1] and drop_prob in [0,1)");
  }
}

WorkerId Simulator::register_worker(std::string meta) {
  const auto id = static_cast<std::uint32_t>(membership_.size());
  membership_.insert(MemberRecord{id, std::move(meta)});
  note("register", std::nullopt, worker(id));
  return worker(id);
}

bool Simulator::merge_membership(const lattice::GSet<MemberRecord>& records) {
  return membership_.join(records);
}

std::uint64_t Simulator::delay() { return 1 + rng_.below(std::uint64_t{schedule_.reorder_window} + 1); }

void Simulator::send(Envelope env) {
  env.send_tick = now_;
  ++sent_;
  if (env.src != env.dst) ++remote_sent_;
  note("send", env.src, env.dst, env.token_id, env.use_id);
  const bool dup = rng_.chance(schedule_.duplicate_prob);
  if (dup) {
    note("duplicate", env.src, env.dst, env.token_id, env.use_id);
    queue_.emplace(std::pair{now_ + delay(), seq_++}, InFlight{env});
  }
  queue_.emplace(std::pair{now_ + delay(), seq_++}, InFlight{std::move(env)});
}

std::vector<Envelope> Simulator::tick() {
  begin_tick();
  return deliver_due();
}

std::vector<Envelope> Simulator::deliver_due() {
  std::vector<Envelope> out;
  std::vector<std::pair<std::uint64_t, InFlight>> retry;  // (due, item)
  while (!queue_.empty() && queue_.begin()->first.first <= now_) {
    auto node = queue_.extract(queue_.begin());
    InFlight& item = node.mapped();
    if (!net_.reachable(item.env.src, item.env.dst)) {
      if (!item.held) note("hold", item.env.src, item.env.dst, item.env.token_id, item.env.use_id);
      item.held = true;
      retry.emplace_back(now_ + 1, std::move(item));
      continue;
    }
    if (rng_.chance(schedule_.drop_prob)) {
      ++item.attempts;
      note("drop", item.env.src, item.env.dst, item.env.token_id, item.env.use_id);
      const std::uint64_t backoff =
          std::min<std::uint64_t>(kBackoffCap, std::uint64_t{1} << std::min<std::uint32_t>(item.attempts, 6));
      retry.emplace_back(now_ + backoff, std::move(item));
      continue;
    }
    ++delivered_;
    note("deliver", item.env.src, item.env.dst, item.env.token_id, item.env.use_id);
    out.push_back(std::move(item.env));
  }
  for (auto& [due, item] : retry) queue_.emplace(std::pair{due, seq_++}, std::move(item));
  return out;
}

void Simulator::partition(WorkerId a, WorkerId b) {
  net_.partition(a, b);
  note("partition", a, b);
}

void Simulator::heal(WorkerId a, WorkerId b) {
  net_.heal(a, b);
  note("heal", a, b);
}

void Simulator::heal_all() {
  for (auto [a, b] : net_.cut()) note("heal", a, b);
  net_.heal_all();
}

void Simulator::note(std::string kind, std::optional<WorkerId> src, std::optional<WorkerId> dst,
                     std::uint64_t token, std::uint64_t use) {
  log_.record(Event{now_, std::move(kind), src, dst, token, use});
}

}  // namespace buddi::runtime
