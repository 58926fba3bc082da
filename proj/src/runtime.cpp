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

#include "buddi/runtime.hpp"

#include <algorithm>

#include "buddi/hash.hpp"

namespace buddi::runtime {

tables::DataflowGraph Declarations::graph() const {
  tables::DataflowGraph g;
  for (const auto& [name, slot] : collections_) g.add_node(name);
  for (const auto& r : rules_) {
    g.add_node(r.target);
    for (const auto& s : r.sources) {
      g.add_edge(tables::Edge{s.name, r.target,
                              s.monotone ? tables::EdgeKind::kMonotone : tables::EdgeKind::kNegation,
                              r.op == MergeOp::kDeferred});
    }
  }
  return g;
}

void check_stratification(const Declarations& decls) {
  for (auto& cycle : tables::detect_cycles(decls.graph())) {
    if (cycle.through_negation && !cycle.broken_by_deferral) throw StratificationError(std::move(cycle));
  }
}

void WorkerContext::send(WorkerId dst, std::string channel, std::string payload, std::uint64_t token,
                         std::uint64_t use) {
  rt_.sim_.send(Envelope{token, use, self_, dst, std::move(channel), std::move(payload), 0});
}

Runtime::Runtime(Program& program, DeliverySchedule schedule, RunOptions options)
    : program_(program),
      options_(std::move(options)),
      sim_(schedule),
      ids_(hash_combine(schedule.seed, 0x7573652d69647321ULL)) {
  program_.declare(decls_);
  for (const auto& r : decls_.rules_) {
    auto has = [&](const std::string& n) {
      return std::any_of(decls_.collections_.begin(), decls_.collections_.end(),
                         [&](const auto& c) { return c.first == n; });
    };
    if (!has(r.target)) throw std::invalid_argument("rule targets undeclared collection '" + r.target + "'");
    for (const auto& s : r.sources) {
      if (!has(s.name)) throw std::invalid_argument("rule reads undeclared collection '" + s.name + "'");
    }
  }
  check_stratification(decls_);
  for (std::size_t i = 0; i < options_.workers; ++i) {
    const WorkerId w = sim_.register_worker("worker-" + std::to_string(i));
    states_[w].collections = decls_.collections_;
    program_.on_register(*this, w, false);
  }
}

WorkerId Runtime::register_worker(std::string meta) {
  const WorkerId w = sim_.register_worker(std::move(meta));
  states_[w].collections = decls_.collections_;
  program_.on_register(*this, w, true);
  return w;
}

void Runtime::fail_worker(WorkerId w) {
  if (!states_.contains(w) || failed_.contains(w)) return;
  failed_.insert(w);
  sim_.note("fail", w, std::nullopt);
  program_.on_fail(*this, w);
}

std::vector<WorkerId> Runtime::workers() const {
  std::vector<WorkerId> out;
  for (const auto& [w, s] : states_) out.push_back(w);
  return out;
}

std::vector<WorkerId> Runtime::alive_workers() const {
  std::vector<WorkerId> out;
  for (const auto& [w, s] : states_) {
    if (alive(w)) out.push_back(w);
  }
  return out;
}

Declarations::Slot& Runtime::slot(WorkerId w, const std::string& name) {
  return const_cast<Declarations::Slot&>(std::as_const(*this).slot(w, name));
}

const Declarations::Slot& Runtime::slot(WorkerId w, const std::string& name) const {
  auto st = states_.find(w);
  if (st == states_.end()) throw std::out_of_range("unknown worker " + to_string(w));
  for (const auto& [n, s] : st->second.collections) {
    if (n == name) return s;
  }
  throw std::out_of_range("unknown collection '" + name + "'");
}

void Runtime::apply_events(std::uint64_t tick) {
  for (const auto& p : options_.partitions) {
    if (p.start == tick) {
      for (auto [a, b] : p.pairs) sim_.partition(a, b);
    }
    if (p.end == tick) {
      for (auto [a, b] : p.pairs) sim_.heal(a, b);
    }
  }
  for (const auto& f : options_.failures) {
    if (f.tick == tick) fail_worker(f.worker);
  }
  for (std::uint64_t j : options_.joins) {
    if (j == tick) register_worker("joined@" + std::to_string(tick));
  }
}

bool Runtime::has_future_events() const {
  const auto t = sim_.now();
  auto later = [t](std::uint64_t x) { return x > t; };
  return std::any_of(options_.failures.begin(), options_.failures.end(),
                     [&](const FailureEvent& f) { return later(f.tick); }) ||
         std::any_of(options_.joins.begin(), options_.joins.end(), later) ||
         std::any_of(options_.partitions.begin(), options_.partitions.end(),
                     [&](const PartitionEvent& p) { return later(p.start) || later(p.end); });
}

bool Runtime::run_worker(WorkerId w, const std::vector<const Envelope*>& inbox) {
  auto& st = states_.at(w);
  WorkerContext ctx(*this, w);

  for (auto& [name, delta] : st.pending) {
    if (slot(w, name).value.join(delta)) ctx.changed_ = true;
  }
  st.pending.clear();

  for (const Envelope* env : inbox) program_.on_deliver(ctx, *env);
  if (alive(w)) program_.on_tick(ctx);

  auto apply = [&](const RuleDecl& r) {
    auto delta = r.body(ctx);
    if (!delta) return false;
    auto& target = slot(w, r.target);
    const bool grew = target.value.join(*delta);
    if (grew && target.lifetime == Lifetime::kPersistent) ctx.changed_ = true;
    return grew;
  };
  for (bool again = true; again;) {
    again = false;
    for (const auto& r : decls_.rules_) {
      if (r.op == MergeOp::kInstant) again |= apply(r);
    }
  }
  for (const auto& r : decls_.rules_) {
    if (r.op != MergeOp::kDeferred) continue;
    auto delta = r.body(ctx);
    if (!delta) continue;
    AnyLattice probe = slot(w, r.target).value;
    if (!probe.join(*delta)) continue;
    auto [it, inserted] = st.pending.try_emplace(r.target, *delta);
    if (!inserted) it->second.join(*delta);
  }
  for (auto& [name, s] : st.collections) {
    if (s.lifetime == Lifetime::kScratch) s.value = s.bottom;
  }
  return ctx.changed_;
}

bool Runtime::step() {
  sim_.begin_tick();
  apply_events(sim_.now());
  const auto delivered = sim_.deliver_due();
  std::map<WorkerId, std::vector<const Envelope*>> inbox;
  for (const auto& env : delivered) inbox[env.dst].push_back(&env);

  bool changed = false;
  // Snapshot: a join during this tick starts running next tick.
  const auto ids = workers();
  for (WorkerId w : ids) changed |= run_worker(w, inbox[w]);
  changed_last_tick_ = changed;
  return changed;
}

bool Runtime::quiescent() const {
  const bool pending = std::any_of(states_.begin(), states_.end(),
                                   [](const auto& kv) { return !kv.second.pending.empty(); });
  return !changed_last_tick_ && !pending && !sim_.in_flight() && !has_future_events() &&
         program_.idle(*this);
}

RunStats Runtime::run_to_quiescence() {
  while (!quiescent()) {
    if (sim_.now() >= options_.tick_cap) {
      throw tables::DivergenceError("tick cap of " + std::to_string(options_.tick_cap) +
                                    " exceeded before quiescence");
    }
    step();
  }
  return stats();
}

RunStats Runtime::stats() const {
  return RunStats{sim_.now(), sim_.messages_sent(), sim_.remote_messages(), sim_.deliveries()};
}

}  // namespace buddi::runtime
