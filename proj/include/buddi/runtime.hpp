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

// Tick engine for Bloom-style programs on top of the network simulator.
//
// Each worker owns named lattice collections. A tick on one worker runs:
//
//   1. deferred (<+) deltas from the previous tick merged in;
//   2. this tick's deliveries handed to Program::on_deliver;
//   3. Program::on_tick, unless the worker has failed;
//   4. instantaneous (<=) rules to a fixpoint, then deferred (<+) rules
//      once, their deltas held for the next tick;
//   5. scratch collections reset to bottom.
//
// Workers run in id order, so a run is a pure function of its inputs.

#ifndef BUDDI_RUNTIME_HPP_
#define BUDDI_RUNTIME_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "buddi/any_lattice.hpp"
#include "buddi/dataflow.hpp"
#include "buddi/random.hpp"
#include "buddi/simulator.hpp"

namespace buddi::runtime {

enum class MergeOp { kInstant, kDeferred };  // <=, <+

enum class Lifetime { kPersistent, kScratch };

class WorkerContext;

struct Source {
  std::string name;
  bool monotone = true;
};

struct RuleDecl {
  std::string target;
  MergeOp op = MergeOp::kInstant;
  std::vector<Source> sources;
  // Returns the delta to merge into target, or nothing.
  std::function<std::optional<AnyLattice>(const WorkerContext&)> body;
};

class StratificationError : public std::logic_error {
 public:
  explicit StratificationError(tables::Cycle cycle)
      : std::logic_error("stratification error: non-monotone cycle " + tables::to_string(cycle) +
                         " must be broken by a deferred (<+) merge"),
        cycle_(std::move(cycle)) {}
  const tables::Cycle& cycle() const { return cycle_; }

 private:
  tables::Cycle cycle_;
};

class Declarations {
 public:
  template <lattice::MergeLattice L>
  void collection(std::string name, L bottom, Lifetime lifetime = Lifetime::kPersistent) {
    collections_.emplace_back(std::move(name), Slot{AnyLattice(bottom), AnyLattice(std::move(bottom)), lifetime});
  }
  void rule(RuleDecl r) { rules_.push_back(std::move(r)); }

  // Rule dependency graph: one edge per (source, target), non-monotone
  // sources as negation edges.
  tables::DataflowGraph graph() const;

 private:
  friend class Runtime;
  struct Slot {
    AnyLattice value;
    AnyLattice bottom;
    Lifetime lifetime;
  };
  std::vector<std::pair<std::string, Slot>> collections_;
  std::vector<RuleDecl> rules_;
};

// Throws StratificationError when a cycle through a non-monotone source has
// no deferred edge.
void check_stratification(const Declarations& decls);

class Runtime;

class Program {
 public:
  virtual ~Program() = default;
  virtual void declare(Declarations& decls) const = 0;
  virtual void on_register(Runtime& /*rt*/, WorkerId /*w*/, bool /*mid_run*/) {}
  virtual void on_deliver(WorkerContext& /*ctx*/, const Envelope& /*env*/) {}
  virtual void on_tick(WorkerContext& /*ctx*/) {}
  virtual void on_fail(Runtime& /*rt*/, WorkerId /*w*/) {}
  // False while the program still has local work that needs more ticks.
  virtual bool idle(const Runtime& /*rt*/) const { return true; }
};

struct FailureEvent {
  std::uint64_t tick = 0;
  WorkerId worker{};
};

struct PartitionEvent {
  std::uint64_t start = 0;
  std::uint64_t end = 0;  // healed at this tick
  std::vector<std::pair<WorkerId, WorkerId>> pairs;
};

inline constexpr std::uint64_t kDefaultTickCap = 100'000;

struct RunOptions {
  std::size_t workers = 1;
  std::uint64_t tick_cap = kDefaultTickCap;
  std::vector<FailureEvent> failures;
  std::vector<std::uint64_t> joins;
  std::vector<PartitionEvent> partitions;
};

struct RunStats {
  std::uint64_t ticks = 0;
  std::uint64_t messages = 0;
  std::uint64_t remote_messages = 0;
  std::uint64_t deliveries = 0;
};

class Runtime {
 public:
  // Checks stratification, then registers options.workers workers.
  Runtime(Program& program, DeliverySchedule schedule, RunOptions options);

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  WorkerId register_worker(std::string meta);
  // The worker's task stops: no more on_tick calls. Its collections stay
  // readable and it still receives deliveries.
  void fail_worker(WorkerId w);

  bool alive(WorkerId w) const { return !failed_.contains(w); }
  std::vector<WorkerId> workers() const;
  std::vector<WorkerId> alive_workers() const;

  // One tick. Returns true if a persistent collection changed.
  bool step();
  bool quiescent() const;
  // Steps until nothing is in flight, nothing changed over a full tick and
  // the program is idle. Throws tables::DivergenceError past the tick cap.
  RunStats run_to_quiescence();
  RunStats stats() const;

  template <typename L>
  const L& get(WorkerId w, const std::string& name) const {
    return slot(w, name).value.template as<L>();
  }

  // Read for values that are only final once every envelope has landed,
  // such as the difference side of a 2P-Set. Throws std::logic_error unless
  // the run is quiescent.
  template <typename L>
  const L& quiescent_read(WorkerId w, const std::string& name) const {
    if (!quiescent()) throw std::logic_error("quiescent_read before quiescence");
    return get<L>(w, name);
  }

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }
  IdSource& ids() { return ids_; }
  std::uint64_t now() const { return sim_.now(); }

 private:
  friend class WorkerContext;

  struct WorkerState {
    std::vector<std::pair<std::string, Declarations::Slot>> collections;
    std::map<std::string, AnyLattice> pending;  // deferred deltas
  };

  Declarations::Slot& slot(WorkerId w, const std::string& name);
  const Declarations::Slot& slot(WorkerId w, const std::string& name) const;
  void apply_events(std::uint64_t tick);
  bool has_future_events() const;
  bool run_worker(WorkerId w, const std::vector<const Envelope*>& inbox);

  Program& program_;
  Declarations decls_;
  RunOptions options_;
  Simulator sim_;
  IdSource ids_;
  std::map<WorkerId, WorkerState> states_;
  std::set<WorkerId> failed_;
  bool changed_last_tick_ = false;
};

// Per-worker handle passed to program hooks and rule bodies.
class WorkerContext {
 public:
  WorkerContext(Runtime& rt, WorkerId self) : rt_(rt), self_(self) {}

  WorkerId self() const { return self_; }
  std::uint64_t now() const { return rt_.now(); }
  const Runtime& runtime() const { return rt_; }
  Runtime& runtime() { return rt_; }

  template <typename L>
  const L& get(const std::string& name) const {
    return rt_.get<L>(self_, name);
  }

  // Merges a delta into one of this worker's collections.
  template <lattice::MergeLattice L>
  bool merge(const std::string& name, const L& delta) {
    const bool grew = rt_.slot(self_, name).value.join(AnyLattice(delta));
    if (grew && rt_.slot(self_, name).lifetime == Lifetime::kPersistent) changed_ = true;
    return grew;
  }

  void send(WorkerId dst, std::string channel, std::string payload, std::uint64_t token,
            std::uint64_t use);

  bool changed() const { return changed_; }

 private:
  friend class Runtime;
  Runtime& rt_;
  WorkerId self_;
  bool changed_ = false;
};

}  // namespace buddi::runtime

#endif  // BUDDI_RUNTIME_HPP_
