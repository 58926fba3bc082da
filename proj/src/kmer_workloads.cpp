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

#include "buddi/kmer_workloads.hpp"

#include <set>

#include "buddi/lattice.hpp"
#include "buddi/tristate.hpp"

namespace buddi::kmer {
namespace {

using lattice::BuddyLSet;
using lattice::LMap;
using lattice::LSet;
using runtime::AnyLattice;
using runtime::Declarations;
using runtime::Lifetime;
using runtime::MergeOp;
using runtime::WorkerContext;

constexpr const char* kChannel = "kmer";

// Ingestion plus owner routing; subclasses decide what the owner stores.
class KmerProgram : public runtime::Program {
 public:
  KmerProgram(const dispenser::ByteSource& source, const WorkloadConfig& cfg)
      : ingest_(source, cfg.k, cfg.ingest, cfg.run.workers), storage_workers_(cfg.run.workers) {}

  void on_register(runtime::Runtime& /*rt*/, WorkerId w, bool /*mid_run*/) override { ingest_.on_register(w); }
  void on_fail(runtime::Runtime& rt, WorkerId w) override { ingest_.on_fail(rt, w); }
  bool idle(const runtime::Runtime& /*rt*/) const override { return ingest_.idle(); }

  void on_tick(WorkerContext& ctx) override {
    ingest_.on_tick(ctx, [this](WorkerContext& c, const KmerAt& km, std::uint64_t use) {
      c.send(owner_of(km.seq, storage_workers_), kChannel, km.seq, km.offset, use);
    });
  }

  std::size_t storage_workers() const { return storage_workers_; }

 private:
  Ingestor ingest_;
  std::size_t storage_workers_;
};

template <typename Set>
class LMapProgram : public KmerProgram {
 public:
  using Map = LMap<std::string, Set>;

  LMapProgram(const dispenser::ByteSource& source, const WorkloadConfig& cfg, Set proto)
      : KmerProgram(source, cfg), proto_(std::move(proto)) {}

  void declare(Declarations& d) const override {
    d.collection("inbox", Map{}, Lifetime::kScratch);
    d.collection("local", Map{}, Lifetime::kPersistent);
    d.rule({"local", MergeOp::kInstant, {{"inbox", true}}, [](const WorkerContext& ctx) -> std::optional<AnyLattice> {
              const auto& inbox = ctx.get<Map>("inbox");
              if (inbox.size() == 0) return std::nullopt;
              return AnyLattice(inbox);
            }});
  }

  void on_deliver(WorkerContext& ctx, const runtime::Envelope& env) override {
    if (env.channel != kChannel) return;
    Set one = proto_;
    one.join(single(env.token_id));
    Map delta;
    delta.merge_at(env.payload, one);
    ctx.merge("inbox", delta);
  }

 private:
  Set single(std::uint64_t token) const {
    if constexpr (std::is_same_v<Set, LSet<std::uint64_t>>) {
      return Set{token};
    } else {
      return Set(proto_.threshold(), {token});
    }
  }

  Set proto_;
};

// lmap of plain lsets where an instance enters `incoming` only while the
// local count is below the threshold. The local count comes from a tri-state
// lookup: a missing key is IDK locally, which is enough to admit the
// instance because each k-mer has exactly one owner.
class GuardedProgram : public KmerProgram {
 public:
  using Map = LMap<std::string, LSet<std::uint64_t>>;

  GuardedProgram(const dispenser::ByteSource& source, const WorkloadConfig& cfg, std::size_t threshold,
                 MergeOp local_merge)
      : KmerProgram(source, cfg), threshold_(threshold), local_merge_(local_merge) {}

  static Tristate<std::size_t> local_count(const Map& local, const std::string& key) {
    if (const auto* s = local.find(key)) return s->size();
    return kIdk;
  }

  void declare(Declarations& d) const override {
    d.collection("inbox", Map{}, Lifetime::kScratch);
    d.collection("incoming", Map{}, Lifetime::kScratch);
    d.collection("local", Map{}, Lifetime::kPersistent);
    const std::size_t threshold = threshold_;
    d.rule({"incoming",
            MergeOp::kInstant,
            {{"inbox", true}, {"local", false}},
            [threshold](const WorkerContext& ctx) -> std::optional<AnyLattice> {
              const auto& inbox = ctx.get<Map>("inbox");
              const auto& local = ctx.get<Map>("local");
              Map admitted;
              for (const auto& [kmer, ids] : inbox.entries()) {
                const auto count = local_count(local, kmer);
                if (count.is_idk() || count.value() < threshold) admitted.merge_at(kmer, ids);
              }
              if (admitted.size() == 0) return std::nullopt;
              return AnyLattice(std::move(admitted));
            }});
    d.rule({"local", local_merge_, {{"incoming", true}}, [](const WorkerContext& ctx) -> std::optional<AnyLattice> {
              const auto& incoming = ctx.get<Map>("incoming");
              if (incoming.size() == 0) return std::nullopt;
              return AnyLattice(incoming);
            }});
  }

  void on_deliver(WorkerContext& ctx, const runtime::Envelope& env) override {
    if (env.channel != kChannel) return;
    Map delta;
    delta.merge_at(env.payload, LSet<std::uint64_t>{env.token_id});
    ctx.merge("inbox", delta);
  }

 private:
  std::size_t threshold_;
  MergeOp local_merge_;
};

template <typename Map>
void collect(const runtime::Runtime& rt, KmerRun& out) {
  std::set<std::string> seen;
  for (WorkerId w : rt.workers()) {
    for (const auto& [kmer, ids] : rt.get<Map>(w, "local").entries()) {
      if (!seen.insert(kmer).second) out.partitions_disjoint = false;
      out.histogram.counts[kmer] += ids.size();
      out.stored_ids[kmer] += ids.size();
      out.histogram.total_windows += ids.size();
    }
  }
}

template <typename Program, typename Map>
KmerRun run_program(Program& program, const WorkloadConfig& cfg) {
  runtime::Runtime rt(program, cfg.schedule, cfg.run);
  KmerRun out;
  out.stats = rt.run_to_quiescence();
  out.histogram.k = cfg.k;
  collect<Map>(rt, out);
  out.log = rt.sim().log();
  return out;
}

void check_workers(const WorkloadConfig& cfg) {
  if (cfg.run.workers < 1) throw std::invalid_argument("at least one worker is required");
}

}  // namespace

KmerRun impl_a_run(const dispenser::ByteSource& source, const WorkloadConfig& cfg) {
  check_workers(cfg);
  LMapProgram<LSet<std::uint64_t>> program(source, cfg, LSet<std::uint64_t>{});
  return run_program<decltype(program), LMap<std::string, LSet<std::uint64_t>>>(program, cfg);
}

KmerRun impl_b_run(const dispenser::ByteSource& source, std::size_t threshold, const WorkloadConfig& cfg) {
  check_workers(cfg);
  if (threshold < 1) throw std::invalid_argument("threshold must be at least 1");
  LMapProgram<BuddyLSet<std::uint64_t>> program(source, cfg, BuddyLSet<std::uint64_t>(threshold));
  return run_program<decltype(program), LMap<std::string, BuddyLSet<std::uint64_t>>>(program, cfg);
}

KmerRun guarded_lset_run(const dispenser::ByteSource& source, std::size_t threshold, MergeOp local_merge,
                         const WorkloadConfig& cfg) {
  check_workers(cfg);
  GuardedProgram program(source, cfg, threshold, local_merge);
  return run_program<GuardedProgram, GuardedProgram::Map>(program, cfg);
}

Aggregate aggregate_kmer_counts(const tables::GlobalTable& table, runtime::Simulator& sim, std::uint64_t tick_cap) {
  Aggregate out;
  const auto qp = tables::plan_query(table, "seq");
  out.coordination_free = qp.coordination_free;
  const auto per_shard = tables::group_count_per_shard(table, "seq");
  sim.note("aggregate_begin", std::nullopt, std::nullopt);
  const auto sent_before = sim.remote_messages();

  if (qp.coordination_free) {
    for (const auto& [w, groups] : per_shard) {
      sim.note("aggregate_local", w, w, groups.size());
      for (const auto& [key, n] : groups) out.counts[tables::to_string(key)] += n;
    }
  } else {
    // Shuffle partials to each group's hash owner.
    const auto& workers = qp.plan.workers;
    std::map<WorkerId, std::map<std::string, std::uint64_t>> totals;
    IdSource tokens(sim.now() ^ 0x61676772ULL);
    for (const auto& [w, groups] : per_shard) {
      for (const auto& [key, n] : groups) {
        const auto seq = tables::to_string(key);
        const WorkerId dst = workers[tables::hash_value(key) % workers.size()];
        if (dst == w) {
          totals[dst][seq] += n;
        } else {
          sim.send(runtime::Envelope{tokens.fresh(), 0, w, dst, "shuffle", seq + "\t" + std::to_string(n), 0});
        }
      }
    }
    dispenser::DedupSink sink;
    const std::uint64_t deadline = sim.now() + tick_cap;
    while (sim.in_flight()) {
      if (sim.now() >= deadline) throw tables::DivergenceError("aggregation shuffle did not drain");
      for (const auto& env : sim.tick()) {
        if (!sink.accept(env.token_id, env.use_id)) continue;
        const auto tab = env.payload.find('\t');
        totals[env.dst][env.payload.substr(0, tab)] += std::stoull(env.payload.substr(tab + 1));
      }
    }
    for (const auto& [w, groups] : totals) {
      for (const auto& [seq, n] : groups) out.counts[seq] += n;
    }
  }
  out.messages = sim.remote_messages() - sent_before;
  sim.note("aggregate_end", std::nullopt, std::nullopt, out.messages);
  return out;
}

namespace {

class BuddiProgram : public KmerProgram {
 public:
  using Shard = lattice::GSet<tables::Tuple>;

  BuddiProgram(const dispenser::ByteSource& source, const WorkloadConfig& cfg) : KmerProgram(source, cfg) {}

  void declare(Declarations& d) const override { d.collection("kmers", Shard{}, Lifetime::kPersistent); }

  void on_deliver(WorkerContext& ctx, const runtime::Envelope& env) override {
    if (env.channel != kChannel) return;
    sinks_[ctx.self()].accept(env.token_id, env.use_id);
    // Keyed by token only: a re-read chunk lands on the same tuples.
    ctx.merge("kmers", Shard{tables::Tuple{env.payload, static_cast<std::int64_t>(env.token_id)}});
  }

  std::uint64_t absorbed() const {
    std::uint64_t n = 0;
    for (const auto& [w, s] : sinks_) n += s.absorbed();
    return n;
  }

 private:
  std::map<WorkerId, dispenser::DedupSink> sinks_;
};

KmerHistogram histogram_of(const runtime::Runtime& rt, std::size_t k) {
  KmerHistogram h;
  h.k = k;
  for (WorkerId w : rt.workers()) {
    for (const auto& t : rt.get<BuddiProgram::Shard>(w, "kmers").elems()) {
      ++h.counts[std::get<std::string>(t[0])];
      ++h.total_windows;
    }
  }
  return h;
}

}  // namespace

BuddiRun buddi_kmer_query(const dispenser::ByteSource& source, const WorkloadConfig& cfg,
                          std::uint64_t partial_every) {
  check_workers(cfg);
  BuddiProgram program(source, cfg);
  runtime::Runtime rt(program, cfg.schedule, cfg.run);

  std::vector<WorkerId> storage;
  for (std::size_t i = 0; i < program.storage_workers(); ++i) storage.push_back(worker(static_cast<std::uint32_t>(i)));
  BuddiRun out{KmerRun{},
               tables::GlobalTable("kmers", tables::CrdtKind::kGSet, {"seq", "token"},
                                   tables::PartitionPlan::hash("seq", storage)),
               {},
               0,
               0,
               {}};

  while (!rt.quiescent()) {
    if (rt.now() >= cfg.run.tick_cap) {
      throw tables::DivergenceError("tick cap of " + std::to_string(cfg.run.tick_cap) + " exceeded before quiescence");
    }
    rt.step();
    if (partial_every != 0 && rt.now() % partial_every == 0) out.partials.emplace_back(rt.now(), histogram_of(rt, cfg.k));
  }
  out.stats = rt.stats();

  std::set<std::string> seen;
  for (WorkerId w : rt.workers()) {
    const auto& shard = rt.get<BuddiProgram::Shard>(w, "kmers");
    if (shard.empty()) continue;
    out.table.merge_into(w, shard);
    std::set<std::string> mine;
    for (const auto& t : shard.elems()) mine.insert(std::get<std::string>(t[0]));
    for (const auto& s : mine) {
      if (!seen.insert(s).second) out.partitions_disjoint = false;
    }
  }
  out.plan = tables::plan_query(out.table, "seq");
  const auto agg = aggregate_kmer_counts(out.table, rt.sim(), cfg.run.tick_cap);
  out.aggregation_messages = agg.messages;
  out.histogram.k = cfg.k;
  out.histogram.counts = agg.counts;
  for (const auto& [kmer, n] : agg.counts) {
    out.histogram.total_windows += n;
    out.stored_ids[kmer] = n;
  }
  out.duplicates_absorbed = program.absorbed();
  out.log = rt.sim().log();
  return out;
}

}  // namespace buddi::kmer
