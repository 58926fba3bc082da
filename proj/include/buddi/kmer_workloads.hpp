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

// Distributed k-mer counting on the simulator. Every variant reads the input
// through the chunk dispenser and routes each k-mer instance, tokened by its
// byte offset, to the single worker owning that k-mer.
//
//   impl_a_run          owner keeps lmap<kmer, lset<token>>; count = |lset|
//   impl_b_run          owner keeps lmap<kmer, BuddyLSet<token>>, exact
//                       below the threshold and saturating above it
//   guarded_lset_run    lmap of plain lsets, insertion guarded by a local
//                       lookup of the current count
//   buddi_kmer_query    G-Set global table kmers(seq, token) hash-placed on
//                       seq, then a grouped count

#ifndef BUDDI_KMER_WORKLOADS_HPP_
#define BUDDI_KMER_WORKLOADS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "buddi/dispenser.hpp"
#include "buddi/global_table.hpp"
#include "buddi/ingest.hpp"
#include "buddi/kmer.hpp"
#include "buddi/runtime.hpp"

namespace buddi::kmer {

struct WorkloadConfig {
  std::size_t k = kDefaultK;
  runtime::RunOptions run;
  runtime::DeliverySchedule schedule;
  IngestOptions ingest;
};

struct KmerRun {
  KmerHistogram histogram;
  runtime::RunStats stats;
  runtime::EventLog log;
  // Instance ids held per k-mer at its owner.
  std::map<std::string, std::uint64_t> stored_ids;
  // No k-mer key is held by two workers.
  bool partitions_disjoint = true;
};

KmerRun impl_a_run(const dispenser::ByteSource& source, const WorkloadConfig& cfg);

KmerRun impl_b_run(const dispenser::ByteSource& source, std::size_t threshold, const WorkloadConfig& cfg);

// `local_merge` picks how incoming instances reach the local table. With
// kInstant the guard and the merge form a non-monotone cycle in one tick
// and Runtime construction throws runtime::StratificationError.
KmerRun guarded_lset_run(const dispenser::ByteSource& source, std::size_t threshold, runtime::MergeOp local_merge,
                         const WorkloadConfig& cfg);

struct Aggregate {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t messages = 0;  // cross-worker messages spent on the aggregate
  bool coordination_free = false;
};

// GROUP BY seq, COUNT(*) over a kmers(seq, token) table. When the plan makes
// the aggregate coordination-free each worker counts its own shard; otherwise
// partial counts are shuffled over `sim` to the group's hash owner and
// deduplicated by token on arrival.
Aggregate aggregate_kmer_counts(const tables::GlobalTable& table, runtime::Simulator& sim,
                                std::uint64_t tick_cap = runtime::kDefaultTickCap);

struct BuddiRun : KmerRun {
  tables::GlobalTable table;
  tables::QueryPlan plan;
  std::uint64_t aggregation_messages = 0;
  std::uint64_t duplicates_absorbed = 0;
  // (tick, running histogram) every `partial_every` ticks when requested.
  std::vector<std::pair<std::uint64_t, KmerHistogram>> partials;
};

BuddiRun buddi_kmer_query(const dispenser::ByteSource& source, const WorkloadConfig& cfg,
                          std::uint64_t partial_every = 0);

}  // namespace buddi::kmer

#endif  // BUDDI_KMER_WORKLOADS_HPP_
