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

#ifndef BUDDI_INGEST_HPP_
#define BUDDI_INGEST_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "buddi/dispenser.hpp"
#include "buddi/kmer.hpp"
#include "buddi/runtime.hpp"

namespace buddi::kmer {

struct IngestOptions {
  std::uint64_t chunk_len = 0;      // 0: dispenser::default_chunk_len
  std::uint64_t kmers_per_tick = 64;
  // Worker i asks for a chunk only on ticks divisible by request_period[i]
  // (1 when absent).
  std::vector<std::uint64_t> request_period;
  // Fail a worker that holds chunks but has not asked for work in this many
  // ticks. 0 disables.
  std::uint64_t stale_limit = 0;
  // Fault injection for negative tests: chunk 0 is marked complete without
  // being read.
  bool lose_first_chunk = false;
};

// Drives chunked reading of a DNA file from inside a runtime program. Each
// assignment of a chunk is one use of it and gets a fresh use id; k-mers are
// tokened by their byte offset.
class Ingestor {
 public:
  using Emit = std::function<void(runtime::WorkerContext&, const KmerAt&, std::uint64_t use)>;

  Ingestor(dispenser::ByteSource source, std::size_t k, IngestOptions options, std::size_t initial_workers);

  void on_register(WorkerId w) { pool_.add_worker(w); }
  void on_fail(runtime::Runtime& rt, WorkerId w);
  void on_tick(runtime::WorkerContext& ctx, const Emit& emit);
  bool idle() const { return pool_.finished(); }

  const dispenser::WorkPool& pool() const { return pool_; }
  std::size_t k() const { return k_; }

 private:
  struct InProgress {
    dispenser::Chunk chunk;
    std::uint64_t use = 0;
    std::vector<KmerAt> kmers;
    std::size_t cursor = 0;
  };

  std::size_t k_;
  IngestOptions options_;
  dispenser::WorkPool pool_;
  std::map<WorkerId, InProgress> current_;
  bool lost_ = false;
};

}  // namespace buddi::kmer

#endif  // BUDDI_INGEST_HPP_
