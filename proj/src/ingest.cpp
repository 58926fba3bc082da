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

#include "buddi/ingest.hpp"

namespace buddi::kmer {

namespace {
std::uint64_t chunk_len_for(const dispenser::ByteSource& src, const IngestOptions& o, std::size_t workers) {
  return o.chunk_len != 0 ? o.chunk_len : dispenser::default_chunk_len(src.size(), workers);
}
}  // namespace

Ingestor::Ingestor(dispenser::ByteSource source, std::size_t k, IngestOptions options, std::size_t initial_workers)
    : k_(k),
      options_(std::move(options)),
      pool_(source, chunk_len_for(source, options_, initial_workers)) {
  check_k(k_);
  if (options_.kmers_per_tick == 0) throw std::invalid_argument("kmers_per_tick must be positive");
}

void Ingestor::on_fail(runtime::Runtime& rt, WorkerId w) {
  if (!pool_.has_worker(w)) return;
  for (const auto& c : pool_.fail(w)) rt.sim().note("requeue", w, std::nullopt, c.token_id);
  current_.erase(w);
}

void Ingestor::on_tick(runtime::WorkerContext& ctx, const Emit& emit) {
  const WorkerId w = ctx.self();
  if (!pool_.has_worker(w)) return;
  auto& sim = ctx.runtime().sim();

  if (options_.stale_limit != 0) {
    for (WorkerId stale : pool_.stale_workers(ctx.now(), options_.stale_limit)) {
      ctx.runtime().fail_worker(stale);
    }
    if (!pool_.has_worker(w)) return;
  }

  auto it = current_.find(w);
  if (it == current_.end()) {
    const auto idx = index_of(w);
    const std::uint64_t period = idx < options_.request_period.size() ? options_.request_period[idx] : 1;
    if (period > 1 && ctx.now() % period != 0) return;
    auto chunk = pool_.next(w, ctx.now());
    if (!chunk) return;
    const std::uint64_t use = ctx.runtime().ids().fresh();
    sim.note("assign", std::nullopt, w, chunk->token_id, use);
    if (options_.lose_first_chunk && !lost_ && chunk->index == 0) {
      lost_ = true;
      pool_.complete(w, *chunk);
      sim.note("complete", w, std::nullopt, chunk->token_id, use);
      return;
    }
    InProgress job{*chunk, use, {}, 0};
    const auto bytes = pool_.read(*chunk, k_ - 1);
    job.kmers = kmers_in_chunk(bytes, chunk->start, chunk->len, k_);
    it = current_.emplace(w, std::move(job)).first;
  }

  auto& job = it->second;
  const std::size_t end = std::min(job.kmers.size(), job.cursor + static_cast<std::size_t>(options_.kmers_per_tick));
  for (; job.cursor < end; ++job.cursor) emit(ctx, job.kmers[job.cursor], job.use);
  if (job.cursor == job.kmers.size()) {
    pool_.complete(w, job.chunk);
    sim.note("complete", w, std::nullopt, job.chunk.token_id, job.use);
    current_.erase(it);
  }
}

}  // namespace buddi::kmer
