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

// File iterator: a pool of fixed-size chunks handed out on demand. Faster
// workers ask more often and so take more chunks; a failed worker's
// unfinished chunks go back to the pool, its finished ones stay finished.

#ifndef BUDDI_DISPENSER_HPP_
#define BUDDI_DISPENSER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "buddi/crdt.hpp"
#include "buddi/simulator.hpp"
#include "buddi/types.hpp"

namespace buddi::dispenser {

class DispenserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Read-only bytes, either a file on disk or an in-memory buffer.
class ByteSource {
 public:
  static ByteSource file(const std::filesystem::path& path);
  static ByteSource memory(std::string bytes);

  std::uint64_t size() const { return size_; }
  // 64-bit digest of the whole content; part of every chunk's token id.
  std::uint64_t digest() const { return digest_; }
  std::string read(std::uint64_t offset, std::uint64_t len) const;
  std::string read_all() const { return read(0, size_); }

 private:
  std::filesystem::path path_;
  std::shared_ptr<const std::string> bytes_;
  std::uint64_t size_ = 0;
  std::uint64_t digest_ = 0;
};

struct Chunk {
  std::uint64_t index = 0;
  std::uint64_t start = 0;
  std::uint64_t len = 0;
  std::uint64_t token_id = 0;

  friend auto operator<=>(const Chunk&, const Chunk&) = default;
};

std::uint64_t chunk_token(std::uint64_t digest, std::uint64_t start);

inline constexpr std::uint64_t kChunksPerWorker = 8;

// chunk_len giving about kChunksPerWorker chunks per worker.
std::uint64_t default_chunk_len(std::uint64_t file_size, std::size_t workers);

class WorkPool {
 public:
  WorkPool(ByteSource source, std::uint64_t chunk_len);

  const ByteSource& source() const { return source_; }
  std::uint64_t chunk_len() const { return chunk_len_; }
  const std::vector<Chunk>& chunks() const { return chunks_; }

  void add_worker(WorkerId w);
  bool has_worker(WorkerId w) const { return workers_.contains(w); }

  // Moves the lowest pending chunk to w. nullopt once nothing is pending,
  // even while other workers still hold chunks.
  std::optional<Chunk> next(WorkerId w, std::uint64_t tick = 0);
  void complete(WorkerId w, const Chunk& c);
  // Returns w's unfinished chunks to pending and drops w from the pool.
  std::vector<Chunk> fail(WorkerId w);

  // Workers holding chunks whose last request is more than `limit` ticks old.
  std::vector<WorkerId> stale_workers(std::uint64_t tick, std::uint64_t limit) const;

  bool exhausted() const { return pending_.empty(); }
  bool finished() const { return completed_.size() == chunks_.size(); }

  const std::set<std::uint64_t>& pending() const { return pending_; }
  const std::set<std::uint64_t>& completed() const { return completed_; }
  std::set<std::uint64_t> assigned(WorkerId w) const;
  std::uint64_t requests(WorkerId w) const;
  std::uint64_t completed_by(WorkerId w) const;

  // pending, assigned and completed partition the chunk indices.
  bool consistent() const;

  // Chunk bytes plus up to `overlap` bytes past the end.
  std::string read(const Chunk& c, std::uint64_t overlap = 0) const;

 private:
  struct WorkerStats {
    std::set<std::uint64_t> assigned;
    std::uint64_t requests = 0;
    std::uint64_t completed = 0;
    std::uint64_t last_request = 0;
  };

  ByteSource source_;
  std::uint64_t chunk_len_;
  std::vector<Chunk> chunks_;
  std::set<std::uint64_t> pending_;
  std::set<std::uint64_t> completed_;
  std::map<WorkerId, WorkerStats> workers_;
};

WorkPool open(const std::filesystem::path& path, std::uint64_t chunk_len);

// Exactly-once filter over at-least-once delivery. Keeps a G-Set of
// (token, use) pairs: a redelivered pair is absorbed, a token re-issued
// under a new use is seen as a distinct use.
class DedupSink {
 public:
  // True the first time the pair is seen.
  bool accept(std::uint64_t token, std::uint64_t use);

  bool seen_token(std::uint64_t token) const { return tokens_.contains(token); }
  const std::set<std::uint64_t>& tokens() const { return tokens_; }
  std::size_t uses() const { return seen_.size(); }
  std::uint64_t absorbed() const { return absorbed_; }

 private:
  lattice::GSet<std::pair<std::uint64_t, std::uint64_t>> seen_;
  std::set<std::uint64_t> tokens_;
  std::uint64_t absorbed_ = 0;
};

// Distinct (token, use) data units in first-arrival order.
std::vector<runtime::Envelope> dedup_sink(std::span<const runtime::Envelope> envelopes);

}  // namespace buddi::dispenser

#endif  // BUDDI_DISPENSER_HPP_
