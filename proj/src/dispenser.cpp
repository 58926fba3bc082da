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

#include "buddi/dispenser.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "buddi/hash.hpp"

namespace buddi::dispenser {

ByteSource ByteSource::file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DispenserError("cannot open '" + path.string() + "'");
  // One streaming pass for the digest; chunks are read later on demand.
  ByteSource s;
  s.path_ = path;
  std::string block(1 << 16, '\0');
  std::uint64_t h = 0;
  while (in) {
    in.read(block.data(), static_cast<std::streamsize>(block.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    h = hash_combine(h, hash_bytes(std::string_view(block.data(), got), s.size_));
    s.size_ += got;
  }
  if (in.bad()) throw DispenserError("error reading '" + path.string() + "'");
  s.digest_ = hash_combine(h, s.size_);
  return s;
}

ByteSource ByteSource::memory(std::string bytes) {
  ByteSource s;
  s.size_ = bytes.size();
  std::uint64_t h = 0;
  constexpr std::size_t kBlock = 1 << 16;
  for (std::uint64_t off = 0; off < s.size_; off += kBlock) {
    h = hash_combine(h, hash_bytes(std::string_view(bytes).substr(off, kBlock), off));
  }
  s.digest_ = hash_combine(h, s.size_);
  s.bytes_ = std::make_shared<const std::string>(std::move(bytes));
  return s;
}

std::string ByteSource::read(std::uint64_t offset, std::uint64_t len) const {
  if (offset >= size_) return {};
  len = std::min(len, size_ - offset);
  if (bytes_) return bytes_->substr(offset, len);
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw DispenserError("cannot reopen '" + path_.string() + "'");
  in.seekg(static_cast<std::streamoff>(offset));
  std::string out(len, '\0');
  in.read(out.data(), static_cast<std::streamsize>(len));
  if (static_cast<std::uint64_t>(in.gcount()) != len) throw DispenserError("short read from '" + path_.string() + "'");
  return out;
}

std::uint64_t chunk_token(std::uint64_t digest, std::uint64_t start) { return hash_combine(digest, start); }

std::uint64_t default_chunk_len(std::uint64_t file_size, std::size_t workers) {
  const std::uint64_t target = kChunksPerWorker * std::max<std::size_t>(workers, 1);
  return std::max<std::uint64_t>(1, (file_size + target - 1) / target);
}

WorkPool::WorkPool(ByteSource source, std::uint64_t chunk_len) : source_(std::move(source)), chunk_len_(chunk_len) {
  if (chunk_len_ == 0) throw DispenserError("chunk_len must be positive");
  for (std::uint64_t start = 0, i = 0; start < source_.size(); start += chunk_len_, ++i) {
    chunks_.push_back(Chunk{i, start, std::min(chunk_len_, source_.size() - start),
                            chunk_token(source_.digest(), start)});
    pending_.insert(i);
  }
}

WorkPool open(const std::filesystem::path& path, std::uint64_t chunk_len) {
  return WorkPool(ByteSource::file(path), chunk_len);
}

void WorkPool::add_worker(WorkerId w) { workers_.try_emplace(w); }

std::optional<Chunk> WorkPool::next(WorkerId w, std::uint64_t tick) {
  auto it = workers_.find(w);
  if (it == workers_.end()) throw DispenserError("unknown worker " + to_string(w));
  ++it->second.requests;
  it->second.last_request = tick;
  if (pending_.empty()) return std::nullopt;
  const auto idx = *pending_.begin();
  pending_.erase(pending_.begin());
  it->second.assigned.insert(idx);
  return chunks_[idx];
}

void WorkPool::complete(WorkerId w, const Chunk& c) {
  auto it = workers_.find(w);
  if (it == workers_.end() || !it->second.assigned.contains(c.index)) {
    throw DispenserError("chunk " + std::to_string(c.index) + " is not assigned to worker " + to_string(w));
  }
  it->second.assigned.erase(c.index);
  ++it->second.completed;
  completed_.insert(c.index);
}

std::vector<Chunk> WorkPool::fail(WorkerId w) {
  auto it = workers_.find(w);
  if (it == workers_.end()) throw DispenserError("unknown worker " + to_string(w));
  std::vector<Chunk> returned;
  for (auto idx : it->second.assigned) {
    pending_.insert(idx);
    returned.push_back(chunks_[idx]);
  }
  workers_.erase(it);
  return returned;
}

std::vector<WorkerId> WorkPool::stale_workers(std::uint64_t tick, std::uint64_t limit) const {
  std::vector<WorkerId> out;
  for (const auto& [w, s] : workers_) {
    if (!s.assigned.empty() && tick > s.last_request + limit) out.push_back(w);
  }
  return out;
}

std::set<std::uint64_t> WorkPool::assigned(WorkerId w) const {
  auto it = workers_.find(w);
  return it == workers_.end() ? std::set<std::uint64_t>{} : it->second.assigned;
}

std::uint64_t WorkPool::requests(WorkerId w) const {
  auto it = workers_.find(w);
  return it == workers_.end() ? 0 : it->second.requests;
}

std::uint64_t WorkPool::completed_by(WorkerId w) const {
  auto it = workers_.find(w);
  return it == workers_.end() ? 0 : it->second.completed;
}

bool WorkPool::consistent() const {
  std::vector<std::uint64_t> all(pending_.begin(), pending_.end());
  all.insert(all.end(), completed_.begin(), completed_.end());
  for (const auto& [w, s] : workers_) all.insert(all.end(), s.assigned.begin(), s.assigned.end());
  std::sort(all.begin(), all.end());
  if (all.size() != chunks_.size()) return false;
  for (std::uint64_t i = 0; i < all.size(); ++i) {
    if (all[i] != i) return false;
  }
  return true;
}

std::string WorkPool::read(const Chunk& c, std::uint64_t overlap) const {
  return source_.read(c.start, c.len + overlap);
}

bool DedupSink::accept(std::uint64_t token, std::uint64_t use) {
  if (!seen_.insert({token, use})) {
    ++absorbed_;
    return false;
  }
  tokens_.insert(token);
  return true;
}

std::vector<runtime::Envelope> dedup_sink(std::span<const runtime::Envelope> envelopes) {
  DedupSink sink;
  std::vector<runtime::Envelope> out;
  for (const auto& e : envelopes) {
    if (sink.accept(e.token_id, e.use_id)) out.push_back(e);
  }
  return out;
}

}  // namespace buddi::dispenser
