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

#include "buddi/kmer.hpp"

#include "buddi/hash.hpp"

namespace buddi::kmer {

void check_k(std::size_t k) {
  if (k < 1 || k > kMaxK) throw std::invalid_argument("k must be in [1, " + std::to_string(kMaxK) + "]");
}

std::string normalize(std::string_view seq) {
  std::string out(seq.size(), '\0');
  for (std::size_t i = 0; i < seq.size(); ++i) {
    out[i] = normalize_base(seq[i]);
    if (out[i] == 0) throw InvalidBase(seq[i], i);
  }
  return out;
}

std::vector<KmerAt> extract_kmers(std::string_view s, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  const std::string norm = normalize(s);
  std::vector<KmerAt> out;
  if (norm.size() < k) return out;
  out.reserve(norm.size() - k + 1);
  for (std::size_t i = 0; i + k <= norm.size(); ++i) out.push_back({norm.substr(i, k), i});
  return out;
}

nlohmann::json to_json(const KmerHistogram& h) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [kmer, c] : h.counts) counts[kmer] = c;
  return {{"k", h.k}, {"counts", std::move(counts)}, {"total_windows", h.total_windows}};
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.emplace_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

KmerHistogram oracle_count(const std::vector<std::string>& corpus, std::size_t k) {
  KmerHistogram h;
  h.k = k;
  for (const auto& line : corpus) {
    for (auto& km : extract_kmers(line, k)) {
      ++h.counts[km.seq];
      ++h.total_windows;
    }
  }
  return h;
}

std::vector<KmerAt> kmers_in_chunk(std::string_view bytes, std::uint64_t chunk_start, std::uint64_t chunk_len,
                                   std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  std::vector<KmerAt> out;
  const std::size_t own = static_cast<std::size_t>(std::min<std::uint64_t>(chunk_len, bytes.size()));
  // Length of the run of valid bases ending at each position.
  std::size_t run = 0;
  std::string window;
  const std::size_t limit = std::min(bytes.size(), own + k - 1);
  for (std::size_t i = 0; i < limit; ++i) {
    const char c = bytes[i];
    if (c == '\n') {
      run = 0;
      continue;
    }
    if (normalize_base(c) == 0) {
      // Bases past the chunk belong to the next chunk's validation.
      if (i < own) throw InvalidBase(c, chunk_start + i);
      run = 0;
      continue;
    }
    ++run;
    if (run >= k) {
      const std::size_t start = i + 1 - k;
      if (start >= own) break;
      window.assign(bytes.substr(start, k));
      for (auto& b : window) b = normalize_base(b);
      out.push_back({window, chunk_start + start});
    }
  }
  return out;
}

WorkerId owner_of(std::string_view kmer, std::size_t workers) {
  return worker(static_cast<std::uint32_t>(hash_bytes(kmer) % workers));
}

}  // namespace buddi::kmer
