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

#ifndef BUDDI_KMER_HPP_
#define BUDDI_KMER_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "buddi/types.hpp"

namespace buddi::kmer {

class InvalidBase : public std::invalid_argument {
 public:
  InvalidBase(char c, std::uint64_t offset)
      : std::invalid_argument("invalid base '" + std::string(1, c) + "' at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

inline constexpr std::size_t kDefaultK = 4;
inline constexpr std::size_t kMaxK = 31;

// Uppercase base, or 0 for anything outside ACGT.
constexpr char normalize_base(char c) noexcept {
  switch (c) {
    case 'A': case 'a': return 'A';
    case 'C': case 'c': return 'C';
    case 'G': case 'g': return 'G';
    case 'T': case 't': return 'T';
    default: return 0;
  }
}

// Uppercased copy; throws InvalidBase.
std::string normalize(std::string_view seq);

struct KmerAt {
  std::string seq;
  std::uint64_t offset = 0;
  friend bool operator==(const KmerAt&, const KmerAt&) = default;
};

// Every window of length k with its start offset. Empty if |s| < k.
std::vector<KmerAt> extract_kmers(std::string_view s, std::size_t k);

struct KmerHistogram {
  std::size_t k = kDefaultK;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_windows = 0;

  std::uint64_t count_of(const std::string& kmer) const {
    auto it = counts.find(kmer);
    return it == counts.end() ? 0 : it->second;
  }
  friend bool operator==(const KmerHistogram&, const KmerHistogram&) = default;
};

// {"k", "counts", "total_windows"}; nlohmann's object keeps keys sorted.
nlohmann::json to_json(const KmerHistogram& h);

// LF-separated lines; a trailing newline does not add an empty line.
std::vector<std::string> split_lines(std::string_view text);

// Sequential ground truth: exact multiset count, one line at a time.
KmerHistogram oracle_count(const std::vector<std::string>& corpus, std::size_t k);

// K-mers starting inside [chunk_start, chunk_start + chunk_len) of a
// newline-separated file. `bytes` begins at chunk_start and may run up to
// k - 1 bytes past the chunk, so a window straddling the boundary belongs to
// the chunk holding its first base. Offsets are absolute.
std::vector<KmerAt> kmers_in_chunk(std::string_view bytes, std::uint64_t chunk_start, std::uint64_t chunk_len,
                                   std::size_t k);

// Owner of a k-mer among `workers` storage workers.
WorkerId owner_of(std::string_view kmer, std::size_t workers);

void check_k(std::size_t k);

}  // namespace buddi::kmer

#endif  // BUDDI_KMER_HPP_
