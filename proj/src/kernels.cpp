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

#include "buddi/kernels.hpp"

#include <string>
#include <unordered_map>
#include <utility>

#include <omp.h>

namespace buddi::kernels {
namespace {

// [start, end) of every line.
std::vector<std::pair<std::size_t, std::size_t>> line_spans(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    spans.emplace_back(start, nl);
    start = nl + 1;
  }
  return spans;
}

}  // namespace

kmer::KmerHistogram count_kmers_serial(std::string_view text, std::size_t k) {
  kmer::check_k(k);
  kmer::KmerHistogram h;
  h.k = k;
  for (auto [s, e] : line_spans(text)) {
    for (auto& km : kmer::extract_kmers(text.substr(s, e - s), k)) {
      ++h.counts[km.seq];
      ++h.total_windows;
    }
  }
  return h;
}

kmer::KmerHistogram count_kmers_parallel(std::string_view text, std::size_t k) {
  kmer::check_k(k);
  const auto spans = line_spans(text);
  const int threads = omp_get_max_threads();
  std::vector<std::unordered_map<std::string, std::uint64_t>> partial(static_cast<std::size_t>(threads));
  std::vector<std::uint64_t> windows(static_cast<std::size_t>(threads), 0);
  const auto n = static_cast<std::int64_t>(spans.size());
  // extract_kmers may throw; capture the first failure and rethrow outside.
  std::exception_ptr failure;
#pragma omp parallel num_threads(threads)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        const auto [s, e] = spans[static_cast<std::size_t>(i)];
        for (auto& km : kmer::extract_kmers(text.substr(s, e - s), k)) {
          ++partial[t][km.seq];
          ++windows[t];
        }
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  kmer::KmerHistogram h;
  h.k = k;
  for (std::size_t t = 0; t < partial.size(); ++t) {
    for (const auto& [seq, c] : partial[t]) h.counts[seq] += c;
    h.total_windows += windows[t];
  }
  return h;
}

std::vector<kmer::KmerAt> kmer_instances(std::string_view text, std::size_t k) {
  kmer::check_k(k);
  std::vector<kmer::KmerAt> out;
  for (auto [s, e] : line_spans(text)) {
    for (auto& km : kmer::extract_kmers(text.substr(s, e - s), k)) out.push_back({std::move(km.seq), km.offset + s});
  }
  return out;
}

sketch::SketchMatrix build_sketch_serial(const std::vector<kmer::KmerAt>& items, const sketch::CmsParams& params) {
  sketch::SketchMatrix sk(params);
  for (const auto& km : items) sk.insert(km.seq, km.offset);
  return sk;
}

sketch::SketchMatrix build_sketch_parallel(const std::vector<kmer::KmerAt>& items, const sketch::CmsParams& params) {
  // One matrix per row, filled independently, then joined.
  std::vector<sketch::SketchMatrix> rows(params.h, sketch::SketchMatrix(params));
  const auto h = static_cast<std::int64_t>(params.h);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < h; ++r) {
    auto& sk = rows[static_cast<std::size_t>(r)];
    const auto row = static_cast<std::uint32_t>(r);
    for (const auto& km : items) sk.insert_cell(row, sk.column(row, km.seq), km.offset);
  }
  sketch::SketchMatrix out(params);
  for (const auto& sk : rows) out.join(sk);
  return out;
}

}  // namespace buddi::kernels
