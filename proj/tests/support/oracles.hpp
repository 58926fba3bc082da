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

// Reference computations for tests, written without the library's code paths.

#ifndef BUDDI_TESTS_ORACLES_HPP_
#define BUDDI_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Count every length-k window of every line, uppercased.
inline std::map<std::string, std::uint64_t> kmer_counts(const std::string& text, std::size_t k) {
  std::map<std::string, std::uint64_t> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::transform(line.begin(), line.end(), line.begin(), [](unsigned char c) { return std::toupper(c); });
    for (std::size_t i = 0; i + k <= line.size(); ++i) ++out[line.substr(i, k)];
  }
  return out;
}

// Replays insert/delete operations in timestamp order against a plain map.
struct TsOp {
  std::uint64_t time;
  std::uint32_t worker;
  bool insert;
  std::uint64_t token;
  std::string payload;
};

inline std::map<std::uint64_t, std::string> replay(std::vector<TsOp> ops) {
  std::sort(ops.begin(), ops.end(), [](const TsOp& a, const TsOp& b) {
    return std::tie(a.time, a.worker) < std::tie(b.time, b.worker);
  });
  std::map<std::uint64_t, std::string> state;
  for (const auto& op : ops) {
    if (op.insert) {
      state[op.token] = op.payload;
    } else {
      state.erase(op.token);
    }
  }
  return state;
}

// Deterministic random DNA, one line per `line_len` bases.
inline std::string random_dna(std::uint64_t seed, std::size_t bases, std::size_t line_len) {
  std::string out;
  std::uint64_t x = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  for (std::size_t i = 0; i < bases; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    out += "ACGT"[(x >> 33) & 3];
    if ((i + 1) % line_len == 0) out += '\n';
  }
  if (out.empty() || out.back() != '\n') out += '\n';
  return out;
}

}  // namespace oracle

#endif  // BUDDI_TESTS_ORACLES_HPP_
