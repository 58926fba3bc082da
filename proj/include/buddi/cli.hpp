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

#ifndef BUDDI_CLI_HPP_
#define BUDDI_CLI_HPP_

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "buddi/runtime.hpp"

namespace buddi::cli {

inline constexpr int kExitMatch = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;

inline const std::vector<std::string> kWorkloads = {"kmer_a",      "kmer_b",      "buddi_kmer",
                                                    "cms_design1", "cms_design2", "lattice_demo"};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string workload = "kmer_a";
  std::string input;
  std::size_t k = 4;
  std::size_t threshold = 3;
  std::size_t workers = 4;
  std::uint64_t seed = 42;
  double duplicate_prob = 0.0;
  std::uint32_t reorder_window = 0;
  double drop_prob = 0.0;
  std::vector<runtime::PartitionEvent> partition_events;
  std::vector<runtime::FailureEvent> failure_events;
  std::vector<std::uint64_t> join_events;
  double epsilon = 0.01;
  double delta = 0.01;
  std::uint64_t tick_cap = runtime::kDefaultTickCap;
  // Test hook: drop the first chunk without reading it.
  bool lose_first_chunk = false;

  // Throws ConfigError.
  void validate() const;
  nlohmann::json echo() const;
};

// "TICK:WORKER"
runtime::FailureEvent parse_failure(const std::string& text);
// "START[..END]:A-B[,C-D...]"; END defaults to START + kDefaultPartitionLength.
inline constexpr std::uint64_t kDefaultPartitionLength = 20;
runtime::PartitionEvent parse_partition(const std::string& text);
// "1,2,7" or "1..25", mixed freely.
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct RunOutcome {
  int exit_code = kExitMatch;
  nlohmann::json report;
  runtime::EventLog log;
};

// Runs one workload to quiescence and checks it against its oracle. Config
// problems and divergence are reported through exit_code, not thrown.
RunOutcome run(const RunConfig& cfg);

struct VerifyOutcome {
  int exit_code = kExitMatch;
  nlohmann::json summary;
};

// One run per seed, in parallel. Passes when every run matches its oracle
// and all runs agree on the workload's comparable state.
VerifyOutcome verify(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds);

// Report text: sorted keys, two-space indent, trailing newline.
std::string render(const nlohmann::json& j);

// Full command line entry point; returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace buddi::cli

#endif  // BUDDI_CLI_HPP_
