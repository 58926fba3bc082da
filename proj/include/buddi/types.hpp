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

#ifndef BUDDI_TYPES_HPP_
#define BUDDI_TYPES_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace buddi {

enum class WorkerId : std::uint32_t {};

constexpr std::uint32_t index_of(WorkerId w) noexcept { return static_cast<std::uint32_t>(w); }
constexpr WorkerId worker(std::uint32_t i) noexcept { return static_cast<WorkerId>(i); }
inline std::string to_string(WorkerId w) { return std::to_string(index_of(w)); }

// Symmetric set of cut worker pairs. Empty means healthy.
class NetworkCondition {
 public:
  static NetworkCondition healthy_network() { return {}; }

  bool healthy() const { return cut_.empty(); }

  void partition(WorkerId a, WorkerId b) {
    if (a != b) cut_.insert(ordered(a, b));
  }
  void heal(WorkerId a, WorkerId b) { cut_.erase(ordered(a, b)); }
  void heal_all() { cut_.clear(); }

  bool reachable(WorkerId a, WorkerId b) const { return a == b || !cut_.contains(ordered(a, b)); }

  const std::set<std::pair<WorkerId, WorkerId>>& cut() const { return cut_; }

  friend bool operator==(const NetworkCondition&, const NetworkCondition&) = default;

 private:
  static std::pair<WorkerId, WorkerId> ordered(WorkerId a, WorkerId b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }

  std::set<std::pair<WorkerId, WorkerId>> cut_;
};

}  // namespace buddi

#endif  // BUDDI_TYPES_HPP_
