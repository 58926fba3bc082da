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

#ifndef BUDDI_TRISTATE_HPP_
#define BUDDI_TRISTATE_HPP_

#include <stdexcept>
#include <utility>
#include <variant>

namespace buddi {

// "Does not exist": a global assertion, only made when the key's owner is
// known and reachable.
struct Dne {
  friend bool operator==(Dne, Dne) { return true; }
};
// "I don't know": a local assertion.
struct Idk {
  friend bool operator==(Idk, Idk) { return true; }
};

inline constexpr Dne kDne{};
inline constexpr Idk kIdk{};

// Nil split in two: a lookup result is a value, DNE or IDK.
template <typename T>
class Tristate {
 public:
  Tristate(T v) : state_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Tristate(Dne) : state_(Dne{}) {}          // NOLINT(google-explicit-constructor)
  Tristate(Idk) : state_(Idk{}) {}          // NOLINT(google-explicit-constructor)

  bool has_value() const { return std::holds_alternative<T>(state_); }
  bool is_dne() const { return std::holds_alternative<Dne>(state_); }
  bool is_idk() const { return std::holds_alternative<Idk>(state_); }

  const T& value() const {
    if (!has_value()) throw std::logic_error(is_dne() ? "tristate is DNE" : "tristate is IDK");
    return std::get<T>(state_);
  }

  const char* label() const { return has_value() ? "value" : is_dne() ? "DNE" : "IDK"; }

  friend bool operator==(const Tristate&, const Tristate&) = default;

 private:
  std::variant<T, Dne, Idk> state_;
};

}  // namespace buddi

#endif  // BUDDI_TRISTATE_HPP_
