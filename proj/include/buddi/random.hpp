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

#ifndef BUDDI_RANDOM_HPP_
#define BUDDI_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace buddi {

// Seeded PRNG. The bounded draws are computed from raw mt19937_64 output so a
// seed reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return p > 0.0 && unit() < p; }

 private:
  std::mt19937_64 engine_;
};

class IdCollision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Issues 64-bit identifiers (token or use ids) from a seeded PRNG and checks
// every issued id for collisions.
class IdSource {
 public:
  explicit IdSource(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t fresh() {
    const std::uint64_t id = rng_.next();
    if (!issued_.insert(id).second) {
      throw IdCollision("64-bit id collision");
    }
    return id;
  }

  std::size_t issued() const { return issued_.size(); }

 private:
  Rng rng_;
  std::unordered_set<std::uint64_t> issued_;
};

}  // namespace buddi

#endif  // BUDDI_RANDOM_HPP_
