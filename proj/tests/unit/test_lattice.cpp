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

#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "buddi/any_lattice.hpp"
#include "buddi/lattice.hpp"
#include "buddi/lattice_gen.hpp"

using namespace buddi;
using namespace buddi::lattice;

TEST_CASE("lmax keeps the larger value") {
  CHECK(merge(LMax(5), LMax(3)) == LMax(5));
  CHECK(merge(LMax(3), LMax(5)) == LMax(5));
  CHECK(merge(LMax::bottom(), LMax(-7)) == LMax(-7));
  LMax a(4);
  CHECK_FALSE(a.join(LMax(4)));
  CHECK(a.join(LMax(9)));
}

TEST_CASE("lset merge is union") {
  CHECK(merge(LSet<int>{1, 2}, LSet<int>{2, 3}) == LSet<int>{1, 2, 3});
  CHECK(leq(LSet<int>{1}, LSet<int>{1, 2}));
  CHECK_FALSE(leq(LSet<int>{3}, LSet<int>{1, 2}));
}

TEST_CASE("lmap merges pointwise") {
  LMap<std::string, LMax> a, b;
  a.merge_at("x", LMax(1));
  a.merge_at("y", LMax(7));
  b.merge_at("x", LMax(4));
  b.merge_at("z", LMax(2));
  const auto m = merge(a, b);
  REQUIRE(m.size() == 3);
  CHECK(*m.find("x") == LMax(4));
  CHECK(*m.find("y") == LMax(7));
  CHECK(*m.find("z") == LMax(2));
  CHECK(m.find("w") == nullptr);
}

TEST_CASE("buddy lset unions only below the threshold") {
  BuddyLSet<int> a(3, {1});
  CHECK(a.join(BuddyLSet<int>(3, {2})));
  CHECK(a.elems() == std::set<int>{1, 2});

  BuddyLSet<int> full(3, {1, 2, 3});
  CHECK_FALSE(full.join(BuddyLSet<int>(3, {4, 5})));
  CHECK(full.size() == 3);
  CHECK(full.saturated());

  CHECK(merge(a, BuddyLSet<int>::bottom(3)) == a);
}

TEST_CASE("buddy lset rejects bad thresholds") {
  CHECK_THROWS_AS(BuddyLSet<int>(0), LatticeError);
  BuddyLSet<int> a(3);
  CHECK_THROWS_AS(a.join(BuddyLSet<int>(4)), ThresholdMismatch);
}

TEST_CASE("buddy lset: predicate is order invariant, exact below threshold") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t t = 1 + rng.below(5);
    std::vector<BuddyLSet<int>> parts;
    std::set<int> all;
    for (auto n = 1 + rng.below(6); n > 0; --n) {
      std::set<int> s;
      for (auto j = rng.below(3); j > 0; --j) s.insert(static_cast<int>(rng.below(10)));
      all.insert(s.begin(), s.end());
      parts.emplace_back(t, s);
    }
    std::vector<std::size_t> order(parts.size());
    std::iota(order.begin(), order.end(), 0);
    for (int shuffle = 0; shuffle < 4; ++shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      BuddyLSet<int> acc(t);
      for (auto i : order) acc.join(parts[i]);
      CHECK(acc.saturated() == (all.size() >= t));
      if (all.size() < t) CHECK(acc.elems() == all);
    }
  }
}

TEST_CASE("custom lattice declaration checks the laws") {
  auto max_merge = [](const int& a, const int& b) { return std::max(a, b); };
  auto type = CustomLatticeType<int>::declare("max", 0, max_merge, {0, 1, 5, 9});
  auto v = type->make(3);
  CHECK(v.join(type->make(8)));
  CHECK(v.get() == 8);
  CHECK_FALSE(v.join(type->make(2)));

  auto sum = [](const int& a, const int& b) { return a + b; };
  CHECK_THROWS_AS(CustomLatticeType<int>::declare("sum", 0, sum, {0, 1, 2}), NonIdempotentMerge);

  auto other = CustomLatticeType<int>::declare("max2", 0, max_merge, {0, 1});
  auto w = other->make(1);
  CHECK_THROWS_AS(w.join(type->make(1)), TypeMismatch);
}

TEST_CASE("any lattice refuses mixed types") {
  runtime::AnyLattice a(LMax(1));
  CHECK_THROWS_AS(a.join(runtime::AnyLattice(LSet<int>{1})), TypeMismatch);
  CHECK(a.join(runtime::AnyLattice(LMax(4))));
  CHECK(a.as<LMax>() == LMax(4));
  CHECK_THROWS_AS((void)a.as<LSet<int>>(), TypeMismatch);
}

TEST_CASE("join laws hold for every lattice type") {
  for (const auto& rep : check_all_laws(1000, 2026)) {
    CAPTURE(rep.type);
    CHECK(rep.cases == 1000);
    CHECK(rep.failures.empty());
  }
}

namespace {
// Keeps the left value: idempotent but not commutative.
struct Left {
  int v = 0;
  bool join(const Left&) { return false; }
  friend bool operator==(const Left&, const Left&) = default;
};
}  // namespace

TEST_CASE("law checker catches a broken lattice") {
  auto gen = [](Rng& r) { return Left{static_cast<int>(r.below(5))}; };
  const auto rep = check_laws<Left>("Left", std::function<Left(Rng&)>(gen), Left{}, 100, 1);
  CHECK_FALSE(rep.ok());
}
