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

// Random lattice values and a join-law checker. Elements come from small
// domains so that independently drawn values overlap.

#ifndef BUDDI_LATTICE_GEN_HPP_
#define BUDDI_LATTICE_GEN_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "buddi/crdt.hpp"
#include "buddi/lattice.hpp"
#include "buddi/random.hpp"

namespace buddi::lattice {

inline int small_int(Rng& rng) { return static_cast<int>(rng.below(12)); }

inline Timestamp small_ts(Rng& rng) {
  return {rng.below(6), static_cast<std::uint32_t>(rng.below(3))};
}

inline LMax gen_lmax(Rng& rng) { return LMax(static_cast<std::int64_t>(rng.below(40)) - 20); }

inline LSet<int> gen_lset(Rng& rng) {
  LSet<int> s;
  for (auto n = rng.below(6); n > 0; --n) s.insert(small_int(rng));
  return s;
}

inline LMap<int, LMax> gen_lmap(Rng& rng) {
  LMap<int, LMax> m;
  for (auto n = rng.below(5); n > 0; --n) m.merge_at(static_cast<int>(rng.below(5)), gen_lmax(rng));
  return m;
}

inline GSet<int> gen_gset(Rng& rng) {
  GSet<int> s;
  for (auto n = rng.below(6); n > 0; --n) s.insert(small_int(rng));
  return s;
}

inline TwoPSet<int> gen_twopset(Rng& rng) {
  TwoPSet<int> s;
  for (auto n = rng.below(6); n > 0; --n) s.add(small_int(rng));
  for (auto n = rng.below(3); n > 0; --n) s.remove(small_int(rng));
  return s;
}

inline LWWSet<int> gen_lwwset(Rng& rng) {
  LWWSet<int> s;
  for (auto n = rng.below(5); n > 0; --n) s.add(small_int(rng), small_ts(rng));
  for (auto n = rng.below(3); n > 0; --n) s.remove(small_int(rng), small_ts(rng));
  return s;
}

inline VersionVector gen_vv(Rng& rng) {
  VersionVector v;
  for (std::uint32_t w = 0; w < 3; ++w) {
    for (auto n = rng.below(3); n > 0; --n) v = v.incremented(w);
  }
  return v;
}

inline MVSet<int> gen_mvset(Rng& rng) {
  MVSet<int> s;
  for (auto n = rng.below(5); n > 0; --n) s.add(static_cast<int>(rng.below(5)), gen_vv(rng));
  for (auto n = rng.below(2); n > 0; --n) s.remove(static_cast<int>(rng.below(5)), gen_vv(rng));
  return s;
}

inline TrueSet gen_trueset(Rng& rng) {
  TrueSet s;
  for (auto n = rng.below(5); n > 0; --n) {
    s.insert(rng.below(4), rng.below(6), std::string(1, static_cast<char>('a' + rng.below(3))), small_ts(rng));
  }
  for (auto n = rng.below(3); n > 0; --n) s.erase(rng.below(4), small_ts(rng));
  return s;
}

struct LawReport {
  std::string type;
  std::size_t cases = 0;
  std::vector<std::string> failures;  // "law #case"
  bool ok() const { return failures.empty(); }
};

// Idempotence, commutativity, associativity, bottom identity, and that a
// merge is an upper bound of both inputs.
template <MergeLattice L>
LawReport check_laws(std::string type, const std::function<L(Rng&)>& gen, const L& bottom, std::size_t cases,
                     std::uint64_t seed) {
  LawReport rep{std::move(type), cases, {}};
  Rng rng(seed);
  auto fail = [&](const char* law, std::size_t i) { rep.failures.push_back(std::string(law) + " #" + std::to_string(i)); };
  for (std::size_t i = 0; i < cases; ++i) {
    const L a = gen(rng), b = gen(rng), c = gen(rng);
    if (!(merge(a, a) == a)) fail("idempotence", i);
    if (!(merge(a, b) == merge(b, a))) fail("commutativity", i);
    if (!(merge(merge(a, b), c) == merge(a, merge(b, c)))) fail("associativity", i);
    if (!(merge(bottom, a) == a) || !(merge(a, bottom) == a)) fail("identity", i);
    const L ab = merge(a, b);
    if (!leq(a, ab) || !leq(b, ab)) fail("inflation", i);
    L grown = a;
    const bool grew = grown.join(b);
    if (grew == (grown == a)) fail("join-report", i);
  }
  return rep;
}

// Law reports for every built-in lattice type.
inline std::vector<LawReport> check_all_laws(std::size_t cases, std::uint64_t seed) {
  std::vector<LawReport> out;
  out.push_back(check_laws<LMax>("LMax", gen_lmax, LMax::bottom(), cases, seed));
  out.push_back(check_laws<LSet<int>>("LSet", gen_lset, {}, cases, seed + 1));
  out.push_back(check_laws<LMap<int, LMax>>("LMap", gen_lmap, {}, cases, seed + 2));
  out.push_back(check_laws<GSet<int>>("GSet", gen_gset, {}, cases, seed + 3));
  out.push_back(check_laws<TwoPSet<int>>("TwoPSet", gen_twopset, {}, cases, seed + 4));
  out.push_back(check_laws<LWWSet<int>>("LWWSet", gen_lwwset, {}, cases, seed + 5));
  out.push_back(check_laws<MVSet<int>>("MVSet", gen_mvset, {}, cases, seed + 6));
  out.push_back(check_laws<TrueSet>("TrueSet", gen_trueset, {}, cases, seed + 7));
  return out;
}

}  // namespace buddi::lattice

#endif  // BUDDI_LATTICE_GEN_HPP_
