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

#ifndef BUDDI_CRDT_HPP_
#define BUDDI_CRDT_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "buddi/lattice.hpp"
#include "buddi/random.hpp"

namespace buddi::lattice {

// Grow-only set.
template <typename T>
class GSet {
 public:
  using element_type = T;

  GSet() = default;
  GSet(std::initializer_list<T> init) : elems_(init) {}
  explicit GSet(std::set<T> elems) : elems_(std::move(elems)) {}

  static GSet bottom() { return GSet(); }

  bool insert(const T& e) { return elems_.insert(e).second; }

  bool join(const GSet& other) {
    const auto before = elems_.size();
    elems_.insert(other.elems_.begin(), other.elems_.end());
    return elems_.size() != before;
  }

  bool contains(const T& e) const { return elems_.contains(e); }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::set<T>& elems() const { return elems_; }

  friend bool operator==(const GSet&, const GSet&) = default;

 private:
  std::set<T> elems_;
};

// Two-phase set: a pos G-Set and a neg G-Set of tombstones. Once an element
// reaches neg it never reads as a member again.
template <typename T>
class TwoPSet {
 public:
  using element_type = T;

  TwoPSet() = default;
  TwoPSet(GSet<T> pos, GSet<T> neg) : pos_(std::move(pos)), neg_(std::move(neg)) {}

  static TwoPSet bottom() { return TwoPSet(); }

  bool add(const T& e) { return pos_.insert(e); }
  bool remove(const T& e) { return neg_.insert(e); }

  bool join(const TwoPSet& other) {
    const bool a = pos_.join(other.pos_);
    const bool b = neg_.join(other.neg_);
    return a || b;
  }

  bool contains(const T& e) const { return pos_.contains(e) && !neg_.contains(e); }

  const GSet<T>& pos() const { return pos_; }
  const GSet<T>& neg() const { return neg_; }

  friend bool operator==(const TwoPSet&, const TwoPSet&) = default;

 private:
  GSet<T> pos_;
  GSet<T> neg_;
};

// pos minus neg in one ordered pass over both sets.
template <typename T>
std::set<T> twopset_read(const TwoPSet<T>& s) {
  std::set<T> out;
  std::set_difference(s.pos().elems().begin(), s.pos().elems().end(),
                      s.neg().elems().begin(), s.neg().elems().end(),
                      std::inserter(out, out.end()));
  return out;
}

// Logical timestamp. The worker id breaks ties, so two distinct writers never
// produce equal timestamps.
struct Timestamp {
  std::uint64_t time = 0;
  std::uint32_t worker = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Per-worker monotone Lamport clock.
class LogicalClock {
 public:
  explicit LogicalClock(std::uint32_t worker) : worker_(worker) {}

  Timestamp next() { return Timestamp{++time_, worker_}; }

  // Advance past a timestamp observed from another replica.
  void observe(const Timestamp& ts) { time_ = std::max(time_, ts.time); }

  std::uint32_t worker() const { return worker_; }

 private:
  std::uint32_t worker_;
  std::uint64_t time_ = 0;
};

// Last-writer-wins set: an element is a member iff its newest add is newer
// than its newest remove.
template <typename T>
class LWWSet {
 public:
  using element_type = T;
  using Entry = std::pair<T, Timestamp>;

  static LWWSet bottom() { return LWWSet(); }

  bool add(const T& e, Timestamp ts) { return pos_.insert({e, ts}).second; }
  bool remove(const T& e, Timestamp ts) { return neg_.insert({e, ts}).second; }

  bool join(const LWWSet& other) {
    const auto before = pos_.size() + neg_.size();
    pos_.insert(other.pos_.begin(), other.pos_.end());
    neg_.insert(other.neg_.begin(), other.neg_.end());
    return pos_.size() + neg_.size() != before;
  }

  bool contains(const T& e) const {
    const auto add = latest(pos_, e);
    if (!add) return false;
    const auto rem = latest(neg_, e);
    return !rem || *add > *rem;
  }

  std::set<T> elements() const {
    std::set<T> out;
    for (const auto& [e, ts] : pos_) {
      if (contains(e)) out.insert(e);
    }
    return out;
  }

  const std::set<Entry>& pos() const { return pos_; }
  const std::set<Entry>& neg() const { return neg_; }

  friend bool operator==(const LWWSet&, const LWWSet&) = default;

 private:
  static std::optional<Timestamp> latest(const std::set<Entry>& s, const T& e) {
    // Entries are ordered by (element, timestamp); the newest for e is the
    // last one before the first entry of the next element.
    auto it = s.lower_bound({e, Timestamp{0, 0}});
    std::optional<Timestamp> best;
    for (; it != s.end() && it->first == e; ++it) best = it->second;
    return best;
  }

  std::set<Entry> pos_;
  std::set<Entry> neg_;
};

enum class Causality { kEqual, kBefore, kAfter, kConcurrent };

class VersionVector {
 public:
  VersionVector() = default;
  VersionVector(std::initializer_list<std::pair<const std::uint32_t, std::uint64_t>> init)
      : clocks_(init) {
    std::erase_if(clocks_, [](const auto& kv) { return kv.second == 0; });
  }

  std::uint64_t at(std::uint32_t worker) const {
    auto it = clocks_.find(worker);
    return it == clocks_.end() ? 0 : it->second;
  }

  VersionVector incremented(std::uint32_t worker) const {
    VersionVector v = *this;
    ++v.clocks_[worker];
    return v;
  }

  // Pointwise max.
  void absorb(const VersionVector& other) {
    for (const auto& [w, c] : other.clocks_) {
      auto& mine = clocks_[w];
      mine = std::max(mine, c);
    }
  }

  Causality compare(const VersionVector& other) const {
    bool less = false;
    bool greater = false;
    auto a = clocks_.begin();
    auto b = other.clocks_.begin();
    while (a != clocks_.end() || b != other.clocks_.end()) {
      if (b == other.clocks_.end() || (a != clocks_.end() && a->first < b->first)) {
        greater = true;
        ++a;
      } else if (a == clocks_.end() || b->first < a->first) {
        less = true;
        ++b;
      } else {
        if (a->second < b->second) less = true;
        if (a->second > b->second) greater = true;
        ++a;
        ++b;
      }
    }
    if (less && greater) return Causality::kConcurrent;
    if (less) return Causality::kBefore;
    if (greater) return Causality::kAfter;
    return Causality::kEqual;
  }

  const std::map<std::uint32_t, std::uint64_t>& clocks() const { return clocks_; }

  friend auto operator<=>(const VersionVector&, const VersionVector&) = default;

 private:
  std::map<std::uint32_t, std::uint64_t> clocks_;
};

// Multi-value set: writes carry version vectors and concurrent writes are all
// retained. A read reports every maximal version of an element, including
// maximal tombstones, instead of picking a winner.
template <typename T>
class MVSet {
 public:
  using element_type = T;
  using Entry = std::pair<T, VersionVector>;

  struct Version {
    VersionVector clock;
    bool removed = false;
    friend bool operator==(const Version&, const Version&) = default;
  };

  static MVSet bottom() { return MVSet(); }

  bool add(const T& e, VersionVector v) { return pos_.insert({e, std::move(v)}).second; }
  bool remove(const T& e, VersionVector v) { return neg_.insert({e, std::move(v)}).second; }

  bool join(const MVSet& other) {
    const auto before = pos_.size() + neg_.size();
    pos_.insert(other.pos_.begin(), other.pos_.end());
    neg_.insert(other.neg_.begin(), other.neg_.end());
    return pos_.size() + neg_.size() != before;
  }

  // Merged clock of every version of e seen so far. A writer that wants its
  // update to supersede them writes context(e).incremented(self).
  VersionVector context(const T& e) const {
    VersionVector ctx;
    for (const auto* s : {&pos_, &neg_}) {
      for (auto it = s->lower_bound({e, VersionVector{}}); it != s->end() && it->first == e; ++it) {
        ctx.absorb(it->second);
      }
    }
    return ctx;
  }

  // Maximal versions per element. A tombstone with the same clock as a write
  // shadows that write.
  std::map<T, std::vector<Version>> read() const {
    std::map<T, std::vector<Version>> all;
    for (const auto& [e, v] : neg_) all[e].push_back({v, true});
    for (const auto& [e, v] : pos_) {
      if (!neg_.contains({e, v})) all[e].push_back({v, false});
    }
    std::map<T, std::vector<Version>> out;
    for (auto& [e, versions] : all) {
      std::vector<Version> maximal;
      for (const auto& cand : versions) {
        const bool dominated = std::any_of(versions.begin(), versions.end(), [&](const Version& o) {
          return cand.clock.compare(o.clock) == Causality::kBefore;
        });
        if (!dominated) maximal.push_back(cand);
      }
      std::sort(maximal.begin(), maximal.end(), [](const Version& a, const Version& b) {
        return std::tie(a.clock, a.removed) < std::tie(b.clock, b.removed);
      });
      out.emplace(e, std::move(maximal));
    }
    return out;
  }

  // Elements with at least one maximal live version.
  std::set<T> elements() const {
    std::set<T> out;
    for (const auto& [e, versions] : read()) {
      if (std::any_of(versions.begin(), versions.end(), [](const Version& v) { return !v.removed; })) {
        out.insert(e);
      }
    }
    return out;
  }

  const std::set<Entry>& pos() const { return pos_; }
  const std::set<Entry>& neg() const { return neg_; }

  friend bool operator==(const MVSet&, const MVSet&) = default;

 private:
  std::set<Entry> pos_;
  std::set<Entry> neg_;
};

// Two-phase set with full set semantics. Every row carries the token id of
// the data unit, a use id for this particular write, and a timestamp. A
// token is live iff its newest pos timestamp exceeds its newest tombstone,
// which gives add, remove, add-after-remove and update without reading
// remote state.
class TrueSet {
 public:
  struct Row {
    std::uint64_t token = 0;
    std::uint64_t use = 0;
    Timestamp ts;
    std::string payload;
    friend auto operator<=>(const Row& a, const Row& b) {
      return std::tie(a.token, a.ts, a.use, a.payload) <=> std::tie(b.token, b.ts, b.use, b.payload);
    }
    friend bool operator==(const Row&, const Row&) = default;
  };
  struct Tombstone {
    std::uint64_t token = 0;
    Timestamp ts;
    friend auto operator<=>(const Tombstone&, const Tombstone&) = default;
  };

  static TrueSet bottom() { return TrueSet(); }

  bool insert(std::uint64_t token, std::uint64_t use, std::string payload, Timestamp ts) {
    return pos_.insert(Row{token, use, ts, std::move(payload)}).second;
  }
  bool erase(std::uint64_t token, Timestamp ts) { return neg_.insert(Tombstone{token, ts}).second; }

  bool join(const TrueSet& other) {
    const auto before = pos_.size() + neg_.size();
    pos_.insert(other.pos_.begin(), other.pos_.end());
    neg_.insert(other.neg_.begin(), other.neg_.end());
    return pos_.size() + neg_.size() != before;
  }

  // Newest pos row for the token, if the token is live.
  const Row* latest_live(std::uint64_t token) const {
    const Row* newest = nullptr;
    for (auto it = pos_.lower_bound(Row{token, 0, {}, {}}); it != pos_.end() && it->token == token; ++it) {
      newest = &*it;
    }
    if (newest == nullptr) return nullptr;
    auto t = neg_.lower_bound(Tombstone{token, {}});
    std::optional<Timestamp> tomb;
    for (; t != neg_.end() && t->token == token; ++t) tomb = t->ts;
    if (tomb && !(newest->ts > *tomb)) return nullptr;
    return newest;
  }

  bool live(std::uint64_t token) const { return latest_live(token) != nullptr; }

  std::map<std::uint64_t, std::string> read() const {
    std::map<std::uint64_t, std::string> out;
    for (auto it = pos_.begin(); it != pos_.end();) {
      const auto token = it->token;
      if (const Row* r = latest_live(token)) out.emplace(token, r->payload);
      while (it != pos_.end() && it->token == token) ++it;
    }
    return out;
  }

  const std::set<Row>& pos() const { return pos_; }
  const std::set<Tombstone>& neg() const { return neg_; }

  friend bool operator==(const TrueSet&, const TrueSet&) = default;

 private:
  std::set<Row> pos_;
  std::set<Tombstone> neg_;
};

// Zero-knowledge insert: stamps a fresh use id and never reads remote state.
inline TrueSet trueset_insert(TrueSet s, std::uint64_t token, std::string payload, Timestamp ts,
                              IdSource& uses) {
  s.insert(token, uses.fresh(), std::move(payload), ts);
  return s;
}

// Zero-knowledge delete: a tombstone that wins iff ts is newer than every
// write of the token.
inline TrueSet trueset_delete_zk(TrueSet s, std::uint64_t token, Timestamp ts) {
  s.erase(token, ts);
  return s;
}

inline std::map<std::uint64_t, std::string> trueset_read(const TrueSet& s) { return s.read(); }

}  // namespace buddi::lattice

#endif  // BUDDI_CRDT_HPP_
