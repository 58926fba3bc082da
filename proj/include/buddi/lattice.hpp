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

// Merge lattices: values with a least element and an associative,
// commutative, idempotent merge. Every type here exposes
//
//   bool join(const L& other);   // in-place merge, returns true on growth
//
// and the free functions merge() / leq() derive the pure forms from it.

#ifndef BUDDI_LATTICE_HPP_
#define BUDDI_LATTICE_HPP_

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace buddi::lattice {

class LatticeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when merging values of two different lattice kinds.
class TypeMismatch : public LatticeError {
 public:
  using LatticeError::LatticeError;
};

class ThresholdMismatch : public LatticeError {
 public:
  using LatticeError::LatticeError;
};

// Raised when a custom lattice is declared with a merge that fails
// idempotence (sum being the canonical example).
class NonIdempotentMerge : public LatticeError {
 public:
  using LatticeError::LatticeError;
};

template <typename L>
concept MergeLattice = requires(L a, const L& b) {
                         { a.join(b) } -> std::same_as<bool>;
                       } && std::copy_constructible<L> && std::equality_comparable<L>;

template <MergeLattice L>
[[nodiscard]] L merge(L a, const L& b) {
  a.join(b);
  return a;
}

// a <= b iff merge(a, b) == b.
template <MergeLattice L>
[[nodiscard]] bool leq(const L& a, const L& b) {
  return merge(a, b) == b;
}

class LMax {
 public:
  using value_type = std::int64_t;

  LMax() = default;
  explicit LMax(value_type v) : value_(v) {}

  static LMax bottom() { return LMax(); }

  bool join(const LMax& other) {
    if (other.value_ > value_) {
      value_ = other.value_;
      return true;
    }
    return false;
  }

  value_type value() const { return value_; }

  friend bool operator==(const LMax&, const LMax&) = default;

 private:
  value_type value_ = std::numeric_limits<value_type>::min();
};

template <typename T>
class LSet {
 public:
  using element_type = T;

  LSet() = default;
  LSet(std::initializer_list<T> init) : elems_(init) {}
  explicit LSet(std::set<T> elems) : elems_(std::move(elems)) {}

  static LSet bottom() { return LSet(); }

  bool insert(const T& e) { return elems_.insert(e).second; }

  bool join(const LSet& other) {
    const auto before = elems_.size();
    elems_.insert(other.elems_.begin(), other.elems_.end());
    return elems_.size() != before;
  }

  bool contains(const T& e) const { return elems_.contains(e); }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::set<T>& elems() const { return elems_; }

  friend bool operator==(const LSet&, const LSet&) = default;

 private:
  std::set<T> elems_;
};

// Pointwise map lattice. A key absent from one side behaves as the value
// lattice's bottom, so the merged value is copied over unchanged.
template <typename K, MergeLattice V>
class LMap {
 public:
  using key_type = K;
  using mapped_type = V;

  LMap() = default;

  static LMap bottom() { return LMap(); }

  bool merge_at(const K& key, const V& value) {
    auto [it, inserted] = entries_.try_emplace(key, value);
    if (inserted) return true;
    return it->second.join(value);
  }

  bool join(const LMap& other) {
    bool changed = false;
    for (const auto& [k, v] : other.entries_) changed |= merge_at(k, v);
    return changed;
  }

  const V* find(const K& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<K, V>& entries() const { return entries_; }

  friend bool operator==(const LMap&, const LMap&) = default;

 private:
  std::map<K, V> entries_;
};

// Set lattice with a saturation guard: the union is taken only while the
// receiving (left) operand holds fewer than `threshold` elements. The guard
// makes the merge asymmetric, so only the predicate size() >= threshold is
// independent of merge order. Below the threshold the set is exact.
template <typename T>
class BuddyLSet {
 public:
  using element_type = T;

  explicit BuddyLSet(std::size_t threshold) : threshold_(threshold) {
    if (threshold == 0) throw LatticeError("BuddyLSet threshold must be positive");
  }
  BuddyLSet(std::size_t threshold, std::set<T> elems)
      : BuddyLSet(threshold) {
    elems_ = std::move(elems);
  }

  static BuddyLSet bottom(std::size_t threshold) { return BuddyLSet(threshold); }

  bool join(const BuddyLSet& other) {
    if (other.threshold_ != threshold_) {
      throw ThresholdMismatch("BuddyLSet threshold mismatch: " +
                              std::to_string(threshold_) + " vs " +
                              std::to_string(other.threshold_));
    }
    if (elems_.size() >= threshold_) return false;
    const auto before = elems_.size();
    elems_.insert(other.elems_.begin(), other.elems_.end());
    return elems_.size() != before;
  }

  bool saturated() const { return elems_.size() >= threshold_; }
  std::size_t threshold() const { return threshold_; }
  std::size_t size() const { return elems_.size(); }
  const std::set<T>& elems() const { return elems_; }

  friend bool operator==(const BuddyLSet&, const BuddyLSet&) = default;

 private:
  std::size_t threshold_;
  std::set<T> elems_;
};

// A user-declared lattice over T. The declaration is checked against a set of
// sample values: the merge must be idempotent, commutative and associative on
// the samples and `bottom` must be its identity.
template <typename T>
class CustomLatticeType : public std::enable_shared_from_this<CustomLatticeType<T>> {
 public:
  using MergeFn = std::function<T(const T&, const T&)>;

  class Value {
   public:
    bool join(const Value& other) {
      if (type_ != other.type_) {
        throw TypeMismatch("merging values of two different custom lattices");
      }
      T merged = type_->merge_(value_, other.value_);
      if (merged == value_) return false;
      value_ = std::move(merged);
      return true;
    }

    const T& get() const { return value_; }

    friend bool operator==(const Value& a, const Value& b) {
      return a.type_ == b.type_ && a.value_ == b.value_;
    }

   private:
    friend class CustomLatticeType;
    Value(std::shared_ptr<const CustomLatticeType> type, T v)
        : type_(std::move(type)), value_(std::move(v)) {}

    std::shared_ptr<const CustomLatticeType> type_;
    T value_;
  };

  static std::shared_ptr<const CustomLatticeType> declare(std::string name, T bottom,
                                                          MergeFn merge,
                                                          const std::vector<T>& samples) {
    for (const T& a : samples) {
      if (!(merge(a, a) == a)) {
        throw NonIdempotentMerge("lattice '" + name + "': merge is not idempotent");
      }
      if (!(merge(bottom, a) == a)) {
        throw LatticeError("lattice '" + name + "': bottom is not a merge identity");
      }
      for (const T& b : samples) {
        if (!(merge(a, b) == merge(b, a))) {
          throw LatticeError("lattice '" + name + "': merge is not commutative");
        }
        for (const T& c : samples) {
          if (!(merge(merge(a, b), c) == merge(a, merge(b, c)))) {
            throw LatticeError("lattice '" + name + "': merge is not associative");
          }
        }
      }
    }
    return std::shared_ptr<const CustomLatticeType>(
        new CustomLatticeType(std::move(name), std::move(bottom), std::move(merge)));
  }

  Value make(T v) const { return Value(this->shared_from_this(), std::move(v)); }
  Value bottom() const { return make(bottom_); }
  const std::string& name() const { return name_; }

 private:
  CustomLatticeType(std::string name, T bottom, MergeFn merge)
      : name_(std::move(name)), bottom_(std::move(bottom)), merge_(std::move(merge)) {}

  std::string name_;
  T bottom_;
  MergeFn merge_;
};

}  // namespace buddi::lattice

#endif  // BUDDI_LATTICE_HPP_
