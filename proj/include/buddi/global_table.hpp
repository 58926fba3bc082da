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

// Global tables: named CRDT collections sharded across workers under a
// partition plan, plus the planning queries that decide whether a grouped
// aggregate needs communication.

#ifndef BUDDI_GLOBAL_TABLE_HPP_
#define BUDDI_GLOBAL_TABLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "buddi/crdt.hpp"
#include "buddi/tristate.hpp"
#include "buddi/types.hpp"

namespace buddi::tables {

using Value = std::variant<std::int64_t, std::string>;
using Tuple = std::vector<Value>;

std::uint64_t hash_value(const Value& v);
std::string to_string(const Value& v);
std::string to_string(const Tuple& t);

enum class CrdtKind { kGSet, kTwoPSet, kLWWSet, kMVSet, kTrueSet };

const char* to_string(CrdtKind kind);

using CrdtValue = std::variant<lattice::GSet<Tuple>, lattice::TwoPSet<Tuple>, lattice::LWWSet<Tuple>,
                               lattice::MVSet<Tuple>, lattice::TrueSet>;

CrdtValue bottom_of(CrdtKind kind);
CrdtKind kind_of(const CrdtValue& v);

// In-place merge. Throws lattice::TypeMismatch when the kinds differ.
bool join(CrdtValue& into, const CrdtValue& from);
CrdtValue merge(CrdtValue a, const CrdtValue& b);

// Tuples currently readable from a shard. True-Set rows read as
// (token, payload).
std::vector<Tuple> live_tuples(const CrdtValue& v);
std::size_t tuple_count(const CrdtValue& v);

class TableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Strategy { kHash, kRange, kRoundRobin };

struct PartitionPlan {
  Strategy strategy = Strategy::kRoundRobin;
  std::string column;             // empty for round robin
  std::vector<Value> boundaries;  // range only: workers.size() - 1 ascending split points
  std::vector<WorkerId> workers;

  static PartitionPlan hash(std::string column, std::vector<WorkerId> workers);
  static PartitionPlan range(std::string column, std::vector<Value> boundaries,
                             std::vector<WorkerId> workers);
  static PartitionPlan round_robin(std::vector<WorkerId> workers);

  // Owner of a key value under hash or range placement.
  WorkerId owner_of(const Value& key) const;
  bool keyed_on(const std::string& col) const;

  friend bool operator==(const PartitionPlan&, const PartitionPlan&) = default;
};

class GlobalTable {
 public:
  GlobalTable(std::string name, CrdtKind kind, std::vector<std::string> schema, PartitionPlan plan);

  const std::string& name() const { return name_; }
  CrdtKind kind() const { return kind_; }
  const std::vector<std::string>& schema() const { return schema_; }
  const PartitionPlan& plan() const { return plan_; }
  std::size_t column_index(const std::string& column) const;

  // Worker that stores a newly inserted tuple. Round robin advances the
  // arrival counter.
  WorkerId route(const Tuple& t);

  bool merge_into(WorkerId w, const CrdtValue& delta);
  // Routes and merges. For G-Set and 2P-Set (pos) tables only.
  WorkerId insert(const Tuple& t);

  const CrdtValue& shard(WorkerId w) const;
  const std::map<WorkerId, CrdtValue>& shards() const { return shards_; }

  // Logical contents: merge of every shard.
  CrdtValue merged() const;

  // True while every stored tuple was placed by the current plan. A plan
  // switch over non-empty shards leaves tuples where they were, so key
  // locality can no longer be asserted.
  bool placement_consistent() const { return placement_consistent_; }

 private:
  friend GlobalTable switch_partitioning(const GlobalTable& table, PartitionPlan plan);

  std::string name_;
  CrdtKind kind_;
  std::vector<std::string> schema_;
  PartitionPlan plan_;
  std::map<WorkerId, CrdtValue> shards_;
  std::uint64_t arrivals_ = 0;
  bool placement_consistent_ = true;
};

struct QueryPlan {
  bool coordination_free = false;
  PartitionPlan plan;
};

QueryPlan plan_query(const GlobalTable& table, const std::string& group_by);

inline constexpr double kDefaultSkewFactor = 2.0;

// max shard tuple count > factor * mean shard tuple count.
bool detect_skew(const GlobalTable& table, double factor = kDefaultSkewFactor);

// Replaces the plan. Existing tuples stay on their shards.
GlobalTable switch_partitioning(const GlobalTable& table, PartitionPlan plan);

// Tuples whose key_column equals key. Returns DNE only when a miss is a
// global fact: the plan places keys by this column, placement is consistent,
// the network is healthy and the owner's shard was consulted.
Tristate<std::vector<Tuple>> lookup(const GlobalTable& table, const std::string& key_column,
                                    const Value& key, WorkerId at_worker, const NetworkCondition& net);

// Per-shard GROUP BY count over a column. Keys are unique across shards iff
// the table is placed by that column.
std::map<WorkerId, std::map<Value, std::uint64_t>> group_count_per_shard(const GlobalTable& table,
                                                                        const std::string& column);

}  // namespace buddi::tables

#endif  // BUDDI_GLOBAL_TABLE_HPP_
