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

#include "buddi/global_table.hpp"

#include <algorithm>
#include <numeric>

#include "buddi/hash.hpp"

namespace buddi::tables {

std::uint64_t hash_value(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return hash_bytes(*s);
  return mix64(static_cast<std::uint64_t>(std::get<std::int64_t>(v)));
}

std::string to_string(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::to_string(std::get<std::int64_t>(v));
}

std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += to_string(t[i]);
  }
  return out + ")";
}

const char* to_string(CrdtKind kind) {
  switch (kind) {
    case CrdtKind::kGSet: return "GSet";
    case CrdtKind::kTwoPSet: return "TwoPSet";
    case CrdtKind::kLWWSet: return "LWWSet";
    case CrdtKind::kMVSet: return "MVSet";
    case CrdtKind::kTrueSet: return "TrueSet";
  }
  return "?";
}

CrdtValue bottom_of(CrdtKind kind) {
  switch (kind) {
    case CrdtKind::kGSet: return lattice::GSet<Tuple>{};
    case CrdtKind::kTwoPSet: return lattice::TwoPSet<Tuple>{};
    case CrdtKind::kLWWSet: return lattice::LWWSet<Tuple>{};
    case CrdtKind::kMVSet: return lattice::MVSet<Tuple>{};
    case CrdtKind::kTrueSet: return lattice::TrueSet{};
  }
  throw TableError("unknown CRDT kind");
}

CrdtKind kind_of(const CrdtValue& v) { return static_cast<CrdtKind>(v.index()); }

bool join(CrdtValue& into, const CrdtValue& from) {
  if (into.index() != from.index()) {
    throw lattice::TypeMismatch(std::string("cannot merge ") + to_string(kind_of(from)) + " into " +
                                to_string(kind_of(into)));
  }
  return std::visit(
      [&](auto& a) {
        using L = std::decay_t<decltype(a)>;
        return a.join(std::get<L>(from));
      },
      into);
}

CrdtValue merge(CrdtValue a, const CrdtValue& b) {
  join(a, b);
  return a;
}

std::vector<Tuple> live_tuples(const CrdtValue& v) {
  std::vector<Tuple> out;
  std::visit(
      [&](const auto& s) {
        using L = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<L, lattice::GSet<Tuple>>) {
          out.assign(s.elems().begin(), s.elems().end());
        } else if constexpr (std::is_same_v<L, lattice::TwoPSet<Tuple>>) {
          auto r = lattice::twopset_read(s);
          out.assign(r.begin(), r.end());
        } else if constexpr (std::is_same_v<L, lattice::TrueSet>) {
          for (const auto& [token, payload] : s.read()) {
            out.push_back(Tuple{static_cast<std::int64_t>(token), payload});
          }
        } else {
          auto r = s.elements();
          out.assign(r.begin(), r.end());
        }
      },
      v);
  return out;
}

std::size_t tuple_count(const CrdtValue& v) { return live_tuples(v).size(); }

PartitionPlan PartitionPlan::hash(std::string column, std::vector<WorkerId> workers) {
  if (workers.empty()) throw TableError("partition plan needs at least one worker");
  return PartitionPlan{Strategy::kHash, std::move(column), {}, std::move(workers)};
}

PartitionPlan PartitionPlan::range(std::string column, std::vector<Value> boundaries,
                                   std::vector<WorkerId> workers) {
  if (workers.empty()) throw TableError("partition plan needs at least one worker");
  if (boundaries.size() + 1 != workers.size()) {
    throw TableError("range plan needs workers.size() - 1 boundaries");
  }
  if (!std::is_sorted(boundaries.begin(), boundaries.end())) {
    throw TableError("range boundaries must be ascending");
  }
  return PartitionPlan{Strategy::kRange, std::move(column), std::move(boundaries), std::move(workers)};
}

PartitionPlan PartitionPlan::round_robin(std::vector<WorkerId> workers) {
  if (workers.empty()) throw TableError("partition plan needs at least one worker");
  return PartitionPlan{Strategy::kRoundRobin, {}, {}, std::move(workers)};
}

WorkerId PartitionPlan::owner_of(const Value& key) const {
  switch (strategy) {
    case Strategy::kHash:
      return workers[hash_value(key) % workers.size()];
    case Strategy::kRange: {
      auto it = std::upper_bound(boundaries.begin(), boundaries.end(), key);
      return workers[static_cast<std::size_t>(it - boundaries.begin())];
    }
    case Strategy::kRoundRobin:
      break;
  }
  throw TableError("round-robin placement has no key owner");
}

bool PartitionPlan::keyed_on(const std::string& col) const {
  return strategy != Strategy::kRoundRobin && column == col;
}

GlobalTable::GlobalTable(std::string name, CrdtKind kind, std::vector<std::string> schema,
                         PartitionPlan plan)
    : name_(std::move(name)), kind_(kind), schema_(std::move(schema)), plan_(std::move(plan)) {
  if (plan_.strategy != Strategy::kRoundRobin) column_index(plan_.column);
  for (WorkerId w : plan_.workers) shards_.emplace(w, bottom_of(kind_));
}

std::size_t GlobalTable::column_index(const std::string& column) const {
  auto it = std::find(schema_.begin(), schema_.end(), column);
  if (it == schema_.end()) throw TableError("table '" + name_ + "' has no column '" + column + "'");
  return static_cast<std::size_t>(it - schema_.begin());
}

WorkerId GlobalTable::route(const Tuple& t) {
  if (plan_.strategy == Strategy::kRoundRobin) {
    return plan_.workers[arrivals_++ % plan_.workers.size()];
  }
  const auto col = column_index(plan_.column);
  if (col >= t.size()) throw TableError("tuple " + to_string(t) + " is missing the partition column");
  return plan_.owner_of(t[col]);
}

bool GlobalTable::merge_into(WorkerId w, const CrdtValue& delta) {
  auto [it, inserted] = shards_.try_emplace(w, bottom_of(kind_));
  return join(it->second, delta);
}

WorkerId GlobalTable::insert(const Tuple& t) {
  const WorkerId w = route(t);
  if (kind_ == CrdtKind::kGSet) {
    merge_into(w, lattice::GSet<Tuple>{t});
  } else if (kind_ == CrdtKind::kTwoPSet) {
    lattice::TwoPSet<Tuple> delta;
    delta.add(t);
    merge_into(w, delta);
  } else {
    throw TableError(std::string("plain insert is not defined for ") + to_string(kind_) + " tables");
  }
  return w;
}

const CrdtValue& GlobalTable::shard(WorkerId w) const {
  auto it = shards_.find(w);
  if (it == shards_.end()) throw TableError("table '" + name_ + "' has no shard on worker " + to_string(w));
  return it->second;
}

CrdtValue GlobalTable::merged() const {
  CrdtValue out = bottom_of(kind_);
  for (const auto& [w, s] : shards_) join(out, s);
  return out;
}

QueryPlan plan_query(const GlobalTable& table, const std::string& group_by) {
  table.column_index(group_by);
  const auto& plan = table.plan();
  const bool one_shard = plan.workers.size() == 1 && table.shards().size() <= 1;
  return QueryPlan{one_shard || (plan.keyed_on(group_by) && table.placement_consistent()), plan};
}

bool detect_skew(const GlobalTable& table, double factor) {
  if (!(factor > 1.0)) throw TableError("skew factor must exceed 1");
  if (table.shards().size() < 2) return false;
  std::vector<std::size_t> sizes;
  for (const auto& [w, s] : table.shards()) sizes.push_back(tuple_count(s));
  const double total = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  if (total == 0.0) return false;
  const double mean = total / static_cast<double>(sizes.size());
  return static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) > factor * mean;
}

GlobalTable switch_partitioning(const GlobalTable& table, PartitionPlan plan) {
  GlobalTable out = table;
  if (plan == table.plan()) return out;
  if (plan.strategy != Strategy::kRoundRobin) out.column_index(plan.column);
  const bool any_tuples = std::any_of(out.shards_.begin(), out.shards_.end(),
                                      [](const auto& kv) { return tuple_count(kv.second) > 0; });
  if (any_tuples) out.placement_consistent_ = false;
  for (WorkerId w : plan.workers) out.shards_.try_emplace(w, bottom_of(out.kind_));
  out.plan_ = std::move(plan);
  out.arrivals_ = 0;
  return out;
}

Tristate<std::vector<Tuple>> lookup(const GlobalTable& table, const std::string& key_column,
                                    const Value& key, WorkerId at_worker, const NetworkCondition& net) {
  const auto col = table.column_index(key_column);
  auto matches_in = [&](WorkerId w) {
    std::vector<Tuple> hits;
    auto it = table.shards().find(w);
    if (it == table.shards().end()) return hits;
    for (auto& t : live_tuples(it->second)) {
      if (col < t.size() && t[col] == key) hits.push_back(std::move(t));
    }
    return hits;
  };

  auto local = matches_in(at_worker);
  if (!local.empty()) return local;

  const auto& plan = table.plan();
  const bool locality = plan.keyed_on(key_column) && table.placement_consistent();
  if (!locality || !net.healthy()) return kIdk;

  const WorkerId owner = plan.owner_of(key);
  if (owner == at_worker) return kDne;
  // Healthy network: ask the owner.
  auto remote = matches_in(owner);
  if (!remote.empty()) return remote;
  return kDne;
}

std::map<WorkerId, std::map<Value, std::uint64_t>> group_count_per_shard(const GlobalTable& table,
                                                                        const std::string& column) {
  const auto col = table.column_index(column);
  std::map<WorkerId, std::map<Value, std::uint64_t>> out;
  for (const auto& [w, s] : table.shards()) {
    auto& groups = out[w];
    for (const auto& t : live_tuples(s)) {
      if (col < t.size()) ++groups[t[col]];
    }
  }
  return out;
}

}  // namespace buddi::tables
