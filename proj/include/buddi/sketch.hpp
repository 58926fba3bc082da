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

// Count-min sketch whose cells are sets of instance ids, so an insert seen
// twice is absorbed. Two distributed layouts run on the simulator:
//
//   design1   columns range-partitioned into P slabs, one per worker; a
//             query gathers the h addressed cells from their owners
//   design2   every worker holds the whole matrix; owners gossip deltas
//             and replicas merge cellwise

#ifndef BUDDI_SKETCH_HPP_
#define BUDDI_SKETCH_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "buddi/dispenser.hpp"
#include "buddi/global_table.hpp"
#include "buddi/kmer_workloads.hpp"
#include "buddi/lattice.hpp"
#include "buddi/simulator.hpp"
#include "buddi/tristate.hpp"

namespace buddi::sketch {

struct CmsParams {
  std::uint32_t h = 1;
  std::uint32_t m = 1;
  std::vector<std::uint64_t> seeds;

  // Throws std::invalid_argument unless h, m >= 1 and there are h distinct
  // seeds.
  void validate() const;

  friend bool operator==(const CmsParams&, const CmsParams&) = default;
};

// m = ceil(e / epsilon), h = ceil(ln(1 / delta)); seeds drawn from `seed`.
// Both arguments must lie in (0, 1).
CmsParams choose_params(double epsilon, double delta, std::uint64_t seed = 0);

class SketchMatrix {
 public:
  SketchMatrix() = default;
  explicit SketchMatrix(CmsParams params);

  const CmsParams& params() const { return params_; }
  std::uint32_t column(std::uint32_t row, std::string_view x) const;

  // Adds token to the h cells addressed by x. Returns true if any grew.
  bool insert(std::string_view x, std::uint64_t token);
  // Adds token to one cell.
  bool insert_cell(std::uint32_t row, std::uint32_t col, std::uint64_t token);

  std::uint64_t cell_size(std::uint32_t row, std::uint32_t col) const;
  const lattice::LSet<std::uint64_t>* cell(std::uint32_t row, std::uint32_t col) const;
  std::uint64_t query(std::string_view x) const;

  // Cellwise union. Throws lattice::TypeMismatch for different parameters.
  bool join(const SketchMatrix& other);

  std::vector<std::uint64_t> row_sums() const;
  // Ids held across all cells; h per distinct insert.
  std::uint64_t stored_ids() const;
  // Non-empty cells as (row * m + col, ids).
  const std::map<std::uint64_t, lattice::LSet<std::uint64_t>>& cells() const { return cells_; }

  // {"h","m","seeds","cells"} with cells as row-major cardinalities.
  nlohmann::json dump() const;

  // Text form of every non-empty cell: "row col id;..."
  std::string encode() const;
  static SketchMatrix decode(const CmsParams& params, std::string_view text);

  friend bool operator==(const SketchMatrix&, const SketchMatrix&) = default;

 private:
  std::uint64_t index(std::uint32_t row, std::uint32_t col) const;

  CmsParams params_;
  std::map<std::uint64_t, lattice::LSet<std::uint64_t>> cells_;
};

inline SketchMatrix merge(SketchMatrix a, const SketchMatrix& b) {
  a.join(b);
  return a;
}

struct Design2Run {
  CmsParams params;
  std::map<WorkerId, SketchMatrix> replicas;
  runtime::RunStats stats;
  runtime::EventLog log;

  // All replicas equal.
  bool converged() const;
  const SketchMatrix& replica(WorkerId w) const { return replicas.at(w); }
};

// Each k-mer instance goes to its hash owner, which inserts into its replica
// and sends the delta to every other worker. A worker joining mid-run is sent
// each existing replica in full.
Design2Run design2_run(const dispenser::ByteSource& source, const CmsParams& params,
                       const kmer::WorkloadConfig& cfg);

struct Design1Run {
  CmsParams params;
  tables::PartitionPlan plan;  // range on "col" over the storage workers
  std::map<WorkerId, SketchMatrix> slabs;
  runtime::RunStats stats;
  runtime::EventLog log;

  // Merge of all slabs.
  SketchMatrix assembled() const;
};

// Range plan cutting [0, m) into `workers` contiguous slabs.
tables::PartitionPlan column_slabs(std::uint32_t m, const std::vector<WorkerId>& workers);

Design1Run design1_run(const dispenser::ByteSource& source, const CmsParams& params,
                       const kmer::WorkloadConfig& cfg);

// Reads the h addressed cells at their slab owners and reduces by min. Each
// read from another worker is one "gather" event appended to `log`. IDK if
// any owner is unreachable from `at`.
Tristate<std::uint64_t> design1_query(const Design1Run& run, std::string_view x, WorkerId at,
                                      const NetworkCondition& net, runtime::EventLog* log = nullptr);

}  // namespace buddi::sketch

#endif  // BUDDI_SKETCH_HPP_
