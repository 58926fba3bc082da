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

#include "buddi/kernels.hpp"
#include "buddi/sketch.hpp"
#include "oracles.hpp"

using namespace buddi;
using namespace buddi::sketch;

namespace {

CmsParams params(std::uint32_t h, std::uint32_t m, std::uint64_t seed = 1) {
  CmsParams p;
  p.h = h;
  p.m = m;
  for (std::uint32_t i = 0; i < h; ++i) p.seeds.push_back(seed * 1000 + i);
  return p;
}

kmer::WorkloadConfig config(std::size_t workers, std::uint64_t seed, double dup = 0.0, std::uint32_t reorder = 0,
                            double drop = 0.0) {
  kmer::WorkloadConfig c;
  c.run.workers = workers;
  c.schedule = {seed, dup, reorder, drop};
  return c;
}

}  // namespace

TEST_CASE("choose params") {
  const auto p = choose_params(0.01, 0.01);
  CHECK(p.m == 272);
  CHECK(p.h == 5);
  CHECK(p.seeds.size() == 5);
  CHECK_NOTHROW(p.validate());
  CHECK(choose_params(0.999, 0.5).m == 3);
  CHECK(choose_params(0.5, 0.5).h == 1);
  CHECK_THROWS_AS(choose_params(0.0, 0.1), std::out_of_range);
  CHECK_THROWS_AS(choose_params(0.1, 1.0), std::out_of_range);
  CHECK(choose_params(0.01, 0.01, 7) == choose_params(0.01, 0.01, 7));
}

TEST_CASE("params validation") {
  auto p = params(2, 10);
  p.seeds[1] = p.seeds[0];
  CHECK_THROWS_AS(SketchMatrix{p}, std::invalid_argument);
  CHECK_THROWS_AS(SketchMatrix{params(0, 10)}, std::invalid_argument);
}

TEST_CASE("insert is idempotent per token") {
  SketchMatrix sk(params(3, 50));
  CHECK(sk.insert("ACGT", 1));
  const auto before = sk;
  CHECK_FALSE(sk.insert("ACGT", 1));
  CHECK(sk == before);
  for (std::uint32_t r = 0; r < 3; ++r) CHECK(sk.cell_size(r, sk.column(r, "ACGT")) >= 1);
}

TEST_CASE("row sums equal the number of distinct inserts") {
  SketchMatrix sk(params(4, 17));
  for (std::uint64_t t = 0; t < 300; ++t) sk.insert(oracle::random_dna(t, 5, 100).substr(0, 5), t);
  for (auto s : sk.row_sums()) CHECK(s == 300);
  CHECK(sk.stored_ids() == 4 * 300);
}

TEST_CASE("exact with a very wide matrix") {
  SketchMatrix sk(params(3, 16 * 64));
  for (std::uint64_t t = 0; t < 5; ++t) sk.insert("GATTACA", t);
  CHECK(sk.query("GATTACA") == 5);
}

TEST_CASE("estimates never undercount") {
  SketchMatrix sk(choose_params(0.05, 0.1, 3));
  std::map<std::string, std::uint64_t> truth;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const auto x = std::to_string(t % 997 * 31 % 1500);
    sk.insert(x, t);
    ++truth[x];
  }
  for (const auto& [x, n] : truth) CHECK(sk.query(x) >= n);
  CHECK(sk.query("never") <= 10000);
}

TEST_CASE("merge of disjoint token sets equals the sketch of the union") {
  const auto p = params(3, 40);
  SketchMatrix a(p), b(p), all(p);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto x = std::to_string(t % 37);
    (t % 2 ? a : b).insert(x, t);
    all.insert(x, t);
  }
  CHECK(merge(a, b) == all);
  CHECK(merge(b, a) == all);
  SketchMatrix other(params(3, 41));
  CHECK_THROWS_AS(a.join(other), lattice::TypeMismatch);
}

TEST_CASE("dump and text encoding") {
  SketchMatrix sk(params(2, 3));
  sk.insert_cell(0, 1, 9);
  sk.insert_cell(1, 2, 9);
  sk.insert_cell(1, 2, 10);
  const auto j = sk.dump();
  CHECK(j["h"] == 2);
  CHECK(j["m"] == 3);
  CHECK(j["cells"] == nlohmann::json::array({0, 1, 0, 0, 0, 2}));
  CHECK(SketchMatrix::decode(sk.params(), sk.encode()) == sk);
  CHECK_THROWS_AS(SketchMatrix::decode(sk.params(), "1 x 3;"), std::invalid_argument);
}

TEST_CASE("column slabs cut the range evenly") {
  const auto plan = column_slabs(10, {worker(0), worker(1), worker(2)});
  CHECK(plan.owner_of(std::int64_t{0}) == worker(0));
  CHECK(plan.owner_of(std::int64_t{3}) == worker(0));
  CHECK(plan.owner_of(std::int64_t{4}) == worker(1));
  CHECK(plan.owner_of(std::int64_t{9}) == worker(2));
}

TEST_CASE("design 2: replicas converge to the sequential sketch") {
  const auto text = oracle::random_dna(21, 1500, 60);
  const auto src = dispenser::ByteSource::memory(text);
  const auto p = choose_params(0.05, 0.05, 4);
  const auto seq = kernels::build_sketch_serial(kernels::kmer_instances(text, 4), p);

  const auto one = design2_run(src, p, config(1, 1));
  CHECK(one.replica(worker(0)) == seq);

  const auto two = design2_run(src, p, config(2, 3, 0.5, 6, 0.2));
  CHECK(two.converged());
  CHECK(two.replica(worker(0)) == two.replica(worker(1)));
  CHECK(two.replica(worker(1)) == seq);
}

TEST_CASE("design 2: a joiner receives the full state") {
  const auto text = oracle::random_dna(22, 1500, 60);
  const auto src = dispenser::ByteSource::memory(text);
  const auto p = choose_params(0.05, 0.05, 4);
  auto cfg = config(2, 5, 0.2, 3);
  cfg.run.joins = {6};
  const auto run = design2_run(src, p, cfg);
  REQUIRE(run.replicas.size() == 3);
  CHECK(run.converged());
  CHECK(run.replica(worker(2)) == kernels::build_sketch_serial(kernels::kmer_instances(text, 4), p));
}

TEST_CASE("design 1 agrees with design 2 and gathers remote cells") {
  const auto text = oracle::random_dna(23, 1200, 60);
  const auto src = dispenser::ByteSource::memory(text);
  const auto p = choose_params(0.05, 0.05, 9);
  const auto d1 = design1_run(src, p, config(3, 2, 0.3, 4, 0.1));
  const auto d2 = design2_run(src, p, config(3, 2));
  CHECK(d1.assembled() == d2.replica(worker(0)));

  const NetworkCondition healthy;
  for (const auto& [x, n] : oracle::kmer_counts(text, 4)) {
    const auto est = design1_query(d1, x, worker(0), healthy);
    REQUIRE(est.has_value());
    CHECK(est.value() == d2.replica(worker(0)).query(x));
    CHECK(est.value() >= n);
  }
}

TEST_CASE("design 1 with one worker is the sequential sketch") {
  const auto text = oracle::random_dna(24, 600, 60);
  const auto p = choose_params(0.1, 0.1, 2);
  const auto d1 = design1_run(dispenser::ByteSource::memory(text), p, config(1, 1));
  CHECK(d1.slabs.at(worker(0)) == kernels::build_sketch_serial(kernels::kmer_instances(text, 4), p));
}

TEST_CASE("design 1 query: one gather per remote row, IDK when cut off") {
  const auto text = oracle::random_dna(25, 600, 60);
  const auto p = params(3, 30, 5);
  const auto d1 = design1_run(dispenser::ByteSource::memory(text), p, config(4, 1));
  const SketchMatrix shape(p);

  // Find a k-mer whose three cells sit on three different workers, none of
  // them worker 3.
  std::string pick;
  for (const auto& [x, n] : oracle::kmer_counts(text, 4)) {
    std::set<WorkerId> owners;
    for (std::uint32_t r = 0; r < 3; ++r) owners.insert(d1.plan.owner_of(std::int64_t{shape.column(r, x)}));
    if (owners.size() == 3 && !owners.contains(worker(3))) {
      pick = x;
      break;
    }
  }
  REQUIRE_FALSE(pick.empty());
  runtime::EventLog log;
  NetworkCondition net;
  CHECK(design1_query(d1, pick, worker(3), net, &log).has_value());
  CHECK(log.count("gather") == 3);

  net.partition(worker(3), d1.plan.owner_of(std::int64_t{shape.column(0, pick)}));
  CHECK(design1_query(d1, pick, worker(3), net).is_idk());
}
