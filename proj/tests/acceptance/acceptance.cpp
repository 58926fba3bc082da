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

// One line per acceptance criterion: "[PASS] C<n> <name> (<seconds>s) <detail>".
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "buddi/cli.hpp"
#include "buddi/crdt.hpp"
#include "buddi/dataflow.hpp"
#include "buddi/global_table.hpp"
#include "buddi/kmer_workloads.hpp"
#include "buddi/lattice_gen.hpp"
#include "buddi/sketch.hpp"
#include "oracles.hpp"

using namespace buddi;

namespace {

const std::string kCorpus = std::string(BUDDI_TEST_DATA) + "/corpus_10k.txt";

struct Outcome {
  bool pass = false;
  std::string detail;
};

kmer::WorkloadConfig faulty(std::size_t workers, std::uint64_t seed, double dup, std::uint32_t reorder,
                            double drop) {
  kmer::WorkloadConfig c;
  c.run.workers = workers;
  c.schedule = {seed, dup, reorder, drop};
  return c;
}

Outcome c1_lattice_laws() {
  std::string failed;
  std::size_t types = 0;
  for (const auto& rep : lattice::check_all_laws(1000, 1)) {
    ++types;
    if (rep.cases < 1000 || !rep.ok()) failed += " " + rep.type;
  }
  return {failed.empty() && types == 8, std::to_string(types) + " types x 1000 cases" + failed};
}

Outcome c2_confluence() {
  const auto text = oracle::slurp(kCorpus);
  const auto truth = oracle::kmer_counts(text, 4);
  const auto src = dispenser::ByteSource::file(kCorpus);
  std::set<std::map<std::string, std::uint64_t>> distinct;
  int exact = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto run = kmer::impl_a_run(src, faulty(4, seed, 0.3, 5, 0.1));
    distinct.insert(run.histogram.counts);
    exact += run.histogram.counts == truth;
  }
  cli::RunConfig cfg;
  cfg.workload = "kmer_a";
  cfg.input = kCorpus;
  cfg.workers = 4;
  cfg.duplicate_prob = 0.3;
  cfg.reorder_window = 5;
  cfg.drop_prob = 0.1;
  const auto v = cli::verify(cfg, cli::parse_seeds("1..25"));
  const bool pass = exact == 25 && distinct.size() == 1 && v.exit_code == cli::kExitMatch;
  return {pass, std::to_string(exact) + "/25 equal to oracle, " + std::to_string(distinct.size()) +
                    " distinct histogram(s), verify exit " + std::to_string(v.exit_code)};
}

Outcome c3_atag() {
  const auto run = kmer::impl_a_run(dispenser::ByteSource::memory("ATAGATAG"), faulty(2, 7, 0.3, 2, 0.1));
  const auto count = run.histogram.count_of("ATAG");
  const auto ids = run.stored_ids.count("ATAG") ? run.stored_ids.at("ATAG") : 0;
  return {count == 2 && ids == 2, "ATAG count " + std::to_string(count) + ", ids stored " + std::to_string(ids)};
}

std::string threshold_corpus() {
  const std::vector<std::pair<std::string, int>> wanted{
      {"AAAC", 1}, {"AAGC", 2}, {"ATTG", 3}, {"CCGA", 10}, {"GGTA", 100}};
  std::string out;
  for (int round = 0; round < 100; ++round) {
    for (const auto& [kmer, n] : wanted) {
      if (round < n) out += kmer + "\n";
    }
  }
  return out;
}

Outcome c4_threshold() {
  const auto text = threshold_corpus();
  const auto truth = oracle::kmer_counts(text, 4);
  const std::size_t t = 3;
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto run = kmer::impl_b_run(dispenser::ByteSource::memory(text), t, faulty(4, seed, 0.3, 5, 0.1));
    bool good = truth.size() == 5;
    for (const auto& [kmer, n] : truth) {
      const auto got = run.histogram.count_of(kmer);
      if (n < t && got != n) good = false;
      if ((got >= t) != (n >= t)) good = false;
    }
    ok += good;
  }
  return {ok == 10, std::to_string(ok) + "/10 seeds exact below 3 with the >=3 predicate right"};
}

Outcome c5_stratification() {
  const auto text = threshold_corpus();
  const auto src = dispenser::ByteSource::memory(text);
  bool raised = false;
  try {
    (void)kmer::guarded_lset_run(src, 3, runtime::MergeOp::kInstant, faulty(3, 1, 0.2, 3, 0.05));
  } catch (const runtime::StratificationError&) {
    raised = true;
  }
  const auto run = kmer::guarded_lset_run(src, 3, runtime::MergeOp::kDeferred, faulty(3, 1, 0.2, 3, 0.05));
  bool match = true;
  for (const auto& [kmer, n] : oracle::kmer_counts(text, 4)) {
    const auto got = run.histogram.count_of(kmer);
    match &= n < 3 ? got == n : got >= 3;
  }
  return {raised && match, std::string("<= raised: ") + (raised ? "yes" : "no") +
                               ", <+ matches oracle: " + (match ? "yes" : "no")};
}

Outcome c6_one_shot() {
  const auto eq1 = tables::DataflowGraph::parse("shopping_cart := shopping_cart - bad_items\n");
  const auto eq2 = tables::DataflowGraph::parse("shopping_cart := added_items - bad_items\n");
  const auto rw = tables::rewrite_one_shot(eq1);
  Rng rng(6);
  int equal = 0;
  for (int i = 0; i < 200; ++i) {
    tables::Relation added, bad;
    for (auto n = rng.below(10); n > 0; --n) added.insert(std::string(1, static_cast<char>('a' + rng.below(15))));
    for (auto n = rng.below(6); n > 0; --n) bad.insert(std::string(1, static_cast<char>('a' + rng.below(15))));
    const auto fix = tables::evaluate_stratified(eq1, {{"shopping_cart", added}, {"bad_items", bad}});
    const auto one = tables::evaluate_one_shot(rw.graph, {{"shopping_cart", added}, {"bad_items", bad}}, rw.renames);
    const auto plain = tables::evaluate_one_shot(eq2, {{"added_items", added}, {"bad_items", bad}});
    tables::Relation diff;
    std::set_difference(added.begin(), added.end(), bad.begin(), bad.end(), std::inserter(diff, diff.end()));
    equal += fix.relations.at("shopping_cart") == one.at("shopping_cart") && one.at("shopping_cart") == diff &&
             plain.at("shopping_cart") == diff;
  }
  const bool flags = tables::detect_cycles(eq1).size() == 1 && tables::detect_cycles(eq2).empty() &&
                     tables::detect_cycles(rw.graph).empty();
  return {equal == 200 && flags, std::to_string(equal) + "/200 equal, cycle flagged only on the self-recursive rule: " +
                                     (flags ? "yes" : "no")};
}

Outcome c7_exactly_once() {
  const auto text = oracle::slurp(kCorpus);
  const auto truth = oracle::kmer_counts(text, 4);
  const auto src = dispenser::ByteSource::file(kCorpus);
  int ok = 0;
  std::size_t requeued_total = 0;
  std::string why;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = faulty(4, seed, 0.5, 3, 0.05);
    const WorkerId victim = worker(1);
    cfg.run.failures = {{12, victim}};
    const auto run = kmer::buddi_kmer_query(src, cfg);
    bool good = run.histogram.counts == truth;

    // Chunk tokens the victim completed, and those requeued on its failure.
    std::set<std::uint64_t> done_by_victim, requeued;
    std::uint64_t fail_tick = 0;
    for (const auto& e : run.log.events()) {
      if (e.kind == "complete" && e.src == victim) done_by_victim.insert(e.token_id);
      if (e.kind == "requeue" && e.src == victim) requeued.insert(e.token_id);
      if (e.kind == "fail") fail_tick = e.tick;
    }
    std::set<std::uint64_t> reassigned, completed_after;
    for (const auto& e : run.log.events()) {
      if (e.tick < fail_tick) continue;
      if (e.kind == "assign" && e.dst != victim) reassigned.insert(e.token_id);
      if (e.kind == "complete" && e.src != victim) completed_after.insert(e.token_id);
    }
    good &= !requeued.empty();
    for (auto t : requeued) good &= reassigned.contains(t) && completed_after.contains(t);
    for (auto t : done_by_victim) good &= !reassigned.contains(t);
    requeued_total += requeued.size();
    if (!good && why.empty()) why = ", first failing seed " + std::to_string(seed);
    ok += good;
  }
  return {ok == 10, std::to_string(ok) + "/10 seeds, " + std::to_string(requeued_total) + " chunks requeued" + why};
}

Outcome c8_trueset() {
  Rng rng(8);
  // Exhaustive: every order of five envelopes.
  int perm_sets = 0, perm_ok = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<oracle::TsOp> ops;
    std::vector<lattice::TrueSet> envelopes;
    IdSource uses(trial);
    for (std::uint64_t i = 0; i < 5; ++i) {
      const bool ins = i == 0 || rng.chance(0.6);
      const std::uint64_t token = rng.below(2);
      const lattice::Timestamp ts{i + 1, static_cast<std::uint32_t>(rng.below(3))};
      const std::string payload = "v" + std::to_string(i);
      ops.push_back({ts.time, ts.worker, ins, token, payload});
      envelopes.push_back(ins ? lattice::trueset_insert({}, token, payload, ts, uses)
                              : lattice::trueset_delete_zk({}, token, ts));
    }
    const auto want = oracle::replay(ops);
    std::vector<int> order(5);
    std::iota(order.begin(), order.end(), 0);
    std::set<std::map<std::uint64_t, std::string>> reads;
    int perms = 0;
    do {
      lattice::TrueSet replica;
      for (int i : order) replica.join(envelopes[static_cast<std::size_t>(i)]);
      reads.insert(lattice::trueset_read(replica));
      ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    ++perm_sets;
    perm_ok += perms == 120 && reads.size() == 1 && *reads.begin() == want;
  }

  // Random longer sequences, delivered to three replicas in different
  // orders with duplicates.
  int random_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 6 + rng.below(20);
    std::vector<oracle::TsOp> ops;
    std::vector<lattice::TrueSet> envelopes;
    IdSource uses(10000 + trial);
    std::vector<lattice::LogicalClock> clocks{lattice::LogicalClock(0), lattice::LogicalClock(1),
                                              lattice::LogicalClock(2)};
    for (std::uint64_t i = 0; i < n; ++i) {
      auto& clock = clocks[rng.below(3)];
      // Writers occasionally observe one another.
      if (rng.chance(0.5)) clock.observe(clocks[rng.below(3)].next());
      const auto ts = clock.next();
      const bool ins = rng.chance(0.6);
      const std::uint64_t token = rng.below(4);
      const std::string payload = "p" + std::to_string(i);
      ops.push_back({ts.time, ts.worker, ins, token, payload});
      envelopes.push_back(ins ? lattice::trueset_insert({}, token, payload, ts, uses)
                              : lattice::trueset_delete_zk({}, token, ts));
    }
    const auto want = oracle::replay(ops);
    bool good = true;
    for (int r = 0; r < 3; ++r) {
      std::vector<std::size_t> order(envelopes.size());
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
      lattice::TrueSet replica;
      for (auto i : order) {
        replica.join(envelopes[i]);
        if (rng.chance(0.3)) replica.join(envelopes[i]);
      }
      good &= lattice::trueset_read(replica) == want;
    }
    random_ok += good;
  }
  return {perm_ok == perm_sets && random_ok == 1000,
          std::to_string(perm_ok) + "/" + std::to_string(perm_sets) + " five-envelope sets x 120 orders, " +
              std::to_string(random_ok) + "/1000 random sequences match replay"};
}

Outcome c9_tristate() {
  std::vector<WorkerId> ws{worker(0), worker(1), worker(2), worker(3)};
  tables::GlobalTable t("kmers", tables::CrdtKind::kGSet, {"seq", "token"}, tables::PartitionPlan::hash("seq", ws));
  t.insert({std::string("ACGT"), std::int64_t{1}});
  const tables::Value absent = std::string("GGGG");
  const tables::Value present = std::string("ACGT");
  const WorkerId owner = t.plan().owner_of(absent);
  NetworkCondition net;
  const auto healthy = tables::lookup(t, "seq", absent, owner, net);
  net.partition(worker(0), worker(1));
  const auto cut = tables::lookup(t, "seq", absent, owner, net);
  const auto hit = tables::lookup(t, "seq", present, t.plan().owner_of(present), net);
  const bool pass = healthy.is_dne() && cut.is_idk() && hit.has_value() && hit.value().size() == 1;
  return {pass, std::string("healthy ") + healthy.label() + ", partitioned " + cut.label() + ", present " +
                    hit.label()};
}

Outcome c10_sketch() {
  const std::size_t k = 12;
  // 113 lines of 100 bases: 113 * 89 = 10057 windows.
  const auto text = oracle::random_dna(2026, 11300, 100);
  const auto truth = oracle::kmer_counts(text, k);
  std::uint64_t n = 0;
  for (const auto& [x, c] : truth) n += c;
  const auto params = sketch::choose_params(0.01, 0.01, 10);
  const auto src = dispenser::ByteSource::memory(text);
  auto cfg = faulty(4, 3, 0.3, 4, 0.1);
  cfg.k = k;
  const auto d1 = sketch::design1_run(src, params, cfg);
  const auto d2 = sketch::design2_run(src, params, cfg);

  const NetworkCondition healthy;
  std::size_t under = 0, disagree = 0, over_eps = 0;
  for (const auto& [x, c] : truth) {
    const auto q1 = sketch::design1_query(d1, x, worker(0), healthy);
    const auto q2 = d2.replica(worker(2)).query(x);
    if (!q1.has_value() || q1.value() != q2) ++disagree;
    if (q2 < c) ++under;
    if (static_cast<double>(q2 - c) > 0.01 * static_cast<double>(n)) ++over_eps;
  }
  const double frac = static_cast<double>(over_eps) / static_cast<double>(truth.size());
  const bool pass = n >= 10000 && d2.converged() && under == 0 && disagree == 0 && frac <= 0.05;
  char buf[200];
  std::snprintf(buf, sizeof buf, "N=%llu, %zu items, %zu under, %zu design disagreements, %.4f over eps*N",
                static_cast<unsigned long long>(n), truth.size(), under, disagree, frac);
  return {pass, buf};
}

Outcome c11_coordination() {
  const auto run = kmer::buddi_kmer_query(dispenser::ByteSource::file(kCorpus), faulty(4, 11, 0.3, 3, 0.05));
  bool inside = false;
  std::size_t cross = 0;
  for (const auto& e : run.log.events()) {
    if (e.kind == "aggregate_begin") inside = true;
    if (e.kind == "aggregate_end") inside = false;
    if (inside && e.kind == "send" && e.src != e.dst) ++cross;
  }
  std::vector<WorkerId> ws{worker(0), worker(1), worker(2), worker(3)};
  const auto rr = tables::switch_partitioning(run.table, tables::PartitionPlan::round_robin(ws));
  const bool after = tables::plan_query(rr, "seq").coordination_free;
  const bool pass = run.plan.coordination_free && cross == 0 && run.aggregation_messages == 0 && !after;
  return {pass, std::string("hash(seq) coordination_free=") + (run.plan.coordination_free ? "true" : "false") +
                    ", " + std::to_string(cross) + " cross-worker sends, round_robin coordination_free=" +
                    (after ? "true" : "false")};
}

Outcome c12_determinism() {
  std::string detail;
  bool pass = true;
  for (const auto& w : cli::kWorkloads) {
    cli::RunConfig c;
    c.workload = w;
    c.input = kCorpus;
    c.workers = 4;
    c.seed = 1234;
    c.duplicate_prob = 0.3;
    c.reorder_window = 5;
    c.drop_prob = 0.1;
    if (w == "buddi_kmer") c.failure_events = {{10, worker(2)}};
    if (w == "cms_design2") c.join_events = {8};
    const auto a = cli::run(c);
    const auto b = cli::run(c);
    const bool same = cli::render(a.report) == cli::render(b.report) && a.log.text() == b.log.text();
    if (!same) detail += " " + w;
    pass &= same && a.exit_code == cli::kExitMatch;
  }
  return {pass, detail.empty() ? "6 workloads byte-identical across reruns" : "differs:" + detail};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: none
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "lattice laws", 30, c1_lattice_laws},
      {2, "confluence over 25 seeds", 60, c2_confluence},
      {3, "ATAG example", 0, c3_atag},
      {4, "threshold semantics", 0, c4_threshold},
      {5, "stratification pitfall", 0, c5_stratification},
      {6, "one-shot equivalence", 0, c6_one_shot},
      {7, "exactly-once under failure", 0, c7_exactly_once},
      {8, "true-set convergence", 0, c8_trueset},
      {9, "DNE/IDK", 0, c9_tristate},
      {10, "count-min sketch", 60, c10_sketch},
      {11, "compile-time coordination", 0, c11_coordination},
      {12, "determinism", 0, c12_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += ", over the time limit";
    }
    std::printf("[%s] C%d %s (%.2fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
