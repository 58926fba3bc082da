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

#include "buddi/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "buddi/dataflow.hpp"
#include "buddi/dispenser.hpp"
#include "buddi/kernels.hpp"
#include "buddi/kmer.hpp"
#include "buddi/kmer_workloads.hpp"
#include "buddi/lattice_gen.hpp"
#include "buddi/sketch.hpp"

namespace buddi::cli {

using nlohmann::json;

namespace {

std::uint64_t to_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw ConfigError("bad " + what + ": '" + std::string(s) + "'");
  }
  return v;
}

WorkerId to_worker(std::string_view s, const std::string& what) {
  const auto v = to_u64(s, what);
  if (v > UINT32_MAX) throw ConfigError(what + " out of range");
  return worker(static_cast<std::uint32_t>(v));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(s.substr(0, p));
    if (p == std::string_view::npos) return out;
    s.remove_prefix(p + 1);
  }
}

}  // namespace

runtime::FailureEvent parse_failure(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError("--fail expects TICK:WORKER, got '" + text + "'");
  return {to_u64(parts[0], "failure tick"), to_worker(parts[1], "failure worker")};
}

runtime::PartitionEvent parse_partition(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--partition expects START[..END]:A-B,..., got '" + text + "'");
  const std::string_view when(text.data(), colon);
  runtime::PartitionEvent ev;
  if (const auto dots = when.find(".."); dots != std::string_view::npos) {
    ev.start = to_u64(when.substr(0, dots), "partition start");
    ev.end = to_u64(when.substr(dots + 2), "partition end");
  } else {
    ev.start = to_u64(when, "partition start");
    ev.end = ev.start + kDefaultPartitionLength;
  }
  if (ev.end <= ev.start) throw ConfigError("partition must end after it starts");
  for (auto pair : split(std::string_view(text).substr(colon + 1), ',')) {
    const auto ab = split(pair, '-');
    if (ab.size() != 2) throw ConfigError("bad partition pair '" + std::string(pair) + "'");
    const auto a = to_worker(ab[0], "partition worker");
    const auto b = to_worker(ab[1], "partition worker");
    if (a == b) throw ConfigError("a worker cannot be partitioned from itself");
    ev.pairs.emplace_back(a, b);
  }
  return ev;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (auto item : split(text, ',')) {
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = to_u64(item.substr(0, dots), "seed");
      const auto hi = to_u64(item.substr(dots + 2), "seed");
      if (hi < lo) throw ConfigError("empty seed range");
      if (hi - lo >= 100000) throw ConfigError("seed range too large");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(to_u64(item, "seed"));
    }
  }
  return out;
}

void RunConfig::validate() const {
  if (std::find(kWorkloads.begin(), kWorkloads.end(), workload) == kWorkloads.end()) {
    throw ConfigError("unknown workload '" + workload + "'");
  }
  if (workload != "lattice_demo" && input.empty()) throw ConfigError("--input is required for " + workload);
  if (k < 1 || k > kmer::kMaxK) throw ConfigError("k must be in [1, " + std::to_string(kmer::kMaxK) + "]");
  if (threshold < 1) throw ConfigError("threshold must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  auto prob = [](double p, const char* name, bool closed) {
    if (!(p >= 0.0 && (closed ? p <= 1.0 : p < 1.0))) {
      throw ConfigError(std::string(name) + (closed ? " must lie in [0, 1]" : " must lie in [0, 1)"));
    }
  };
  prob(duplicate_prob, "dup-prob", true);
  // A drop probability of 1 would never deliver anything.
  prob(drop_prob, "drop-prob", false);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (tick_cap < 1) throw ConfigError("tick cap must be positive");
  const auto total = workers + join_events.size();
  for (const auto& f : failure_events) {
    if (index_of(f.worker) >= total) throw ConfigError("failure names unknown worker " + to_string(f.worker));
  }
  for (const auto& p : partition_events) {
    for (const auto& [a, b] : p.pairs) {
      if (index_of(a) >= total || index_of(b) >= total) throw ConfigError("partition names an unknown worker");
    }
  }
}

json RunConfig::echo() const {
  json fails = json::array();
  for (const auto& f : failure_events) fails.push_back(std::to_string(f.tick) + ":" + std::to_string(index_of(f.worker)));
  json parts = json::array();
  for (const auto& p : partition_events) {
    std::string s = std::to_string(p.start) + ".." + std::to_string(p.end) + ":";
    for (std::size_t i = 0; i < p.pairs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(index_of(p.pairs[i].first)) + "-" + std::to_string(index_of(p.pairs[i].second));
    }
    parts.push_back(s);
  }
  json c = {{"workload", workload},   {"input", input},
            {"k", k},                 {"threshold", threshold},
            {"workers", workers},     {"seed", seed},
            {"dup_prob", duplicate_prob}, {"reorder_window", reorder_window},
            {"drop_prob", drop_prob}, {"fail", fails},
            {"partition", parts},     {"join", join_events},
            {"eps", epsilon},         {"delta", delta},
            {"tick_cap", tick_cap}};
  if (lose_first_chunk) c["debug_lose_chunk"] = true;
  return c;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

namespace {

kmer::WorkloadConfig workload_config(const RunConfig& cfg) {
  kmer::WorkloadConfig w;
  w.k = cfg.k;
  w.run.workers = cfg.workers;
  w.run.tick_cap = cfg.tick_cap;
  w.run.failures = cfg.failure_events;
  w.run.joins = cfg.join_events;
  w.run.partitions = cfg.partition_events;
  w.schedule = {cfg.seed, cfg.duplicate_prob, cfg.reorder_window, cfg.drop_prob};
  w.ingest.lose_first_chunk = cfg.lose_first_chunk;
  return w;
}

json event_counts(const runtime::EventLog& log) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& e : log.events()) ++counts[e.kind];
  return counts;
}

json stats_json(const runtime::RunStats& s) {
  return {{"ticks", s.ticks}, {"messages", s.messages}, {"remote_messages", s.remote_messages},
          {"deliveries", s.deliveries}};
}

// Keys whose reported count differs from the oracle.
json exact_mismatches(const kmer::KmerHistogram& got, const kmer::KmerHistogram& want) {
  json out = json::array();
  std::set<std::string> keys;
  for (const auto& [s, c] : got.counts) keys.insert(s);
  for (const auto& [s, c] : want.counts) keys.insert(s);
  for (const auto& s : keys) {
    if (got.count_of(s) != want.count_of(s)) {
      out.push_back({{"kmer", s}, {"got", got.count_of(s)}, {"want", want.count_of(s)}});
    }
  }
  return out;
}

// Exact below the threshold, at least the threshold above it.
json threshold_mismatches(const kmer::KmerHistogram& got, const kmer::KmerHistogram& want, std::size_t t) {
  json out = json::array();
  std::set<std::string> keys;
  for (const auto& [s, c] : got.counts) keys.insert(s);
  for (const auto& [s, c] : want.counts) keys.insert(s);
  for (const auto& s : keys) {
    const auto g = got.count_of(s), w = want.count_of(s);
    const bool ok = w < t ? g == w : g >= t;
    if (!ok) out.push_back({{"kmer", s}, {"got", g}, {"want", w}});
  }
  return out;
}

std::vector<std::string> above(const kmer::KmerHistogram& h, std::size_t t) {
  std::vector<std::string> out;
  for (const auto& [s, c] : h.counts) {
    if (c >= t) out.push_back(s);
  }
  return out;
}

json histogram_json(const kmer::KmerHistogram& h) { return kmer::to_json(h); }

json truncate(json arr, std::size_t n = 20) {
  if (arr.size() > n) arr.erase(arr.begin() + static_cast<std::ptrdiff_t>(n), arr.end());
  return arr;
}

struct Result {
  bool match = false;
  json body;
  // What verify compares across seeds.
  json comparable;
  runtime::EventLog log;
};

Result run_kmer(const RunConfig& cfg, const dispenser::ByteSource& src) {
  const auto text = src.read_all();
  const auto oracle = kmer::oracle_count(kmer::split_lines(text), cfg.k);
  const auto wc = workload_config(cfg);
  Result r;
  if (cfg.workload == "kmer_a") {
    auto run = kmer::impl_a_run(src, wc);
    auto bad = exact_mismatches(run.histogram, oracle);
    r.match = bad.empty() && run.partitions_disjoint;
    r.body = {{"histogram", histogram_json(run.histogram)}, {"mismatches", truncate(bad)},
              {"mismatch_count", bad.size()}, {"partitions_disjoint", run.partitions_disjoint},
              {"stats", stats_json(run.stats)}};
    r.comparable = histogram_json(run.histogram);
    r.log = std::move(run.log);
  } else if (cfg.workload == "kmer_b") {
    auto run = kmer::impl_b_run(src, cfg.threshold, wc);
    auto bad = threshold_mismatches(run.histogram, oracle, cfg.threshold);
    r.match = bad.empty() && run.partitions_disjoint;
    r.body = {{"histogram", histogram_json(run.histogram)}, {"mismatches", truncate(bad)},
              {"mismatch_count", bad.size()}, {"at_or_above_threshold", above(run.histogram, cfg.threshold)},
              {"partitions_disjoint", run.partitions_disjoint}, {"stats", stats_json(run.stats)}};
    r.comparable = above(run.histogram, cfg.threshold);
    r.log = std::move(run.log);
  } else {
    auto run = kmer::buddi_kmer_query(src, wc);
    auto bad = exact_mismatches(run.histogram, oracle);
    r.match = bad.empty() && run.partitions_disjoint;
    r.body = {{"histogram", histogram_json(run.histogram)},
              {"mismatches", truncate(bad)},
              {"mismatch_count", bad.size()},
              {"partitions_disjoint", run.partitions_disjoint},
              {"coordination_free", run.plan.coordination_free},
              {"aggregation_messages", run.aggregation_messages},
              {"duplicates_absorbed", run.duplicates_absorbed},
              {"stats", stats_json(run.stats)}};
    r.comparable = histogram_json(run.histogram);
    r.log = std::move(run.log);
  }
  r.body["oracle_total_windows"] = oracle.total_windows;
  return r;
}

Result run_sketch(const RunConfig& cfg, const dispenser::ByteSource& src) {
  const auto text = src.read_all();
  const auto oracle = kmer::oracle_count(kmer::split_lines(text), cfg.k);
  const auto params = sketch::choose_params(cfg.epsilon, cfg.delta, cfg.seed);
  const auto reference = kernels::build_sketch_serial(kernels::kmer_instances(text, cfg.k), params);
  const auto wc = workload_config(cfg);

  Result r;
  std::function<std::optional<std::uint64_t>(const std::string&)> estimate;
  sketch::SketchMatrix state;
  std::optional<sketch::Design1Run> d1;
  std::optional<sketch::Design2Run> d2;
  runtime::EventLog gathers;
  bool structural = true;
  if (cfg.workload == "cms_design1") {
    d1 = sketch::design1_run(src, params, wc);
    const NetworkCondition healthy;
    estimate = [&](const std::string& x) -> std::optional<std::uint64_t> {
      auto t = sketch::design1_query(*d1, x, worker(0), healthy, &gathers);
      if (!t.has_value()) return std::nullopt;
      return t.value();
    };
    state = d1->assembled();
    r.body["stats"] = stats_json(d1->stats);
    r.log = d1->log;
  } else {
    d2 = sketch::design2_run(src, params, wc);
    structural = d2->converged();
    state = d2->replicas.begin()->second;
    estimate = [&](const std::string& x) -> std::optional<std::uint64_t> { return state.query(x); };
    r.body["converged"] = structural;
    r.body["stats"] = stats_json(d2->stats);
    r.log = d2->log;
  }

  json bad = json::array();
  std::uint64_t over = 0;
  const double slack = cfg.epsilon * static_cast<double>(oracle.total_windows);
  for (const auto& [x, truth] : oracle.counts) {
    const auto est = estimate(x);
    if (!est || *est < truth || *est != reference.query(x)) {
      bad.push_back({{"kmer", x}, {"got", est ? json(*est) : json("IDK")}, {"want", truth}});
    } else if (static_cast<double>(*est - truth) > slack) {
      ++over;
    }
  }
  r.match = structural && bad.empty() && state == reference;
  r.body["sketch"] = state.dump();
  r.body["mismatches"] = truncate(bad);
  r.body["mismatch_count"] = bad.size();
  r.body["queried"] = oracle.counts.size();
  r.body["overcount_beyond_eps_n"] = over;
  r.body["gather_messages"] = gathers.count("gather");
  r.body["oracle_total_windows"] = oracle.total_windows;
  r.comparable = state.dump();
  return r;
}

Result run_lattice_demo(const RunConfig& cfg) {
  Result r;
  json laws = json::object();
  r.match = true;
  for (const auto& rep : lattice::check_all_laws(200, cfg.seed)) {
    laws[rep.type] = {{"cases", rep.cases}, {"failures", truncate(rep.failures)}};
    r.match &= rep.ok();
  }
  // Zero-knowledge delete and reinsert on two replicas that sync both ways.
  lattice::TrueSet a, b;
  IdSource uses(cfg.seed);
  lattice::LogicalClock ca(0), cb(1);
  a = lattice::trueset_insert(a, 7, "x", ca.next(), uses);
  b.join(a);
  cb.observe(ca.next());
  b = lattice::trueset_delete_zk(b, 7, cb.next());
  a = lattice::trueset_insert(a, 7, "y", ca.next(), uses);
  lattice::TrueSet ab = lattice::merge(a, b), ba = lattice::merge(b, a);
  r.match &= ab == ba;
  json read = json::object();
  for (const auto& [token, payload] : ab.read()) read[std::to_string(token)] = payload;
  r.body = {{"laws", laws}, {"trueset_read", read}, {"trueset_converged", ab == ba}};
  r.comparable = r.body;
  return r;
}

Result dispatch(const RunConfig& cfg) {
  if (cfg.workload == "lattice_demo") return run_lattice_demo(cfg);
  const auto src = dispenser::ByteSource::file(cfg.input);
  if (cfg.workload.starts_with("cms_")) return run_sketch(cfg, src);
  return run_kmer(cfg, src);
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  out.report = {{"config", cfg.echo()}, {"workload", cfg.workload}};
  try {
    cfg.validate();
    auto r = dispatch(cfg);
    out.exit_code = r.match ? kExitMatch : kExitMismatch;
    out.report.update(r.body);
    out.report["match"] = r.match;
    out.report["events"] = event_counts(r.log);
    out.log = std::move(r.log);
  } catch (const tables::DivergenceError& e) {
    out.exit_code = kExitDivergence;
    out.report["error"] = {{"kind", "divergence"}, {"message", e.what()}};
    out.report["match"] = false;
  } catch (const kmer::InvalidBase& e) {
    out.exit_code = kExitConfig;
    out.report["error"] = {{"kind", "input"}, {"message", e.what()}};
    out.report["match"] = false;
  } catch (const std::invalid_argument& e) {
    out.exit_code = kExitConfig;
    out.report["error"] = {{"kind", "config"}, {"message", e.what()}};
    out.report["match"] = false;
  } catch (const dispenser::DispenserError& e) {
    out.exit_code = kExitConfig;
    out.report["error"] = {{"kind", "input"}, {"message", e.what()}};
    out.report["match"] = false;
  }
  return out;
}

VerifyOutcome verify(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  VerifyOutcome out;
  out.summary = {{"config", cfg.echo()}, {"seeds", seeds}};
  if (seeds.size() < 2) {
    out.exit_code = kExitConfig;
    out.summary["error"] = "verify needs at least two seeds";
    return out;
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.summary["error"] = e.what();
    return out;
  }

  const auto n = static_cast<std::int64_t>(seeds.size());
  std::vector<int> codes(seeds.size(), kExitMatch);
  std::vector<json> states(seeds.size());
  std::vector<std::string> errors(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    RunConfig c = cfg;
    c.seed = seeds[idx];
    try {
      auto r = dispatch(c);
      codes[idx] = r.match ? kExitMatch : kExitMismatch;
      states[idx] = std::move(r.comparable);
    } catch (const tables::DivergenceError& e) {
      codes[idx] = kExitDivergence;
      errors[idx] = e.what();
    } catch (const std::exception& e) {
      codes[idx] = kExitConfig;
      errors[idx] = e.what();
    }
  }

  json runs = json::array();
  std::vector<std::uint64_t> diverging, mismatched;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const bool same = codes[i] == kExitMatch && states[i] == states[0];
    if (!same) diverging.push_back(seeds[i]);
    if (codes[i] != kExitMatch) mismatched.push_back(seeds[i]);
    json entry = {{"seed", seeds[i]}, {"match", codes[i] == kExitMatch}, {"identical", same}};
    if (!errors[i].empty()) entry["error"] = errors[i];
    runs.push_back(entry);
  }
  const bool all_identical = diverging.empty();
  out.summary["runs"] = runs;
  out.summary["all_identical"] = all_identical;
  out.summary["all_match"] = mismatched.empty();
  out.summary["diverging_seeds"] = diverging;
  if (std::any_of(codes.begin(), codes.end(), [](int c) { return c == kExitConfig; })) {
    out.exit_code = kExitConfig;
  } else if (std::any_of(codes.begin(), codes.end(), [](int c) { return c == kExitDivergence; })) {
    out.exit_code = kExitDivergence;
  } else if (!all_identical || !mismatched.empty()) {
    out.exit_code = kExitMismatch;
  }
  return out;
}

namespace {

void add_run_options(CLI::App& app, RunConfig& cfg, std::vector<std::string>& fails,
                     std::vector<std::string>& parts) {
  app.add_option("--workload", cfg.workload, "Workload to run")->check(CLI::IsMember(kWorkloads));
  app.add_option("--input", cfg.input, "DNA input file, one sequence per line");
  app.add_option("-k", cfg.k, "k-mer length")->check(CLI::Range(std::size_t{1}, kmer::kMaxK));
  app.add_option("--threshold", cfg.threshold, "Threshold for kmer_b")->check(CLI::PositiveNumber);
  app.add_option("--workers", cfg.workers, "Initial worker count")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for every random choice");
  app.add_option("--dup-prob", cfg.duplicate_prob, "Per-send duplication probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--reorder-window", cfg.reorder_window, "Extra delivery delay bound in ticks");
  app.add_option("--drop-prob", cfg.drop_prob, "Per-attempt drop probability, below 1");
  app.add_option("--fail", fails, "Worker failure TICK:WORKER (repeatable)");
  app.add_option("--partition", parts, "Partition START[..END]:A-B,... (repeatable)");
  app.add_option("--join", cfg.join_events, "Worker joins at TICK (repeatable)");
  app.add_option("--eps", cfg.epsilon, "Sketch epsilon");
  app.add_option("--delta", cfg.delta, "Sketch delta");
  app.add_option("--tick-cap", cfg.tick_cap, "Ticks before the run is declared divergent");
  app.add_flag("--debug-lose-chunk", cfg.lose_first_chunk)->group("");
  // Consumed by expand_config before parsing; listed here for --help.
  app.add_option("--config")->description("key=value file; command line flags take precedence");
}

// Replaces "--config FILE" with one "--key value" pair per line of FILE,
// skipping keys the command line already sets. Blank lines and lines
// starting with '#' or ';' are ignored.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  auto it = std::find_if(args.begin(), args.end(),
                         [](const std::string& a) { return a == "--config" || a.starts_with("--config="); });
  if (it == args.end()) return args;
  std::string path;
  if (*it == "--config") {
    if (std::next(it) == args.end()) throw ConfigError("--config needs a file");
    path = *std::next(it);
    it = args.erase(it, std::next(it, 2));
  } else {
    path = it->substr(std::string("--config=").size());
    it = args.erase(it);
  }
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);

  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.starts_with("--")) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                                       : a.find('=') - 2));
  }
  std::vector<std::string> injected;
  std::string line;
  for (int n = 1; std::getline(f, line); ++n) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    auto trim = [](std::string x) {
      const auto a = x.find_first_not_of(" \t\r");
      const auto b = x.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") throw ConfigError(path + ":" + std::to_string(n) + ": bad key");
    if (given.contains(key)) continue;
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  // Config options go right after the subcommand name, ahead of the user's.
  const auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
  args.insert(sub == args.end() ? sub : std::next(sub), injected.begin(), injected.end());
  return args;
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    err << "cannot write " << path << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic multi-worker lattice simulator"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> fails, parts;
  std::string events_path, report_path, seeds_text;

  auto* run_cmd = app.add_subcommand("run", "Run one workload and check it against its oracle");
  add_run_options(*run_cmd, cfg, fails, parts);
  run_cmd->add_option("--emit-events", events_path, "Write the event log here");
  run_cmd->add_option("--report", report_path, "Write the JSON report here (stdout otherwise)");

  auto* verify_cmd = app.add_subcommand("verify", "Run one workload over several seeds and compare");
  add_run_options(*verify_cmd, cfg, fails, parts);
  verify_cmd->add_option("--seeds", seeds_text, "Seeds, e.g. 1..25 or 3,5,8")->required();
  verify_cmd->add_option("--report", report_path, "Write the JSON summary here (stdout otherwise)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
    for (const auto& f : fails) cfg.failure_events.push_back(parse_failure(f));
    for (const auto& p : parts) cfg.partition_events.push_back(parse_partition(p));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  if (*run_cmd) {
    auto r = run(cfg);
    if (r.report.contains("error")) err << "error: " << r.report["error"]["message"].get<std::string>() << "\n";
    if (r.exit_code == kExitConfig) err << run_cmd->help();
    if (!events_path.empty()) {
      std::ostringstream s;
      r.log.write(s);
      if (!write_file(events_path, s.str(), err)) return kExitConfig;
    }
    if (report_path.empty()) {
      out << render(r.report);
    } else if (!write_file(report_path, render(r.report), err)) {
      return kExitConfig;
    }
    return r.exit_code;
  }

  std::vector<std::uint64_t> seeds;
  try {
    seeds = parse_seeds(seeds_text);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  auto v = verify(cfg, seeds);
  if (v.summary.contains("error")) err << "error: " << v.summary["error"].get<std::string>() << "\n";
  if (v.exit_code == kExitMismatch) {
    err << "diverging seeds:";
    for (auto s : v.summary["diverging_seeds"]) err << ' ' << s.get<std::uint64_t>();
    err << "\n";
  }
  if (report_path.empty()) {
    out << render(v.summary);
  } else if (!write_file(report_path, render(v.summary), err)) {
    return kExitConfig;
  }
  return v.exit_code;
}

}  // namespace buddi::cli
