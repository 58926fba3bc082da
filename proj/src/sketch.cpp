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

#include "buddi/sketch.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "buddi/hash.hpp"
#include "buddi/ingest.hpp"
#include "buddi/random.hpp"
#include "buddi/runtime.hpp"

namespace buddi::sketch {

void CmsParams::validate() const {
  if (h < 1 || m < 1) throw std::invalid_argument("sketch needs h >= 1 and m >= 1");
  if (seeds.size() != h) throw std::invalid_argument("sketch needs one seed per row");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("sketch row seeds must be distinct");
  }
}

CmsParams choose_params(double epsilon, double delta, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::out_of_range("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::out_of_range("delta must lie in (0, 1)");
  CmsParams p;
  p.m = static_cast<std::uint32_t>(std::ceil(std::numbers::e / epsilon));
  p.h = static_cast<std::uint32_t>(std::max(1.0, std::ceil(std::log(1.0 / delta))));
  Rng rng(seed);
  std::set<std::uint64_t> used;
  while (p.seeds.size() < p.h) {
    const auto s = rng.next();
    if (used.insert(s).second) p.seeds.push_back(s);
  }
  return p;
}

SketchMatrix::SketchMatrix(CmsParams params) : params_(std::move(params)) { params_.validate(); }

std::uint64_t SketchMatrix::index(std::uint32_t row, std::uint32_t col) const {
  if (row >= params_.h || col >= params_.m) throw std::out_of_range("sketch cell out of range");
  return static_cast<std::uint64_t>(row) * params_.m + col;
}

std::uint32_t SketchMatrix::column(std::uint32_t row, std::string_view x) const {
  return static_cast<std::uint32_t>(hash_bytes(x, params_.seeds.at(row)) % params_.m);
}

bool SketchMatrix::insert(std::string_view x, std::uint64_t token) {
  bool grew = false;
  for (std::uint32_t r = 0; r < params_.h; ++r) grew |= insert_cell(r, column(r, x), token);
  return grew;
}

bool SketchMatrix::insert_cell(std::uint32_t row, std::uint32_t col, std::uint64_t token) {
  return cells_[index(row, col)].insert(token);
}

const lattice::LSet<std::uint64_t>* SketchMatrix::cell(std::uint32_t row, std::uint32_t col) const {
  auto it = cells_.find(index(row, col));
  return it == cells_.end() ? nullptr : &it->second;
}

std::uint64_t SketchMatrix::cell_size(std::uint32_t row, std::uint32_t col) const {
  const auto* c = cell(row, col);
  return c == nullptr ? 0 : c->size();
}

std::uint64_t SketchMatrix::query(std::string_view x) const {
  std::uint64_t best = UINT64_MAX;
  for (std::uint32_t r = 0; r < params_.h; ++r) best = std::min(best, cell_size(r, column(r, x)));
  return best;
}

bool SketchMatrix::join(const SketchMatrix& other) {
  if (params_ != other.params_) {
    // The default-constructed matrix acts as a parameterless bottom.
    if (params_.seeds.empty() && cells_.empty()) {
      params_ = other.params_;
    } else if (other.params_.seeds.empty() && other.cells_.empty()) {
      return false;
    } else {
      throw lattice::TypeMismatch("cannot merge sketches with different parameters");
    }
  }
  bool grew = false;
  for (const auto& [i, ids] : other.cells_) grew |= cells_[i].join(ids);
  return grew;
}

std::vector<std::uint64_t> SketchMatrix::row_sums() const {
  std::vector<std::uint64_t> sums(params_.h, 0);
  for (const auto& [i, ids] : cells_) sums[i / params_.m] += ids.size();
  return sums;
}

std::uint64_t SketchMatrix::stored_ids() const {
  std::uint64_t n = 0;
  for (const auto& [i, ids] : cells_) n += ids.size();
  return n;
}

nlohmann::json SketchMatrix::dump() const {
  std::vector<std::uint64_t> flat(static_cast<std::size_t>(params_.h) * params_.m, 0);
  for (const auto& [i, ids] : cells_) flat[i] = ids.size();
  return {{"h", params_.h}, {"m", params_.m}, {"seeds", params_.seeds}, {"cells", flat}};
}

std::string SketchMatrix::encode() const {
  std::string out;
  for (const auto& [i, ids] : cells_) {
    const auto row = std::to_string(i / params_.m) + ' ' + std::to_string(i % params_.m) + ' ';
    for (auto id : ids.elems()) out += row + std::to_string(id) + ';';
  }
  return out;
}

namespace {
std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad sketch encoding");
  return v;
}
}  // namespace

SketchMatrix SketchMatrix::decode(const CmsParams& params, std::string_view text) {
  SketchMatrix out(params);
  while (!text.empty()) {
    const auto end = text.find(';');
    std::string_view item = text.substr(0, end);
    const auto a = item.find(' ');
    const auto b = item.find(' ', a + 1);
    if (a == std::string_view::npos || b == std::string_view::npos) throw std::invalid_argument("bad sketch encoding");
    out.insert_cell(static_cast<std::uint32_t>(parse_u64(item.substr(0, a))),
                    static_cast<std::uint32_t>(parse_u64(item.substr(a + 1, b - a - 1))),
                    parse_u64(item.substr(b + 1)));
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return out;
}

bool Design2Run::converged() const {
  for (const auto& [w, r] : replicas) {
    if (!(r == replicas.begin()->second)) return false;
  }
  return true;
}

SketchMatrix Design1Run::assembled() const {
  SketchMatrix out(params);
  for (const auto& [w, s] : slabs) out.join(s);
  return out;
}

tables::PartitionPlan column_slabs(std::uint32_t m, const std::vector<WorkerId>& workers) {
  std::vector<tables::Value> bounds;
  const auto p = static_cast<std::uint64_t>(workers.size());
  for (std::uint64_t i = 1; i < p; ++i) bounds.emplace_back(static_cast<std::int64_t>((m * i + p - 1) / p));
  return tables::PartitionPlan::range("col", std::move(bounds), workers);
}

namespace {

using runtime::Declarations;
using runtime::Lifetime;
using runtime::WorkerContext;

// Chunked k-mer ingestion shared by both layouts.
class SketchProgram : public runtime::Program {
 public:
  SketchProgram(const dispenser::ByteSource& source, const CmsParams& params, const kmer::WorkloadConfig& cfg)
      : params_(params), ingest_(source, cfg.k, cfg.ingest, cfg.run.workers), storage_(cfg.run.workers) {
    params_.validate();
  }

  void declare(Declarations& d) const override { d.collection("sketch", SketchMatrix(params_), Lifetime::kPersistent); }
  void on_register(runtime::Runtime& /*rt*/, WorkerId w, bool /*mid_run*/) override { ingest_.on_register(w); }
  void on_fail(runtime::Runtime& rt, WorkerId w) override { ingest_.on_fail(rt, w); }
  bool idle(const runtime::Runtime& /*rt*/) const override { return ingest_.idle(); }

 protected:
  CmsParams params_;
  kmer::Ingestor ingest_;
  std::size_t storage_;
};

class ReplicatedProgram : public SketchProgram {
 public:
  using SketchProgram::SketchProgram;

  void on_register(runtime::Runtime& rt, WorkerId w, bool mid_run) override {
    SketchProgram::on_register(rt, w, mid_run);
    if (!mid_run) return;
    for (WorkerId v : rt.workers()) {
      if (v == w) continue;
      const auto& state = rt.get<SketchMatrix>(v, "sketch");
      rt.sim().send(runtime::Envelope{rt.ids().fresh(), rt.ids().fresh(), v, w, "state", state.encode(), 0});
    }
  }

  void on_tick(WorkerContext& ctx) override {
    ingest_.on_tick(ctx, [this](WorkerContext& c, const kmer::KmerAt& km, std::uint64_t use) {
      c.send(kmer::owner_of(km.seq, storage_), "kmer", km.seq, km.offset, use);
    });
  }

  void on_deliver(WorkerContext& ctx, const runtime::Envelope& env) override {
    if (env.channel == "kmer") {
      SketchMatrix delta(params_);
      delta.insert(env.payload, env.token_id);
      if (!ctx.merge("sketch", delta)) return;
      const auto text = delta.encode();
      for (WorkerId v : ctx.runtime().workers()) {
        if (v != ctx.self()) ctx.send(v, "delta", text, env.token_id, env.use_id);
      }
    } else if (env.channel == "delta" || env.channel == "state") {
      ctx.merge("sketch", SketchMatrix::decode(params_, env.payload));
    }
  }
};

class SlabProgram : public SketchProgram {
 public:
  SlabProgram(const dispenser::ByteSource& source, const CmsParams& params, const kmer::WorkloadConfig& cfg,
              tables::PartitionPlan plan)
      : SketchProgram(source, params, cfg), plan_(std::move(plan)), shape_(params) {}

  void on_tick(WorkerContext& ctx) override {
    ingest_.on_tick(ctx, [this](WorkerContext& c, const kmer::KmerAt& km, std::uint64_t use) {
      for (std::uint32_t r = 0; r < params_.h; ++r) {
        const auto col = shape_.column(r, km.seq);
        c.send(plan_.owner_of(static_cast<std::int64_t>(col)), "cell",
               std::to_string(r) + ' ' + std::to_string(col), km.offset, use);
      }
    });
  }

  void on_deliver(WorkerContext& ctx, const runtime::Envelope& env) override {
    if (env.channel != "cell") return;
    ctx.merge("sketch", SketchMatrix::decode(params_, env.payload + ' ' + std::to_string(env.token_id)));
  }

 private:
  tables::PartitionPlan plan_;
  SketchMatrix shape_;  // only for column()
};

void check(const kmer::WorkloadConfig& cfg) {
  if (cfg.run.workers < 1) throw std::invalid_argument("at least one worker is required");
}

std::vector<WorkerId> first_workers(std::size_t n) {
  std::vector<WorkerId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(worker(static_cast<std::uint32_t>(i)));
  return out;
}

}  // namespace

Design2Run design2_run(const dispenser::ByteSource& source, const CmsParams& params, const kmer::WorkloadConfig& cfg) {
  check(cfg);
  ReplicatedProgram program(source, params, cfg);
  runtime::Runtime rt(program, cfg.schedule, cfg.run);
  Design2Run out;
  out.params = params;
  out.stats = rt.run_to_quiescence();
  for (WorkerId w : rt.workers()) out.replicas.emplace(w, rt.get<SketchMatrix>(w, "sketch"));
  out.log = rt.sim().log();
  return out;
}

Design1Run design1_run(const dispenser::ByteSource& source, const CmsParams& params, const kmer::WorkloadConfig& cfg) {
  check(cfg);
  auto plan = column_slabs(params.m, first_workers(cfg.run.workers));
  SlabProgram program(source, params, cfg, plan);
  runtime::Runtime rt(program, cfg.schedule, cfg.run);
  Design1Run out;
  out.params = params;
  out.plan = std::move(plan);
  out.stats = rt.run_to_quiescence();
  for (WorkerId w : out.plan.workers) out.slabs.emplace(w, rt.get<SketchMatrix>(w, "sketch"));
  out.log = rt.sim().log();
  return out;
}

Tristate<std::uint64_t> design1_query(const Design1Run& run, std::string_view x, WorkerId at,
                                      const NetworkCondition& net, runtime::EventLog* log) {
  const SketchMatrix shape(run.params);
  std::uint64_t best = UINT64_MAX;
  bool unreachable = false;
  for (std::uint32_t r = 0; r < run.params.h; ++r) {
    const auto col = shape.column(r, x);
    const WorkerId owner = run.plan.owner_of(static_cast<std::int64_t>(col));
    if (owner != at) {
      if (log != nullptr) log->record({0, "gather", owner, at, r, col});
      if (!net.reachable(at, owner)) {
        unreachable = true;
        continue;
      }
    }
    best = std::min(best, run.slabs.at(owner).cell_size(r, col));
  }
  if (unreachable) return kIdk;
  return best;
}

}  // namespace buddi::sketch
