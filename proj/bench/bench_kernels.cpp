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

// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <string>

#include "buddi/kernels.hpp"
#include "buddi/random.hpp"
#include "buddi/sketch.hpp"

namespace {

std::string corpus(std::size_t bases) {
  buddi::Rng rng(7);
  std::string out;
  out.reserve(bases + bases / 100);
  for (std::size_t i = 0; i < bases; ++i) {
    out += "ACGT"[rng.below(4)];
    if (i % 100 == 99) out += '\n';
  }
  return out;
}

void BM_CountSerial(benchmark::State& state) {
  const auto text = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(buddi::kernels::count_kmers_serial(text, 12));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}

void BM_CountParallel(benchmark::State& state) {
  const auto text = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(buddi::kernels::count_kmers_parallel(text, 12));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}

void BM_SketchSerial(benchmark::State& state) {
  const auto items = buddi::kernels::kmer_instances(corpus(static_cast<std::size_t>(state.range(0))), 12);
  const auto params = buddi::sketch::choose_params(0.01, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(buddi::kernels::build_sketch_serial(items, params));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * items.size()));
}

void BM_SketchParallel(benchmark::State& state) {
  const auto items = buddi::kernels::kmer_instances(corpus(static_cast<std::size_t>(state.range(0))), 12);
  const auto params = buddi::sketch::choose_params(0.01, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(buddi::kernels::build_sketch_parallel(items, params));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * items.size()));
}

}  // namespace

BENCHMARK(BM_CountSerial)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SketchSerial)->Arg(1 << 16)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SketchParallel)->Arg(1 << 16)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
