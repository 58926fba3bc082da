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

// Shared-memory kernels. Each has a serial reference and an OpenMP version
// that must produce identical results.

#ifndef BUDDI_KERNELS_HPP_
#define BUDDI_KERNELS_HPP_

#include <string_view>
#include <vector>

#include "buddi/kmer.hpp"
#include "buddi/sketch.hpp"

namespace buddi::kernels {

// Histogram over newline-separated sequences; windows never span lines.
kmer::KmerHistogram count_kmers_serial(std::string_view text, std::size_t k);
kmer::KmerHistogram count_kmers_parallel(std::string_view text, std::size_t k);

// Sketch of k-mer instances tokened by offset.
sketch::SketchMatrix build_sketch_serial(const std::vector<kmer::KmerAt>& items, const sketch::CmsParams& params);
sketch::SketchMatrix build_sketch_parallel(const std::vector<kmer::KmerAt>& items, const sketch::CmsParams& params);

// Every k-mer of newline-separated text with its byte offset in `text`.
std::vector<kmer::KmerAt> kmer_instances(std::string_view text, std::size_t k);

}  // namespace buddi::kernels

#endif  // BUDDI_KERNELS_HPP_
