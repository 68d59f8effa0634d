// Copyright 2026 The vfatigue Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "bench_util.h"
#include "vfatigue/preprocess.h"

namespace vfatigue {
namespace {

// One hour of 3 s frames at width 192; window in frames.
void BM_SmoothFrames(benchmark::State& state) {
  const EmbeddingSequence seq("b", "m", 0, 3.0, 0.0, bench::Gaussian(1200, 192, 1));
  const Eigen::Index w = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(SmoothFrames(seq, w));
  state.SetItemsProcessed(state.iterations() * seq.num_frames());
}
BENCHMARK(BM_SmoothFrames)->Arg(1)->Arg(10)->Arg(20)->Arg(200);

void BM_NormalizeMean(benchmark::State& state) {
  const EmbeddingSequence seq("b", "m", 0, 3.0, 0.0, bench::Gaussian(1200, 192, 2));
  for (auto _ : state) benchmark::DoNotOptimize(Normalize(seq, ComputePrototype(seq)));
}
BENCHMARK(BM_NormalizeMean);

}  // namespace
}  // namespace vfatigue
