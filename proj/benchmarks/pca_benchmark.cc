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
#include "vfatigue/pca.h"

namespace vfatigue {
namespace {

// Rows are frames, width 192; argument is the number of components.
void BM_FitPca(benchmark::State& state) {
  const Eigen::MatrixXd x = bench::Gaussian(2400, 192, 3);
  for (auto _ : state) benchmark::DoNotOptimize(FitPca(x, state.range(0)));
}
BENCHMARK(BM_FitPca)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PcaTransform(benchmark::State& state) {
  const Eigen::MatrixXd x = bench::Gaussian(2400, 192, 4);
  const PcaModel model = FitPca(x, 32);
  for (auto _ : state) benchmark::DoNotOptimize(model.Transform(x));
}
BENCHMARK(BM_PcaTransform)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vfatigue
