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
#include "vfatigue/tsne.h"

namespace vfatigue {
namespace {

void BM_KlGradient(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXd x = bench::Gaussian(n, 10, 6);
  const Eigen::MatrixXd p = ComputeAffinities(x, 30.0).p;
  const Eigen::MatrixXd y = bench::Gaussian(n, 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(KlGradient(p, y));
}
BENCHMARK(BM_KlGradient)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);

// Full 1000-iteration run.
void BM_TsneProject(benchmark::State& state) {
  const Eigen::MatrixXd x = bench::Gaussian(state.range(0), 10, 8);
  TsneConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(TsneProject(x, cfg));
}
BENCHMARK(BM_TsneProject)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vfatigue
