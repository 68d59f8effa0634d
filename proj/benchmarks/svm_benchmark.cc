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

#include <vector>

#include "bench_util.h"
#include "vfatigue/svm.h"

namespace vfatigue {
namespace {

// Two overlapping Gaussian classes in 32 dimensions; argument is M.
void BM_TrainSvm(benchmark::State& state) {
  const Eigen::Index m = state.range(0);
  Eigen::MatrixXd x = bench::Gaussian(m, 32, 5);
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);
    if (i % 2) x(i, 0) += 1.5;
  }
  SvmParams params;
  params.gamma = 1.0 / 32.0;
  params.c = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(TrainSvm(x, labels, params));
}
BENCHMARK(BM_TrainSvm)->Arg(200)->Arg(800)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace vfatigue
