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

#ifndef VFATIGUE_BENCHMARKS_BENCH_UTIL_H_
#define VFATIGUE_BENCHMARKS_BENCH_UTIL_H_

#include <random>

#include <Eigen/Dense>

namespace vfatigue::bench {

inline Eigen::MatrixXd Gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return dist(rng); });
}

}  // namespace vfatigue::bench

#endif  // VFATIGUE_BENCHMARKS_BENCH_UTIL_H_
