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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "vfatigue/error.h"
#include "vfatigue/tsne.h"

namespace vfatigue {
namespace {

using testing::RandomMatrix;

// Two 64-D clusters, 50 points each, centers 20 sigma apart.
Eigen::MatrixXd TwoClusters(std::uint64_t seed, std::vector<int>* labels) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd x = RandomMatrix(rng, 100, 64);
  Eigen::VectorXd dir = RandomMatrix(rng, 64, 1);
  dir.normalize();
  labels->assign(100, 0);
  for (int i = 50; i < 100; ++i) {
    x.row(i) += 20.0 * dir.transpose();
    (*labels)[static_cast<std::size_t>(i)] = 1;
  }
  return x;
}

TEST(Affinities, PerplexityCalibration) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = RandomMatrix(rng, 300, 10);
  const Affinities a = ComputeAffinities(x, 30.0);
  for (Eigen::Index i = 0; i < 300; ++i) {
    EXPECT_NEAR(a.entropy_bits(i), std::log2(30.0), 1e-4);
    const double perp = std::exp2(a.entropy_bits(i));
    EXPECT_GE(perp, 30.0 * (1 - 1e-4));
    EXPECT_LE(perp, 30.0 * (1 + 1e-4));
  }
}

TEST(Affinities, ConditionalEntropyRecomputed) {
  // Recompute each row's entropy from beta alone.
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd x = RandomMatrix(rng, 40, 5);
  const Affinities a = ComputeAffinities(x, 8.0);
  for (Eigen::Index i = 0; i < 40; ++i) {
    std::vector<double> w;
    double sum = 0.0;
    for (Eigen::Index j = 0; j < 40; ++j) {
      if (j == i) continue;
      w.push_back(std::exp(-a.beta(i) * (x.row(i) - x.row(j)).squaredNorm()));
      sum += w.back();
    }
    double h = 0.0;
    for (double v : w) {
      const double p = v / sum;
      if (p > 0) h -= p * std::log2(p);
    }
    EXPECT_NEAR(h, std::log2(8.0), 1e-4);
  }
}

TEST(Affinities, JointIsSymmetricAndNormalized) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = RandomMatrix(rng, 60, 7);
  const Affinities a = ComputeAffinities(x, 10.0);
  EXPECT_LE((a.p - a.p.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(a.p.sum(), 1.0, 1e-9);
  EXPECT_GE(a.p.minCoeff(), 0.0);
  EXPECT_EQ(a.p.diagonal().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Affinities, RotationInvariant) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x = RandomMatrix(rng, 50, 6);
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(RandomMatrix(rng, 6, 6))
          .householderQ();
  const Affinities a = ComputeAffinities(x, 10.0);
  const Affinities b = ComputeAffinities(x * q, 10.0);
  EXPECT_LE((a.p - b.p).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Gradient, SumsToZero) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = RandomMatrix(rng, 80, 6);
  const Affinities a = ComputeAffinities(x, 15.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd y = RandomMatrix(rng, 80, 2, 3.0);
    EXPECT_LE(KlGradient(a.p, y).colwise().sum().cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = RandomMatrix(rng, 20, 4);
  const Affinities a = ComputeAffinities(x, 5.0);
  Eigen::MatrixXd y = RandomMatrix(rng, 20, 2);
  const Eigen::MatrixXd g = KlGradient(a.p, y);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < 20; i += 3) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      Eigen::MatrixXd up = y;
      Eigen::MatrixXd down = y;
      up(i, c) += h;
      down(i, c) -= h;
      const double numeric =
          (KlDivergence(a.p, up) - KlDivergence(a.p, down)) / (2 * h);
      EXPECT_NEAR(g(i, c), numeric, 1e-6);
    }
  }
}

TEST(Tsne, SeparatesClustersAndDecreasesKl) {
  std::vector<int> labels;
  const Eigen::MatrixXd x = TwoClusters(7, &labels);
  TsneConfig cfg;
  cfg.seed = 7;
  const TsneResult r = TsneProject(x, cfg);
  EXPECT_LE(r.kl_final, r.kl_initial);
  EXPECT_GT(testing::Silhouette(r.embedding, labels, 2), 0.5);
  EXPECT_LE(r.embedding.colwise().mean().cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Tsne, DuplicatesCollapse) {
  std::vector<int> labels;
  Eigen::MatrixXd x = TwoClusters(8, &labels);
  x.row(1) = x.row(0);
  x.row(61) = x.row(60);
  TsneConfig cfg;
  cfg.seed = 8;
  const Eigen::MatrixXd y = TsneProject(x, cfg).embedding;
  double inter = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 50; ++i) {
    for (int j = 50; j < 100; ++j) inter = std::min(inter, (y.row(i) - y.row(j)).norm());
  }
  EXPECT_LE((y.row(0) - y.row(1)).norm(), inter / 10.0);
  EXPECT_LE((y.row(60) - y.row(61)).norm(), inter / 10.0);
}

TEST(Tsne, DeterministicUnderSeed) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd x = RandomMatrix(rng, 40, 5);
  TsneConfig cfg;
  cfg.perplexity = 5.0;
  cfg.iterations = 300;
  cfg.seed = 3;
  EXPECT_EQ(TsneProject(x, cfg).embedding, TsneProject(x, cfg).embedding);
}

TEST(Tsne, Errors) {
  std::mt19937_64 rng(10);
  TsneConfig cfg;
  try {
    TsneProject(RandomMatrix(rng, 3, 2), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPoints);
  }
  try {
    TsneProject(RandomMatrix(rng, 91, 2), cfg);  // needs n > 91
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPerplexityTooLarge);
  }
  cfg.iterations = 0;
  EXPECT_NO_THROW(TsneProject(RandomMatrix(rng, 92, 2), cfg));
}

}  // namespace
}  // namespace vfatigue
