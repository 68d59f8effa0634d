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
#include "vfatigue/pca.h"

namespace vfatigue {
namespace {

using testing::RandomMatrix;

// Oracle: eigendecomposition of the explicitly formed covariance.
struct CovarianceEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns, matching order
};

CovarianceEigen OracleEigen(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

TEST(Pca, MatchesCovarianceEigendecomposition) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 2 + trial % 7;
    const Eigen::Index m = d + 1 + trial % 4;
    // Distinct spectra keep eigenvectors well defined.
    Eigen::MatrixXd x = RandomMatrix(rng, m, d);
    for (Eigen::Index j = 0; j < d; ++j) x.col(j) *= std::pow(1.7, double(j));
    const auto oracle = OracleEigen(x);
    const Eigen::Index k = 1 + trial % d;
    const PcaModel model = FitPca(x, k);
    ASSERT_EQ(model.num_components(), k);
    EXPECT_LE((model.mean() - x.colwise().mean().transpose()).norm(), 1e-12);
    for (Eigen::Index i = 0; i < k; ++i) {
      EXPECT_NEAR(model.explained_variance()(i), oracle.values(i),
                  1e-8 * std::max(1.0, oracle.values(0)));
      const Eigen::VectorXd got = model.components().row(i).transpose();
      const Eigen::VectorXd want = oracle.vectors.col(i);
      const double sign = got.dot(want) >= 0.0 ? 1.0 : -1.0;
      EXPECT_LE((got - sign * want).cwiseAbs().maxCoeff(), 1e-8);
    }
    const Eigen::MatrixXd gram =
        model.components() * model.components().transpose();
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff(),
              1e-8);
  }
}

TEST(Pca, CollinearPoints) {
  Eigen::MatrixXd x(5, 2);
  const double t[] = {-2.0, -0.5, 0.0, 1.0, 4.0};
  for (int i = 0; i < 5; ++i) x.row(i) << t[i], t[i];
  const PcaModel model = FitPca(x, 1);
  const Eigen::Vector2d axis = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(model.components().row(0).dot(axis)), 1.0, 1e-12);
  // Variance along the line of the signed distances t*sqrt(2).
  double mean_t = 0.0;
  for (double v : t) mean_t += v / 5.0;
  double var = 0.0;
  for (double v : t) var += 2.0 * (v - mean_t) * (v - mean_t);
  var /= 4.0;
  EXPECT_NEAR(model.explained_variance()(0), var, 1e-12);
  const Eigen::MatrixXd z = model.Transform(x);
  const double sign = model.components()(0, 0) > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(z(i, 0), sign * (t[i] - mean_t) * std::sqrt(2.0), 1e-12);
  }
  EXPECT_LE((model.Reconstruct(z) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pca, SignConventionAndZeroMean) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd x = RandomMatrix(rng, 30, 6);
  x.rowwise() -= x.colwise().mean();
  const PcaModel model = FitPca(x, 6);
  EXPECT_LE(model.mean().cwiseAbs().maxCoeff(), 1e-15);
  for (Eigen::Index i = 0; i < 6; ++i) {
    Eigen::Index arg = 0;
    model.components().row(i).cwiseAbs().maxCoeff(&arg);
    EXPECT_GE(model.components()(i, arg), 0.0);
  }
  for (Eigen::Index i = 1; i < 6; ++i) {
    EXPECT_GE(model.explained_variance()(i - 1), model.explained_variance()(i));
  }
}

TEST(Pca, TransformOfMeanIsZero) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x = RandomMatrix(rng, 12, 5);
  const PcaModel model = FitPca(x, 3);
  EXPECT_LE(model.Transform(model.mean().transpose()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Pca, FullRankReconstructionAndTrace) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = RandomMatrix(rng, 20, 7, 3.0);
  const PcaModel model = FitPca(x, 7);
  EXPECT_LE((model.Reconstruct(model.Transform(x)) - x).cwiseAbs().maxCoeff(),
            1e-8);
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  const double trace = centered.squaredNorm() / 19.0;
  EXPECT_NEAR(model.explained_variance().sum(), trace, 1e-8);
}

TEST(Pca, ProjectorReproducesSpan) {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd x = RandomMatrix(rng, 15, 8);
  const PcaModel model = FitPca(x, 4);
  const Eigen::MatrixXd c = model.components();
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd v = c.transpose() * RandomMatrix(rng, 4, 1);
    EXPECT_LE((c.transpose() * (c * v) - v).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Pca, ReconstructionErrorNonincreasingInK) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd x = RandomMatrix(rng, 25, 9);
  double previous = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 1; k <= 9; ++k) {
    const PcaModel model = FitPca(x, k);
    const double err = (model.Reconstruct(model.Transform(x)) - x).squaredNorm();
    EXPECT_LE(err, previous + 1e-9);
    previous = err;
  }
}

TEST(Pca, TruncatedMatchesDirectFit) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = RandomMatrix(rng, 25, 9);
  const PcaModel full = FitPca(x, 9);
  const PcaModel direct = FitPca(x, 3);
  const PcaModel cut = full.Truncated(3);
  EXPECT_LE((cut.components() - direct.components()).cwiseAbs().maxCoeff(),
            1e-12);
  EXPECT_EQ(cut.explained_variance(), direct.explained_variance());
}

TEST(Pca, RankDeficientPadsWithZeroVariance) {
  std::mt19937_64 rng(9);
  // Three points span a plane in 6-D: k = 3 needs one completion axis.
  const Eigen::MatrixXd x = RandomMatrix(rng, 3, 6);
  const PcaModel model = FitPca(x, 3);
  EXPECT_NEAR(model.explained_variance()(2), 0.0, 1e-12);
  const Eigen::MatrixXd gram =
      model.components() * model.components().transpose();
  EXPECT_LE((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Pca, Errors) {
  std::mt19937_64 rng(10);
  const Eigen::MatrixXd x = RandomMatrix(rng, 5, 3);
  for (Eigen::Index k : {0, 4}) {
    try {
      FitPca(x, k);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadComponentCount);
    }
  }
  try {
    FitPca(x.topRows(1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
  const PcaModel model = FitPca(x, 2);
  try {
    model.Transform(RandomMatrix(rng, 2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimMismatch);
  }
}

TEST(Pca, SaveLoadRoundTrip) {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd x = RandomMatrix(rng, 40, 10);
  const PcaModel model = FitPca(x, 4);
  const std::string dir = testing::TempDir("pca_io");
  SavePca(model, dir + "/pca.emb", dir + "/pca.json");
  const PcaModel back = LoadPca(dir + "/pca.emb", dir + "/pca.json");
  ASSERT_EQ(back.num_components(), 4);
  // Stored as f32 on disk.
  EXPECT_LE((back.components() - model.components()).cwiseAbs().maxCoeff(),
            1e-6);
  EXPECT_LE((back.mean() - model.mean()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE((back.explained_variance() - model.explained_variance())
                .cwiseAbs()
                .maxCoeff(),
            1e-9);
}

}  // namespace
}  // namespace vfatigue
