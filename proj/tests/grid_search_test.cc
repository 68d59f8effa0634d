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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"
#include "vfatigue/error.h"
#include "vfatigue/grid_search.h"

namespace vfatigue {
namespace {

// Two Gaussian blobs spread over `recordings` recordings.
LabeledDataset Blobs(std::uint64_t seed, int per_class, int recordings,
                     double separation) {
  std::mt19937_64 rng(seed);
  LabeledDataset data;
  data.features = testing::RandomMatrix(rng, 2 * per_class, 6);
  for (int i = 0; i < 2 * per_class; ++i) {
    const int label = i % 2;
    data.features(i, 0) += label * separation;
    data.labels.push_back(label);
    data.recording_ids.push_back("r" + std::to_string(i % (2 * recordings) / 2));
    data.times_s.push_back(3.0 * i);
  }
  return data;
}

TEST(HyperGrid, Defaults) {
  const HyperGrid g = HyperGrid::Defaults(192);
  EXPECT_EQ(g.n_pca, (std::vector<Eigen::Index>{32, 64, 128}));
  EXPECT_EQ(g.gamma, (std::vector<double>{1e-5, 1e-4, 1e-3, 1e-2, 1e-1}));
  EXPECT_EQ(g.c, (std::vector<double>{5, 10, 20, 50}));
  EXPECT_EQ(g.folds, 5);
  EXPECT_EQ(HyperGrid::Defaults(768).n_pca.back(), 512);
  EXPECT_EQ(HyperGrid::Defaults(512).n_pca.back(), 512);
  EXPECT_EQ(HyperGrid::Defaults(20).n_pca, (std::vector<Eigen::Index>{16}));
}

TEST(Folds, StratifiedBalance) {
  std::vector<int> labels;
  for (int i = 0; i < 103; ++i) labels.push_back(i < 53 ? 0 : 1);
  const auto fold_of = StratifiedFolds(labels, 2, 5, 9);
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> per(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) ++per[static_cast<std::size_t>(fold_of[i])];
    }
    const auto [lo, hi] = std::minmax_element(per.begin(), per.end());
    EXPECT_LE(*hi - *lo, 1);
  }
  EXPECT_EQ(fold_of, StratifiedFolds(labels, 2, 5, 9));
  EXPECT_NE(fold_of, StratifiedFolds(labels, 2, 5, 10));
}

TEST(Folds, RecordingsStayTogether) {
  std::vector<std::string> ids;
  for (int i = 0; i < 200; ++i) ids.push_back("rec" + std::to_string(i % 10));
  const auto fold_of = RecordingFolds(ids, 5, 3);
  std::map<std::string, std::set<int>> seen;
  std::vector<int> per(5, 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    seen[ids[i]].insert(fold_of[i]);
    ++per[static_cast<std::size_t>(fold_of[i])];
  }
  for (const auto& [id, folds] : seen) EXPECT_EQ(folds.size(), 1u) << id;
  for (int n : per) EXPECT_EQ(n, 40);
}

TEST(GridSearch, SingleCombination) {
  const LabeledDataset data = Blobs(1, 40, 10, 4.0);
  HyperGrid grid{{4}, {0.1}, {10.0}, 5};
  const GridResult r = GridSearchCv(data, grid, {1e-3, 10000, 7, 1});
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.best_index, 0u);
  EXPECT_EQ(r.best().point.n_pca, 4);
  EXPECT_EQ(r.best().fold_accuracy.size(), 5u);
  EXPECT_GT(r.best().mean_accuracy, 0.9);
  EXPECT_EQ(r.scheme, FoldScheme::kRecordings);
}

TEST(GridSearch, DeterministicAcrossThreadCounts) {
  const LabeledDataset data = Blobs(2, 30, 10, 1.5);
  HyperGrid grid{{2, 4}, {0.01, 0.3}, {5.0, 50.0}, 5};
  const GridResult a = GridSearchCv(data, grid, {1e-3, 10000, 3, 1});
  const GridResult b = GridSearchCv(data, grid, {1e-3, 10000, 3, 4});
  EXPECT_EQ(GridResultCsv(a), GridResultCsv(b));
  EXPECT_EQ(a.best_index, b.best_index);
  for (const GridEntry& e : a.entries) {
    EXPECT_LE(e.mean_accuracy, a.best().mean_accuracy);
  }
}

TEST(GridSearch, TieBreakPrefersSimplerModels) {
  GridEntry a{{32, 1e-3, 10.0}, {}, 0.9, true};
  GridEntry b{{64, 1e-5, 5.0}, {}, 0.9, true};
  EXPECT_TRUE(BetterGridEntry(a, b));
  GridEntry c{{32, 1e-2, 5.0}, {}, 0.9, true};
  EXPECT_TRUE(BetterGridEntry(c, a));
  GridEntry d{{32, 1e-5, 5.0}, {}, 0.9, true};
  EXPECT_TRUE(BetterGridEntry(d, c));
  GridEntry e{{512, 1e-1, 50.0}, {}, 0.91, true};
  EXPECT_TRUE(BetterGridEntry(e, d));
}

TEST(GridSearch, FrameFoldsWhenTooFewRecordings) {
  const LabeledDataset data = Blobs(3, 20, 2, 4.0);
  HyperGrid grid{{2}, {0.1}, {10.0}, 5};
  EXPECT_EQ(GridSearchCv(data, grid, {1e-3, 10000, 1, 1}).scheme,
            FoldScheme::kFrames);
}

TEST(GridSearch, Errors) {
  LabeledDataset data = Blobs(4, 3, 3, 4.0);
  HyperGrid grid{{2}, {0.1}, {10.0}, 5};
  try {
    GridSearchCv(data, grid, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewSamples);
  }
  LabeledDataset one = Blobs(4, 20, 4, 4.0);
  std::fill(one.labels.begin(), one.labels.end(), 0);
  try {
    GridSearchCv(one, grid, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateLabels);
  }
  HyperGrid wide{{7}, {0.1}, {10.0}, 5};
  try {
    GridSearchCv(Blobs(4, 20, 10, 4.0), wide, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadComponentCount);
  }
}

TEST(GridSearch, CsvShape) {
  const LabeledDataset data = Blobs(5, 20, 10, 4.0);
  HyperGrid grid{{2, 3}, {0.1}, {5.0, 10.0}, 5};
  const std::string csv = GridResultCsv(GridSearchCv(data, grid, {}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "n_pca,gamma,c,mean_accuracy,fold_1,fold_2,fold_3,fold_4,fold_5,"
            "converged");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

}  // namespace
}  // namespace vfatigue
