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

#ifndef VFATIGUE_GRID_SEARCH_H_
#define VFATIGUE_GRID_SEARCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vfatigue/types.h"

namespace vfatigue {

struct HyperGrid {
  std::vector<Eigen::Index> n_pca;
  std::vector<double> gamma;
  std::vector<double> c;
  int folds = 5;

  // n_pca = {2^k | k = 5..floor(log2 dim)}, gamma = {1e-5, ..., 1e-1},
  // c = {5, 10, 20, 50}. For dim < 32 the component set falls back to the
  // largest power of two <= dim.
  static HyperGrid Defaults(Eigen::Index dim);

  void Validate() const;
};

struct GridPoint {
  Eigen::Index n_pca = 0;
  double gamma = 0.0;
  double c = 0.0;
};

struct GridEntry {
  GridPoint point;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  // False if any fold's solver exhausted its iteration budget.
  bool converged = true;
};

// kRecordings keeps every row of a recording in one fold, so overlapping
// smoothing windows cannot leak between the training and held-out parts.
// kAuto picks kRecordings when every present class spans >= folds
// recordings, else kFrames.
enum class FoldScheme { kAuto, kFrames, kRecordings };

std::string FoldSchemeName(FoldScheme scheme);

struct GridResult {
  std::vector<GridEntry> entries;
  FoldScheme scheme = FoldScheme::kFrames;  // the scheme actually used
  std::size_t best_index = 0;
  // Number of entries sharing the best mean accuracy; the winner among them
  // has the smallest n_pca, then the smallest c, then the smallest gamma.
  std::size_t tied_at_best = 1;

  const GridEntry& best() const { return entries[best_index]; }
};

struct GridSearchOptions {
  double tol = 1e-3;
  long max_passes = 10000;
  std::uint64_t seed = 0;
  // 0 picks std::thread::hardware_concurrency().
  unsigned num_threads = 0;
  FoldScheme scheme = FoldScheme::kAuto;
};

// Fold index per row. Each class's rows are shuffled with the seed and dealt
// round-robin, so every fold keeps the class ratios.
std::vector<int> StratifiedFolds(const std::vector<int>& labels,
                                 int num_classes, int folds,
                                 std::uint64_t seed);

// Shuffles the distinct recordings (seeded) and deals them round-robin.
std::vector<int> RecordingFolds(const std::vector<std::string>& recording_ids,
                                int folds, std::uint64_t seed);

// For each (n_pca, gamma, c): per fold, fit PCA on the fold's training rows,
// project both parts, train the (one-vs-one) RBF SVM and score held-out
// accuracy. Returns the mean accuracy per combination and the best one.
// Throws kTooFewSamples when a class has fewer rows than folds.
GridResult GridSearchCv(const LabeledDataset& data, const HyperGrid& grid,
                        const GridSearchOptions& options);

// One line per combination: n_pca,gamma,c,mean_accuracy,fold_1..fold_k,
// converged.
std::string GridResultCsv(const GridResult& result);

// Best-entry ordering: higher accuracy, then smaller n_pca, c, gamma.
bool BetterGridEntry(const GridEntry& a, const GridEntry& b);

}  // namespace vfatigue

#endif  // VFATIGUE_GRID_SEARCH_H_
