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

#include "vfatigue/grid_search.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "vfatigue/error.h"
#include "vfatigue/pca.h"
#include "vfatigue/svm.h"

namespace vfatigue {

namespace {

// Accuracies of every (gamma, c) combination for one fold at one n_pca,
// indexed [gamma][c].
struct FoldTask {
  int fold = 0;
  std::size_t pca_index = 0;
  std::vector<std::vector<double>> accuracy;
  std::vector<std::vector<bool>> converged;
};

struct PairBlock {
  int a = 0;
  int b = 0;
  std::vector<Eigen::Index> rows;  // indices into the fold's training rows
  Eigen::VectorXd y_sign;
};

void RunFoldTask(const LabeledDataset& data, const std::vector<int>& fold_of,
                 const HyperGrid& grid, const GridSearchOptions& options,
                 FoldTask* task) {
  std::vector<Eigen::Index> train_rows;
  std::vector<Eigen::Index> test_rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    (fold_of[i] == task->fold ? test_rows : train_rows)
        .push_back(static_cast<Eigen::Index>(i));
  }
  const Eigen::MatrixXd x_train = data.features(train_rows, Eigen::all);
  const Eigen::MatrixXd x_test = data.features(test_rows, Eigen::all);
  const Eigen::Index n_pca = grid.n_pca[task->pca_index];

  // PCA is fit on this fold's training rows only.
  const PcaModel pca = FitPca(x_train, n_pca);
  const Eigen::MatrixXd z_train = pca.Transform(x_train);
  const Eigen::MatrixXd z_test = pca.Transform(x_test);
  Eigen::MatrixXd d_train = SquaredDistances(z_train, z_train);
  d_train.diagonal().setZero();
  const Eigen::MatrixXd d_test = SquaredDistances(z_test, z_train);

  std::vector<PairBlock> blocks;
  for (const auto& [a, b] : OvoPairs(data.num_classes)) {
    PairBlock block{a, b, {}, {}};
    std::vector<double> y;
    for (std::size_t k = 0; k < train_rows.size(); ++k) {
      const int label = data.labels[static_cast<std::size_t>(train_rows[k])];
      if (label == a || label == b) {
        block.rows.push_back(static_cast<Eigen::Index>(k));
        y.push_back(label == b ? 1.0 : -1.0);
      }
    }
    block.y_sign = Eigen::Map<Eigen::VectorXd>(y.data(),
                                               static_cast<Eigen::Index>(y.size()));
    blocks.push_back(std::move(block));
  }
  const bool whole = blocks.size() == 1 &&
                     blocks[0].rows.size() == train_rows.size();

  task->accuracy.assign(grid.gamma.size(),
                        std::vector<double>(grid.c.size(), 0.0));
  task->converged.assign(grid.gamma.size(),
                         std::vector<bool>(grid.c.size(), true));
  for (std::size_t g = 0; g < grid.gamma.size(); ++g) {
    const double gamma = grid.gamma[g];
    const Eigen::MatrixXd k_test = (-gamma * d_test.array()).exp().matrix();
    std::vector<Eigen::MatrixXd> k_blocks;
    if (whole) {
      k_blocks.push_back((-gamma * d_train.array()).exp().matrix());
    } else {
      for (const PairBlock& block : blocks) {
        k_blocks.push_back(
            (-gamma * d_train(block.rows, block.rows).array()).exp().matrix());
      }
    }
    for (std::size_t ci = 0; ci < grid.c.size(); ++ci) {
      Eigen::MatrixXd decisions(x_test.rows(),
                                static_cast<Eigen::Index>(blocks.size()));
      for (std::size_t p = 0; p < blocks.size(); ++p) {
        const PairBlock& block = blocks[p];
        const DualSolution sol = SolveSvmDual(
            k_blocks[p], block.y_sign, grid.c[ci], options.tol,
            options.max_passes * static_cast<long>(block.rows.size()));
        if (!sol.converged) task->converged[g][ci] = false;
        const Eigen::VectorXd coef = sol.alpha.cwiseProduct(block.y_sign);
        Eigen::VectorXd f =
            whole ? Eigen::VectorXd(k_test * coef)
                  : Eigen::VectorXd(k_test(Eigen::all, block.rows) * coef);
        decisions.col(static_cast<Eigen::Index>(p)) = f.array() + sol.bias;
      }
      const std::vector<int> predicted = OvoVote(decisions, data.num_classes);
      Eigen::Index correct = 0;
      for (std::size_t k = 0; k < test_rows.size(); ++k) {
        if (predicted[k] ==
            data.labels[static_cast<std::size_t>(test_rows[k])]) {
          ++correct;
        }
      }
      task->accuracy[g][ci] =
          static_cast<double>(correct) / static_cast<double>(test_rows.size());
    }
  }
}

}  // namespace

HyperGrid HyperGrid::Defaults(Eigen::Index dim) {
  HyperGrid grid;
  const int max_exp = static_cast<int>(std::floor(std::log2(static_cast<double>(
      std::max<Eigen::Index>(dim, 1)))));
  for (int k = 5; k <= max_exp; ++k) grid.n_pca.push_back(Eigen::Index{1} << k);
  if (grid.n_pca.empty()) grid.n_pca.push_back(Eigen::Index{1} << max_exp);
  grid.gamma = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  grid.c = {5.0, 10.0, 20.0, 50.0};
  return grid;
}

void HyperGrid::Validate() const {
  if (n_pca.empty() || gamma.empty() || c.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "hyper-grid sets must be nonempty");
  }
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "folds must be >= 2");
  for (Eigen::Index k : n_pca) {
    if (k < 1) throw Error(ErrorCode::kBadComponentCount, "n_pca must be >= 1");
  }
  for (double g : gamma) {
    if (!(g > 0.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must be > 0");
  }
  for (double v : c) {
    if (!(v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "c must be > 0");
  }
}

std::vector<int> StratifiedFolds(const std::vector<int>& labels,
                                 int num_classes, int folds,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(labels.size(), 0);
  for (int cls = 0; cls < num_classes; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t k = 0; k < members.size(); ++k) {
      fold_of[members[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
  }
  return fold_of;
}

std::vector<int> RecordingFolds(const std::vector<std::string>& recording_ids,
                                int folds, std::uint64_t seed) {
  std::vector<std::string> distinct = recording_ids;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::mt19937_64 rng(seed);
  std::shuffle(distinct.begin(), distinct.end(), rng);
  std::map<std::string, int> fold_of_recording;
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    fold_of_recording[distinct[k]] =
        static_cast<int>(k % static_cast<std::size_t>(folds));
  }
  std::vector<int> fold_of;
  fold_of.reserve(recording_ids.size());
  for (const std::string& id : recording_ids) {
    fold_of.push_back(fold_of_recording.at(id));
  }
  return fold_of;
}

std::string FoldSchemeName(FoldScheme scheme) {
  switch (scheme) {
    case FoldScheme::kAuto: return "auto";
    case FoldScheme::kFrames: return "frames";
    case FoldScheme::kRecordings: return "recordings";
  }
  return "unknown";
}

bool BetterGridEntry(const GridEntry& a, const GridEntry& b) {
  if (a.mean_accuracy != b.mean_accuracy) {
    return a.mean_accuracy > b.mean_accuracy;
  }
  if (a.point.n_pca != b.point.n_pca) return a.point.n_pca < b.point.n_pca;
  if (a.point.c != b.point.c) return a.point.c < b.point.c;
  return a.point.gamma < b.point.gamma;
}

GridResult GridSearchCv(const LabeledDataset& data, const HyperGrid& grid,
                        const GridSearchOptions& options) {
  data.Validate();
  grid.Validate();
  const std::vector<Eigen::Index> counts = data.ClassCounts();
  const auto present = std::count_if(counts.begin(), counts.end(),
                                     [](Eigen::Index n) { return n > 0; });
  if (present < 2) {
    throw Error(ErrorCode::kDegenerateLabels,
                "grid search needs at least two classes");
  }
  for (std::size_t cls = 0; cls < counts.size(); ++cls) {
    if (counts[cls] < grid.folds) {
      throw Error(ErrorCode::kTooFewSamples,
                  "class " + std::to_string(cls) + " has " +
                      std::to_string(counts[cls]) + " rows, need >= " +
                      std::to_string(grid.folds));
    }
  }

  FoldScheme scheme = options.scheme;
  if (scheme == FoldScheme::kAuto) {
    scheme = FoldScheme::kRecordings;
    for (int cls = 0; cls < data.num_classes; ++cls) {
      if (counts[static_cast<std::size_t>(cls)] == 0) continue;
      std::set<std::string> spanned;
      for (std::size_t i = 0; i < data.labels.size(); ++i) {
        if (data.labels[i] == cls) spanned.insert(data.recording_ids[i]);
      }
      if (spanned.size() < static_cast<std::size_t>(grid.folds)) {
        scheme = FoldScheme::kFrames;
      }
    }
  }
  const std::vector<int> fold_of =
      scheme == FoldScheme::kRecordings
          ? RecordingFolds(data.recording_ids, grid.folds, options.seed)
          : StratifiedFolds(data.labels, data.num_classes, grid.folds,
                            options.seed);

  std::vector<Eigen::Index> fold_size(static_cast<std::size_t>(grid.folds), 0);
  for (int f : fold_of) ++fold_size[static_cast<std::size_t>(f)];
  for (int f = 0; f < grid.folds; ++f) {
    std::vector<bool> seen(static_cast<std::size_t>(data.num_classes), false);
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != f) seen[static_cast<std::size_t>(data.labels[i])] = true;
    }
    if (fold_size[static_cast<std::size_t>(f)] == 0 ||
        std::count(seen.begin(), seen.end(), true) < 2) {
      throw Error(ErrorCode::kTooFewSamples,
                  "fold " + std::to_string(f + 1) +
                      " leaves a degenerate training part");
    }
  }
  const Eigen::Index smallest_train =
      data.size() - *std::max_element(fold_size.begin(), fold_size.end());
  for (Eigen::Index k : grid.n_pca) {
    if (k > std::min(smallest_train, data.features.cols())) {
      throw Error(ErrorCode::kBadComponentCount,
                  "n_pca = " + std::to_string(k) + " exceeds fold rank bound");
    }
  }

  std::vector<FoldTask> tasks;
  for (std::size_t p = 0; p < grid.n_pca.size(); ++p) {
    for (int f = 0; f < grid.folds; ++f) {
      FoldTask task;
      task.fold = f;
      task.pca_index = p;
      tasks.push_back(std::move(task));
    }
  }

  unsigned threads = options.num_threads != 0
                         ? options.num_threads
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(tasks.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        RunFoldTask(data, fold_of, grid, options, &tasks[t]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Merge in task order so results do not depend on scheduling.
  GridResult result;
  result.scheme = scheme;
  for (std::size_t p = 0; p < grid.n_pca.size(); ++p) {
    for (std::size_t g = 0; g < grid.gamma.size(); ++g) {
      for (std::size_t ci = 0; ci < grid.c.size(); ++ci) {
        GridEntry entry;
        entry.point = {grid.n_pca[p], grid.gamma[g], grid.c[ci]};
        for (int f = 0; f < grid.folds; ++f) {
          const FoldTask& task =
              tasks[p * static_cast<std::size_t>(grid.folds) +
                    static_cast<std::size_t>(f)];
          entry.fold_accuracy.push_back(task.accuracy[g][ci]);
          if (!task.converged[g][ci]) entry.converged = false;
        }
        entry.mean_accuracy =
            std::accumulate(entry.fold_accuracy.begin(),
                            entry.fold_accuracy.end(), 0.0) /
            static_cast<double>(grid.folds);
        result.entries.push_back(std::move(entry));
      }
    }
  }
  for (std::size_t i = 1; i < result.entries.size(); ++i) {
    if (BetterGridEntry(result.entries[i], result.entries[result.best_index])) {
      result.best_index = i;
    }
  }
  result.tied_at_best = static_cast<std::size_t>(std::count_if(
      result.entries.begin(), result.entries.end(), [&](const GridEntry& e) {
        return e.mean_accuracy == result.best().mean_accuracy;
      }));
  return result;
}

std::string GridResultCsv(const GridResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "n_pca,gamma,c,mean_accuracy";
  const std::size_t folds =
      result.entries.empty() ? 0 : result.entries.front().fold_accuracy.size();
  for (std::size_t f = 0; f < folds; ++f) out << ",fold_" << (f + 1);
  out << ",converged\n";
  for (const GridEntry& e : result.entries) {
    out << e.point.n_pca << ',' << e.point.gamma << ',' << e.point.c << ','
        << e.mean_accuracy;
    for (double acc : e.fold_accuracy) out << ',' << acc;
    out << ',' << (e.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace vfatigue
