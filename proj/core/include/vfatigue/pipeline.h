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

// End-to-end orchestration: preprocessing, dataset assembly, grid-searched
// training, evaluation, per-frame prediction and t-SNE projection.

#ifndef VFATIGUE_PIPELINE_H_
#define VFATIGUE_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vfatigue/grid_search.h"
#include "vfatigue/metrics.h"
#include "vfatigue/pca.h"
#include "vfatigue/preprocess.h"
#include "vfatigue/svm.h"
#include "vfatigue/tsne.h"
#include "vfatigue/types.h"

namespace vfatigue {

enum class NormalizationMode { kNone, kMean, kExternal };

std::string NormalizationName(NormalizationMode mode);
NormalizationMode ParseNormalization(const std::string& name);
std::string LabelModeName(LabelMode mode);
LabelMode ParseLabelMode(const std::string& name);

struct ExperimentCell {
  NormalizationMode normalize = NormalizationMode::kMean;
  double window_s = 60.0;
};

struct PipelineConfig {
  std::string manifest_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  double window_s = 60.0;
  NormalizationMode normalize = NormalizationMode::kMean;
  LabelMode mode = LabelMode::kBinary;
  double segment_duration_s = 600.0;

  // Unset grid axes fall back to HyperGrid::Defaults(dim).
  std::optional<std::vector<Eigen::Index>> n_pca;
  std::optional<std::vector<double>> gamma;
  std::optional<std::vector<double>> c;
  int folds = 5;

  double svm_tol = 1e-3;
  long svm_max_passes = 10000;
  unsigned threads = 0;

  double perplexity = 30.0;
  int tsne_iterations = 1000;
  double tsne_learning_rate = 200.0;

  // Normalization x smoothing matrix for the experiment command.
  std::vector<ExperimentCell> experiments;

  LabelSpec label_spec() const { return {mode, segment_duration_s}; }
  HyperGrid ResolveGrid(Eigen::Index dim) const;
};

std::string PipelineConfigToJson(const PipelineConfig& cfg);
// Keys absent from the document keep the values already in *cfg.
void ApplyPipelineConfigJson(const std::string& text, PipelineConfig* cfg);

struct LoadedRecording {
  RecordingManifest manifest;
  EmbeddingSequence sequence;
  std::optional<Prototype> prototype;
};

// Reads the embedding (and prototype, if listed) of every recording whose
// split matches. Throws kDimMismatch when dimensions disagree across files.
std::vector<LoadedRecording> LoadRecordings(
    const std::vector<RecordingManifest>& manifest, std::optional<Split> split);

// Normalizes (full-length sequence) and then smooths.
EmbeddingSequence Preprocess(const EmbeddingSequence& seq,
                             const std::optional<Prototype>& external,
                             NormalizationMode normalize, double window_s);

LabeledDataset BuildDataset(const std::vector<LoadedRecording>& recordings,
                            const PipelineConfig& cfg);

struct TrainedPipeline {
  PipelineConfig config;
  GridPoint chosen;
  GridResult grid;  // empty on a model loaded from disk
  std::optional<double> cv_accuracy;
  PcaModel pca;
  SvmClassifier classifier;
  std::vector<std::string> train_recordings;

  int num_classes() const { return classifier.num_classes(); }
  Eigen::Index input_dim() const { return pca.dim(); }
};

// Grid search on train, then PCA + classifier refit on all of train with the
// chosen combination.
TrainedPipeline TrainPipeline(const LabeledDataset& train,
                              const PipelineConfig& cfg);

// Throws kDimMismatch when the features do not match the model.
std::vector<int> PredictLabels(const TrainedPipeline& model,
                               const Eigen::MatrixXd& features);
Eigen::MatrixXd DecisionValues(const TrainedPipeline& model,
                               const Eigen::MatrixXd& features);

// Scores a held-out dataset. Unless allow_train_overlap is set, a dataset
// containing rows from a training recording raises kProvenanceError.
ClassificationReport EvaluatePipeline(const TrainedPipeline& model,
                                      const LabeledDataset& data,
                                      bool allow_train_overlap = false);

// Model directory layout: model.json, pca.emb, pca.json, svm_<a>_<b>.svm.
void SaveTrainedPipeline(const TrainedPipeline& model, const std::string& dir);
TrainedPipeline LoadTrainedPipeline(const std::string& dir);

struct FramePrediction {
  double time_s;
  int label;
  Eigen::VectorXd decision;
};

// Labels every preprocessed frame of one recording.
std::vector<FramePrediction> PredictRecording(
    const TrainedPipeline& model, const EmbeddingSequence& seq,
    const std::optional<Prototype>& external);

// Boundary between the first and second half flag in projections.
inline constexpr double kProjectionHalfBoundary = 2400.0;

struct ProjectedPoint {
  double time_s;
  double x;
  double y;
  int half;  // 0 before kProjectionHalfBoundary, 1 from there on
};

// Preprocesses one recording with cfg and maps its frames to 2-D.
std::vector<ProjectedPoint> ProjectRecording(
    const EmbeddingSequence& seq, const std::optional<Prototype>& external,
    const PipelineConfig& cfg);
std::string ProjectionCsv(const std::vector<ProjectedPoint>& points);

}  // namespace vfatigue

#endif  // VFATIGUE_PIPELINE_H_
