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

#include "vfatigue/pipeline.h"

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/file_util.h"

namespace vfatigue {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kModelFormat = "vfatigue-model-v1";

std::string SvmFileName(int a, int b) {
  return "svm_" + std::to_string(a) + "_" + std::to_string(b) + ".svm";
}

json ConfigToJsonValue(const PipelineConfig& cfg) {
  json grid = {{"folds", cfg.folds}};
  grid["n_pca"] = cfg.n_pca ? json(*cfg.n_pca) : json(nullptr);
  grid["gamma"] = cfg.gamma ? json(*cfg.gamma) : json(nullptr);
  grid["c"] = cfg.c ? json(*cfg.c) : json(nullptr);
  json experiments = json::array();
  for (const ExperimentCell& cell : cfg.experiments) {
    experiments.push_back({{"normalize", NormalizationName(cell.normalize)},
                           {"window_s", cell.window_s}});
  }
  return {{"manifest", cfg.manifest_path},
          {"out", cfg.out_dir},
          {"seed", cfg.seed},
          {"window_s", cfg.window_s},
          {"normalize", NormalizationName(cfg.normalize)},
          {"mode", LabelModeName(cfg.mode)},
          {"segment_duration_s", cfg.segment_duration_s},
          {"grid", grid},
          {"svm", {{"tol", cfg.svm_tol}, {"max_passes", cfg.svm_max_passes}}},
          {"tsne",
           {{"perplexity", cfg.perplexity},
            {"iterations", cfg.tsne_iterations},
            {"learning_rate", cfg.tsne_learning_rate}}},
          {"threads", cfg.threads},
          {"experiments", experiments}};
}

template <typename T>
void Take(const json& obj, const char* key, T* out) {
  if (obj.contains(key) && !obj[key].is_null()) *out = obj[key].get<T>();
}

template <typename T>
void TakeOptional(const json& obj, const char* key, std::optional<T>* out) {
  if (obj.contains(key)) {
    if (obj[key].is_null()) {
      out->reset();
    } else {
      *out = obj[key].get<T>();
    }
  }
}

void ApplyConfigJsonValue(const json& doc, PipelineConfig* cfg) {
  Take(doc, "manifest", &cfg->manifest_path);
  Take(doc, "out", &cfg->out_dir);
  Take(doc, "seed", &cfg->seed);
  Take(doc, "window_s", &cfg->window_s);
  if (doc.contains("normalize")) {
    cfg->normalize = ParseNormalization(doc["normalize"].get<std::string>());
  }
  if (doc.contains("mode")) {
    cfg->mode = ParseLabelMode(doc["mode"].get<std::string>());
  }
  Take(doc, "segment_duration_s", &cfg->segment_duration_s);
  if (doc.contains("grid")) {
    const json& grid = doc["grid"];
    TakeOptional(grid, "n_pca", &cfg->n_pca);
    TakeOptional(grid, "gamma", &cfg->gamma);
    TakeOptional(grid, "c", &cfg->c);
    Take(grid, "folds", &cfg->folds);
  }
  if (doc.contains("svm")) {
    Take(doc["svm"], "tol", &cfg->svm_tol);
    Take(doc["svm"], "max_passes", &cfg->svm_max_passes);
  }
  if (doc.contains("tsne")) {
    Take(doc["tsne"], "perplexity", &cfg->perplexity);
    Take(doc["tsne"], "iterations", &cfg->tsne_iterations);
    Take(doc["tsne"], "learning_rate", &cfg->tsne_learning_rate);
  }
  Take(doc, "threads", &cfg->threads);
  if (doc.contains("experiments")) {
    cfg->experiments.clear();
    for (const json& cell : doc["experiments"]) {
      cfg->experiments.push_back(
          {ParseNormalization(cell.at("normalize").get<std::string>()),
           cell.at("window_s").get<double>()});
    }
  }
}

const Prototype* ExternalOrThrow(const std::optional<Prototype>& external,
                                 const std::string& recording_id) {
  if (!external) {
    throw Error(ErrorCode::kManifestError,
                "external normalization needs a prototype for '" +
                    recording_id + "'");
  }
  return &*external;
}

Eigen::MatrixXd ToMatrix(const FrameMatrix& frames) {
  return Eigen::MatrixXd(frames);
}

}  // namespace

std::string NormalizationName(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kNone: return "none";
    case NormalizationMode::kMean: return "mean";
    case NormalizationMode::kExternal: return "external";
  }
  return "none";
}

NormalizationMode ParseNormalization(const std::string& name) {
  if (name == "none") return NormalizationMode::kNone;
  if (name == "mean") return NormalizationMode::kMean;
  if (name == "external") return NormalizationMode::kExternal;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown normalization '" + name + "'");
}

std::string LabelModeName(LabelMode mode) {
  return mode == LabelMode::kBinary ? "binary" : "three";
}

LabelMode ParseLabelMode(const std::string& name) {
  if (name == "binary") return LabelMode::kBinary;
  if (name == "three") return LabelMode::kThreeClass;
  throw Error(ErrorCode::kInvalidArgument, "unknown label mode '" + name + "'");
}

HyperGrid PipelineConfig::ResolveGrid(Eigen::Index dim) const {
  HyperGrid grid = HyperGrid::Defaults(dim);
  if (n_pca) grid.n_pca = *n_pca;
  if (gamma) grid.gamma = *gamma;
  if (c) grid.c = *c;
  grid.folds = folds;
  return grid;
}

std::string PipelineConfigToJson(const PipelineConfig& cfg) {
  return ConfigToJsonValue(cfg).dump(2) + "\n";
}

void ApplyPipelineConfigJson(const std::string& text, PipelineConfig* cfg) {
  try {
    ApplyConfigJsonValue(json::parse(text), cfg);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed pipeline config: ") + e.what());
  }
}

std::vector<LoadedRecording> LoadRecordings(
    const std::vector<RecordingManifest>& manifest,
    std::optional<Split> split) {
  std::vector<LoadedRecording> out;
  for (const RecordingManifest& entry : manifest) {
    if (split && entry.split != *split) continue;
    EmbeddingSequence seq = ReadEmbeddings(entry.embedding_path);
    if (seq.recording_id() != entry.recording_id) {
      throw Error(ErrorCode::kProvenanceError,
                  "'" + entry.embedding_path + "' holds recording '" +
                      seq.recording_id() + "', manifest says '" +
                      entry.recording_id + "'");
    }
    std::optional<Prototype> proto;
    if (entry.prototype_path) proto = ReadPrototype(*entry.prototype_path);
    if (!out.empty() && out.front().sequence.dim() != seq.dim()) {
      throw Error(ErrorCode::kDimMismatch,
                  "recordings in one manifest must share a dimension");
    }
    out.push_back(LoadedRecording{entry, std::move(seq), std::move(proto)});
  }
  return out;
}

EmbeddingSequence Preprocess(const EmbeddingSequence& seq,
                             const std::optional<Prototype>& external,
                             NormalizationMode normalize, double window_s) {
  const SmoothingConfig smoothing{window_s};
  switch (normalize) {
    case NormalizationMode::kNone:
      return Smooth(seq, smoothing);
    case NormalizationMode::kMean:
      return Smooth(Normalize(seq, ComputePrototype(seq)), smoothing);
    case NormalizationMode::kExternal:
      return Smooth(
          Normalize(seq, *ExternalOrThrow(external, seq.recording_id())),
          smoothing);
  }
  return seq;
}

LabeledDataset BuildDataset(const std::vector<LoadedRecording>& recordings,
                            const PipelineConfig& cfg) {
  LabeledDataset data;
  data.num_classes = cfg.label_spec().num_classes();
  for (const LoadedRecording& rec : recordings) {
    const EmbeddingSequence prepared =
        Preprocess(rec.sequence, rec.prototype, cfg.normalize, cfg.window_s);
    data.Append(
        AssignLabels(prepared, cfg.label_spec(), rec.manifest.duration_s));
  }
  return data;
}

TrainedPipeline TrainPipeline(const LabeledDataset& train,
                              const PipelineConfig& cfg) {
  train.ValidateForTraining();
  TrainedPipeline model;
  model.config = cfg;
  const HyperGrid grid = cfg.ResolveGrid(train.features.cols());
  GridSearchOptions options;
  options.tol = cfg.svm_tol;
  options.max_passes = cfg.svm_max_passes;
  options.seed = cfg.seed;
  options.num_threads = cfg.threads;
  model.grid = GridSearchCv(train, grid, options);
  model.chosen = model.grid.best().point;
  model.cv_accuracy = model.grid.best().mean_accuracy;

  model.pca = FitPca(train.features, model.chosen.n_pca);
  SvmParams params;
  params.c = model.chosen.c;
  params.gamma = model.chosen.gamma;
  params.tol = cfg.svm_tol;
  params.max_passes = cfg.svm_max_passes;
  model.classifier = SvmClassifier::Train(model.pca.Transform(train.features),
                                          train.labels, train.num_classes,
                                          params);
  const std::set<std::string> ids(train.recording_ids.begin(),
                                  train.recording_ids.end());
  model.train_recordings.assign(ids.begin(), ids.end());
  return model;
}

Eigen::MatrixXd DecisionValues(const TrainedPipeline& model,
                               const Eigen::MatrixXd& features) {
  if (features.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "model expects " + std::to_string(model.input_dim()) +
                    "-dim embeddings, got " + std::to_string(features.cols()));
  }
  return model.classifier.DecisionValues(model.pca.Transform(features));
}

std::vector<int> PredictLabels(const TrainedPipeline& model,
                               const Eigen::MatrixXd& features) {
  return OvoVote(DecisionValues(model, features), model.num_classes());
}

ClassificationReport EvaluatePipeline(const TrainedPipeline& model,
                                      const LabeledDataset& data,
                                      bool allow_train_overlap) {
  data.Validate();
  if (data.num_classes != model.num_classes()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset and model disagree on the number of classes");
  }
  if (!allow_train_overlap) {
    const std::set<std::string> train(model.train_recordings.begin(),
                                      model.train_recordings.end());
    for (const std::string& id : data.recording_ids) {
      if (train.count(id) != 0) {
        throw Error(ErrorCode::kProvenanceError,
                    "evaluation data contains training recording '" + id + "'");
      }
    }
  }
  return Score(data.labels, PredictLabels(model, data.features),
               data.num_classes);
}

void SaveTrainedPipeline(const TrainedPipeline& model, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir + "'");
  SavePca(model.pca, (fs::path(dir) / "pca.emb").string(),
          (fs::path(dir) / "pca.json").string());
  json svm_files = json::array();
  const auto pairs = OvoPairs(model.num_classes());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::string name = SvmFileName(pairs[p].first, pairs[p].second);
    SaveSvm(model.classifier.models()[p], (fs::path(dir) / name).string());
    svm_files.push_back(name);
  }
  json doc = {{"format", kModelFormat},
              {"config", ConfigToJsonValue(model.config)},
              {"num_classes", model.num_classes()},
              {"input_dim", model.input_dim()},
              {"chosen",
               {{"n_pca", model.chosen.n_pca},
                {"gamma", model.chosen.gamma},
                {"c", model.chosen.c}}},
              {"cv_accuracy", model.cv_accuracy ? json(*model.cv_accuracy)
                                                : json(nullptr)},
              {"train_recordings", model.train_recordings},
              {"svm_files", svm_files}};
  WriteFileAtomic((fs::path(dir) / "model.json").string(), doc.dump(2) + "\n");
}

TrainedPipeline LoadTrainedPipeline(const std::string& dir) {
  const std::string text = ReadFileBytes((fs::path(dir) / "model.json").string());
  TrainedPipeline model;
  std::vector<std::string> svm_files;
  int num_classes = 2;
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw Error(ErrorCode::kFormatError, "unknown model format");
    }
    ApplyConfigJsonValue(doc.at("config"), &model.config);
    num_classes = doc.at("num_classes").get<int>();
    const json& chosen = doc.at("chosen");
    model.chosen = {chosen.at("n_pca").get<Eigen::Index>(),
                    chosen.at("gamma").get<double>(),
                    chosen.at("c").get<double>()};
    if (!doc.at("cv_accuracy").is_null()) {
      model.cv_accuracy = doc.at("cv_accuracy").get<double>();
    }
    model.train_recordings =
        doc.at("train_recordings").get<std::vector<std::string>>();
    svm_files = doc.at("svm_files").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                "malformed model.json in '" + dir + "': " + e.what());
  }
  model.pca = LoadPca((fs::path(dir) / "pca.emb").string(),
                      (fs::path(dir) / "pca.json").string());
  std::vector<SvmModel> models;
  for (const std::string& name : svm_files) {
    models.push_back(LoadSvm((fs::path(dir) / name).string()));
  }
  model.classifier = SvmClassifier(num_classes, std::move(models));
  if (model.classifier.dim() != model.pca.num_components()) {
    throw Error(ErrorCode::kFormatError, "SVM and PCA dimensions disagree");
  }
  return model;
}

std::vector<FramePrediction> PredictRecording(
    const TrainedPipeline& model, const EmbeddingSequence& seq,
    const std::optional<Prototype>& external) {
  if (seq.dim() != model.input_dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "model expects " + std::to_string(model.input_dim()) +
                    "-dim embeddings, '" + seq.recording_id() + "' has " +
                    std::to_string(seq.dim()));
  }
  const EmbeddingSequence prepared = Preprocess(
      seq, external, model.config.normalize, model.config.window_s);
  const Eigen::MatrixXd features = ToMatrix(prepared.frames());
  const Eigen::MatrixXd decisions = DecisionValues(model, features);
  const std::vector<int> labels = OvoVote(decisions, model.num_classes());
  std::vector<FramePrediction> out;
  out.reserve(labels.size());
  for (Eigen::Index i = 0; i < prepared.num_frames(); ++i) {
    out.push_back({prepared.TimeOf(i), labels[static_cast<std::size_t>(i)],
                   decisions.row(i).transpose()});
  }
  return out;
}

std::vector<ProjectedPoint> ProjectRecording(
    const EmbeddingSequence& seq, const std::optional<Prototype>& external,
    const PipelineConfig& cfg) {
  const EmbeddingSequence prepared =
      Preprocess(seq, external, cfg.normalize, cfg.window_s);
  TsneConfig tsne;
  tsne.perplexity = cfg.perplexity;
  tsne.iterations = cfg.tsne_iterations;
  tsne.learning_rate = cfg.tsne_learning_rate;
  tsne.seed = cfg.seed;
  const TsneResult result = TsneProject(ToMatrix(prepared.frames()), tsne);
  std::vector<ProjectedPoint> points;
  points.reserve(static_cast<std::size_t>(prepared.num_frames()));
  for (Eigen::Index i = 0; i < prepared.num_frames(); ++i) {
    const double t = prepared.TimeOf(i);
    points.push_back({t, result.embedding(i, 0), result.embedding(i, 1),
                      t < kProjectionHalfBoundary ? 0 : 1});
  }
  return points;
}

std::string ProjectionCsv(const std::vector<ProjectedPoint>& points) {
  std::ostringstream out;
  out << "time_s,x,y,half\n";
  char line[128];
  for (const ProjectedPoint& p : points) {
    std::snprintf(line, sizeof(line), "%.3f,%.9g,%.9g,%d\n", p.time_s, p.x, p.y,
                  p.half);
    out << line;
  }
  return out.str();
}

}  // namespace vfatigue
