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

// Command-line front end. Exit codes: 0 success, 1 I/O or environment
// failure, 2 domain or validation error (including bad arguments).

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/file_util.h"
#include "vfatigue/manifest.h"
#include "vfatigue/metrics.h"
#include "vfatigue/pipeline.h"
#include "vfatigue/synth.h"

namespace vfatigue {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitEnvironment = 1;
constexpr int kExitDomain = 2;

constexpr char kPredictionsFormat[] = "vfatigue-predictions-1";

struct GlobalFlags {
  std::string manifest;
  std::string out;
  std::uint64_t seed = 0;
  double window_s = 0.0;
  std::string normalize;
  std::string mode;
  std::string config;
  unsigned threads = 0;
};

struct GridFlags {
  std::vector<Eigen::Index> n_pca;
  std::vector<double> gamma;
  std::vector<double> c;
  int folds = 5;
};

void Log(const std::string& line) { std::cerr << "vfatigue: " << line << '\n'; }

bool Given(const CLI::App& app, const std::string& name) {
  return app.get_option(name)->count() > 0;
}

// Layering: base, then the --config document, then explicit flags.
PipelineConfig ResolveConfig(const CLI::App& app, const GlobalFlags& g,
                             PipelineConfig base) {
  if (!g.config.empty()) ApplyPipelineConfigJson(ReadFileBytes(g.config), &base);
  if (Given(app, "--manifest")) base.manifest_path = g.manifest;
  if (Given(app, "--out")) base.out_dir = g.out;
  if (Given(app, "--seed")) base.seed = g.seed;
  if (Given(app, "--window-s")) base.window_s = g.window_s;
  if (Given(app, "--normalize")) base.normalize = ParseNormalization(g.normalize);
  if (Given(app, "--mode")) base.mode = ParseLabelMode(g.mode);
  if (Given(app, "--threads")) base.threads = g.threads;
  return base;
}

void ApplyGridFlags(const CLI::App& sub, const GridFlags& grid,
                    PipelineConfig* cfg) {
  if (sub.get_option("--n-pca")->count() > 0) cfg->n_pca = grid.n_pca;
  if (sub.get_option("--gamma")->count() > 0) cfg->gamma = grid.gamma;
  if (sub.get_option("--c")->count() > 0) cfg->c = grid.c;
  if (sub.get_option("--folds")->count() > 0) cfg->folds = grid.folds;
}

std::string Require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(flag) + " is required");
  }
  return value;
}

void MakeDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + dir + "': " + ec.message());
}

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void WriteConfig(const PipelineConfig& cfg, const std::string& dir) {
  WriteFileAtomic(Join(dir, "config.json"), PipelineConfigToJson(cfg));
}

// Preprocessing fields of a model are fixed at training time.
void CheckMatchesModel(const PipelineConfig& run, const PipelineConfig& model) {
  if (run.window_s != model.window_s || run.normalize != model.normalize ||
      run.mode != model.mode ||
      run.segment_duration_s != model.segment_duration_s) {
    throw Error(ErrorCode::kInvalidArgument,
                "preprocessing settings differ from the trained model (window " +
                    std::to_string(model.window_s) + " s, normalize " +
                    NormalizationName(model.normalize) + ", mode " +
                    LabelModeName(model.mode) + ")");
  }
}

std::vector<LoadedRecording> LoadSplit(const PipelineConfig& cfg, Split split) {
  const auto manifest = LoadManifest(Require(cfg.manifest_path, "--manifest"));
  auto recordings = LoadRecordings(manifest, split);
  if (recordings.empty()) {
    throw Error(ErrorCode::kTooFewSamples,
                "manifest has no " + SplitName(split) + " recordings");
  }
  return recordings;
}

std::string GridResultJson(const TrainedPipeline& model) {
  const GridResult& grid = model.grid;
  bool converged = true;
  for (const GridEntry& e : grid.entries) converged = converged && e.converged;
  const json doc = {
      {"fold_scheme", FoldSchemeName(grid.scheme)},
      {"combinations", grid.entries.size()},
      {"all_converged", converged},
      {"tied_at_best", grid.tied_at_best},
      {"best",
       {{"n_pca", model.chosen.n_pca},
        {"gamma", model.chosen.gamma},
        {"c", model.chosen.c},
        {"cv_accuracy", grid.best().mean_accuracy},
        {"fold_accuracy", grid.best().fold_accuracy}}},
      {"train_recordings", model.train_recordings}};
  return doc.dump(2) + "\n";
}

TrainedPipeline TrainInto(const PipelineConfig& cfg, const std::string& out) {
  const auto train = LoadSplit(cfg, Split::kTrain);
  const LabeledDataset data = BuildDataset(train, cfg);
  Log("training on " + std::to_string(train.size()) + " recordings, " +
      std::to_string(data.size()) + " labeled frames");
  TrainedPipeline model = TrainPipeline(data, cfg);
  MakeDir(out);
  SaveTrainedPipeline(model, out);
  WriteFileAtomic(Join(out, "cv_table.csv"), GridResultCsv(model.grid));
  WriteFileAtomic(Join(out, "grid_result.json"), GridResultJson(model));
  WriteConfig(cfg, out);
  Log("best n_pca=" + std::to_string(model.chosen.n_pca) +
      " cv_accuracy=" + std::to_string(*model.cv_accuracy));
  return model;
}

ClassificationReport EvaluateInto(const TrainedPipeline& model,
                                  const PipelineConfig& cfg, Split split,
                                  const std::string& out) {
  const auto recordings = LoadSplit(cfg, split);
  const LabeledDataset data = BuildDataset(recordings, cfg);
  const ClassificationReport report =
      EvaluatePipeline(model, data, split == Split::kTrain);
  const auto names = ClassNames(model.num_classes());
  MakeDir(out);
  WriteFileAtomic(Join(out, "metrics.json"), ReportJson(report, names));
  WriteFileAtomic(Join(out, "table.txt"), ReportTable(report, names));
  WriteFileAtomic(Join(out, "confusion.csv"), ConfusionCsv(report.confusion, names));
  json summary = {{"split", SplitName(split)},
                  {"recordings", recordings.size()},
                  {"frames", data.size()},
                  {"accuracy", report.accuracy},
                  {"cv_accuracy", model.cv_accuracy ? json(*model.cv_accuracy)
                                                    : json(nullptr)}};
  if (split == Split::kTrain && model.cv_accuracy) {
    summary["within_sanity_band"] = report.accuracy >= *model.cv_accuracy - 0.1;
  }
  WriteFileAtomic(Join(out, "summary.json"), summary.dump(2) + "\n");
  WriteConfig(cfg, out);
  return report;
}

int CmdSynth(const CLI::App& app, const GlobalFlags& g, SynthConfig synth) {
  PipelineConfig cfg = ResolveConfig(app, g, PipelineConfig{});
  const std::string out = Require(cfg.out_dir, "--out");
  // Synthesis keeps its own default seed unless one is given.
  synth.seed = Given(app, "--seed") ? g.seed : kDefaultSynthSeed;
  cfg.seed = synth.seed;
  const SynthCorpus corpus = GenerateSynth(synth);
  const std::string manifest = WriteSynthCorpus(corpus, out);
  cfg.manifest_path = manifest;
  const json doc = {{"n_recordings", synth.n_recordings},
                    {"n_train", synth.n_train},
                    {"duration_s", synth.duration_s},
                    {"dim", synth.dim},
                    {"drift_magnitude", synth.drift_magnitude},
                    {"noise_sigma", synth.noise_sigma},
                    {"per_recording_offset_sigma", synth.per_recording_offset_sigma},
                    {"seed", synth.seed},
                    {"frame_duration_s", kSynthFrameDuration}};
  WriteFileAtomic(Join(out, "synth.json"), doc.dump(2) + "\n");
  WriteConfig(cfg, out);
  Log("wrote " + std::to_string(corpus.recordings.size()) + " recordings to " + out);
  return kExitOk;
}

int CmdTrain(const CLI::App& app, const CLI::App& sub, const GlobalFlags& g,
             const GridFlags& grid) {
  PipelineConfig cfg = ResolveConfig(app, g, PipelineConfig{});
  ApplyGridFlags(sub, grid, &cfg);
  TrainInto(cfg, Require(cfg.out_dir, "--out"));
  return kExitOk;
}

int CmdEvaluate(const CLI::App& app, const GlobalFlags& g,
                const std::string& model_dir, const std::string& split_name) {
  const TrainedPipeline model = LoadTrainedPipeline(Require(model_dir, "--model"));
  PipelineConfig base = model.config;
  base.out_dir.clear();
  const PipelineConfig cfg = ResolveConfig(app, g, base);
  CheckMatchesModel(cfg, model.config);
  const Split split = split_name == "train" ? Split::kTrain : Split::kTest;
  const ClassificationReport report =
      EvaluateInto(model, cfg, split, Require(cfg.out_dir, "--out"));
  Log(SplitName(split) + " accuracy " + std::to_string(report.accuracy));
  return kExitOk;
}

struct PredictInput {
  EmbeddingSequence sequence;
  std::optional<Prototype> prototype;
};

PredictInput LoadPredictInput(const PipelineConfig& cfg,
                              const std::string& recording,
                              const std::string& embedding,
                              const std::string& prototype) {
  if (!embedding.empty()) {
    PredictInput in{ReadEmbeddings(embedding), std::nullopt};
    if (!prototype.empty()) in.prototype = ReadPrototype(prototype);
    return in;
  }
  const auto manifest = LoadManifest(Require(cfg.manifest_path, "--manifest"));
  for (const RecordingManifest& entry : manifest) {
    if (entry.recording_id != recording) continue;
    auto loaded = LoadRecordings({entry}, std::nullopt);
    return {std::move(loaded.front().sequence), std::move(loaded.front().prototype)};
  }
  throw Error(ErrorCode::kManifestError,
              "recording '" + recording + "' is not in the manifest");
}

int CmdPredict(const CLI::App& app, const GlobalFlags& g,
               const std::string& model_dir, const std::string& recording,
               const std::string& embedding, const std::string& prototype) {
  if (recording.empty() == embedding.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "give exactly one of --recording and --embedding");
  }
  const TrainedPipeline model = LoadTrainedPipeline(Require(model_dir, "--model"));
  PipelineConfig base = model.config;
  base.out_dir.clear();
  const PipelineConfig cfg = ResolveConfig(app, g, base);
  CheckMatchesModel(cfg, model.config);
  const std::string out = Require(cfg.out_dir, "--out");
  const PredictInput in = LoadPredictInput(cfg, recording, embedding, prototype);
  const auto frames = PredictRecording(model, in.sequence, in.prototype);

  const auto names = ClassNames(model.num_classes());
  std::vector<std::int64_t> counts(names.size(), 0);
  json rows = json::array();
  for (const FramePrediction& f : frames) {
    ++counts[static_cast<std::size_t>(f.label)];
    rows.push_back({{"time_s", f.time_s},
                    {"label", names[static_cast<std::size_t>(f.label)]},
                    {"decision", std::vector<double>(f.decision.data(),
                                                     f.decision.data() + f.decision.size())}});
  }
  json count_doc = json::object();
  for (std::size_t c = 0; c < names.size(); ++c) count_doc[names[c]] = counts[c];
  json pairs = json::array();
  for (const auto& [a, b] : OvoPairs(model.num_classes())) {
    pairs.push_back({names[static_cast<std::size_t>(a)],
                     names[static_cast<std::size_t>(b)]});
  }
  const json doc = {{"format", kPredictionsFormat},
                    {"recording_id", in.sequence.recording_id()},
                    {"classes", names},
                    {"decision_pairs", pairs},
                    {"window_s", model.config.window_s},
                    {"normalize", NormalizationName(model.config.normalize)},
                    {"frame_duration_s", in.sequence.frame_duration_s()},
                    {"counts", count_doc},
                    {"frames", rows}};
  MakeDir(out);
  WriteFileAtomic(Join(out, "predictions.json"), doc.dump(2) + "\n");
  WriteConfig(cfg, out);
  Log("predicted " + std::to_string(frames.size()) + " frames of '" +
      in.sequence.recording_id() + "'");
  return kExitOk;
}

int CmdProject(const CLI::App& app, const GlobalFlags& g,
               const std::vector<std::string>& only) {
  const PipelineConfig cfg = ResolveConfig(app, g, PipelineConfig{});
  const std::string out = Require(cfg.out_dir, "--out");
  const auto manifest = LoadManifest(Require(cfg.manifest_path, "--manifest"));
  std::vector<RecordingManifest> chosen;
  for (const std::string& id : only) {
    bool found = false;
    for (const RecordingManifest& entry : manifest) {
      if (entry.recording_id == id) {
        chosen.push_back(entry);
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kManifestError, "recording '" + id + "' is not in the manifest");
    }
  }
  if (only.empty()) chosen = manifest;
  MakeDir(out);
  for (const RecordingManifest& entry : chosen) {
    const auto loaded = LoadRecordings({entry}, std::nullopt);
    const auto points =
        ProjectRecording(loaded.front().sequence, loaded.front().prototype, cfg);
    WriteFileAtomic(Join(out, entry.recording_id + ".csv"), ProjectionCsv(points));
    Log("projected '" + entry.recording_id + "' (" + std::to_string(points.size()) +
        " points)");
  }
  WriteConfig(cfg, out);
  return kExitOk;
}

std::string FormatWindow(double window_s) {
  std::ostringstream s;
  s << window_s;
  return s.str();
}

// Default matrix: {none, mean} x {0, 30, 60} s, plus external when every
// recording carries a prototype.
std::vector<ExperimentCell> DefaultExperiments(const PipelineConfig& cfg) {
  std::vector<NormalizationMode> modes = {NormalizationMode::kNone,
                                          NormalizationMode::kMean};
  bool all_external = true;
  for (const auto& entry : LoadManifest(Require(cfg.manifest_path, "--manifest"))) {
    all_external = all_external && entry.prototype_path.has_value();
  }
  if (all_external) modes.push_back(NormalizationMode::kExternal);
  std::vector<ExperimentCell> cells;
  for (NormalizationMode mode : modes) {
    for (double w : {0.0, 30.0, 60.0}) cells.push_back({mode, w});
  }
  return cells;
}

int CmdExperiment(const CLI::App& app, const CLI::App& sub, const GlobalFlags& g,
                  const GridFlags& grid) {
  PipelineConfig cfg = ResolveConfig(app, g, PipelineConfig{});
  ApplyGridFlags(sub, grid, &cfg);
  const std::string out = Require(cfg.out_dir, "--out");
  if (cfg.experiments.empty()) cfg.experiments = DefaultExperiments(cfg);
  MakeDir(out);
  WriteConfig(cfg, out);

  const auto names = ClassNames(LabelSpec{cfg.mode}.num_classes());
  std::ostringstream csv;
  csv.precision(17);
  csv << "normalize,window_s,n_pca,gamma,c,cv_accuracy";
  for (const std::string& n : names) csv << ",precision_" << n << ",recall_" << n;
  csv << ",accuracy\n";
  std::string table;
  for (const ExperimentCell& cell : cfg.experiments) {
    PipelineConfig run = cfg;
    run.experiments.clear();
    run.normalize = cell.normalize;
    run.window_s = cell.window_s;
    const std::string tag =
        NormalizationName(cell.normalize) + "_" + FormatWindow(cell.window_s) + "s";
    run.out_dir = Join(out, tag);
    Log("experiment " + tag);
    const TrainedPipeline model = TrainInto(run, Join(run.out_dir, "model"));
    const ClassificationReport r =
        EvaluateInto(model, run, Split::kTest, Join(run.out_dir, "test"));
    WriteConfig(run, run.out_dir);
    csv << NormalizationName(cell.normalize) << ',' << cell.window_s << ','
        << model.chosen.n_pca << ',' << model.chosen.gamma << ',' << model.chosen.c
        << ',' << *model.cv_accuracy;
    for (std::size_t c = 0; c < names.size(); ++c) {
      // Undefined precision or recall stays an empty cell.
      csv << ',';
      if (r.precision[c]) csv << *r.precision[c];
      csv << ',';
      if (r.recall[c]) csv << *r.recall[c];
    }
    csv << ',' << r.accuracy << '\n';
    table += "[" + tag + "]\n" + ReportTable(r, names) + "\n";
  }
  WriteFileAtomic(Join(out, "experiments.csv"), csv.str());
  WriteFileAtomic(Join(out, "experiments.txt"), table);
  return kExitOk;
}

void AddGridFlags(CLI::App* sub, GridFlags* grid) {
  sub->add_option("--n-pca", grid->n_pca, "PCA component grid")->delimiter(',');
  sub->add_option("--gamma", grid->gamma, "RBF gamma grid")->delimiter(',');
  sub->add_option("--c", grid->c, "SVM C grid")->delimiter(',');
  sub->add_option("--folds", grid->folds, "cross-validation folds");
}

int Run(int argc, char** argv) {
  CLI::App app{"Vocal fatigue detection from speech embedding sequences", "vfatigue"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--manifest", g.manifest, "recording manifest JSON");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--window-s", g.window_s, "smoothing window in seconds")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--normalize", g.normalize, "recording normalization")
      ->check(CLI::IsMember({"none", "mean", "external"}));
  app.add_option("--mode", g.mode, "label mode")->check(CLI::IsMember({"binary", "three"}));
  app.add_option("--config", g.config, "PipelineConfig JSON; explicit flags win");
  app.add_option("--threads", g.threads, "worker threads for grid search (0 = all cores)");

  SynthConfig synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "write a synthetic drifting corpus");
  synth_cmd->add_option("--n-recordings", synth.n_recordings, "number of recordings");
  synth_cmd->add_option("--n-train", synth.n_train, "leading recordings assigned to train");
  synth_cmd->add_option("--duration", synth.duration_s, "seconds per recording");
  synth_cmd->add_option("--dim", synth.dim, "embedding width");
  synth_cmd->add_option("--drift", synth.drift_magnitude, "drift norm in noise units");
  synth_cmd->add_option("--noise", synth.noise_sigma, "per-frame noise sd");
  synth_cmd->add_option("--offset-sigma", synth.per_recording_offset_sigma,
                        "per-recording offset sd");

  GridFlags train_grid;
  CLI::App* train_cmd = app.add_subcommand("train", "grid-search and fit on the train split");
  AddGridFlags(train_cmd, &train_grid);

  std::string model_dir;
  std::string split_name = "test";
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "score a trained model");
  eval_cmd->add_option("--model", model_dir, "trained model directory")->required();
  eval_cmd->add_option("--split", split_name, "recordings to score")
      ->check(CLI::IsMember({"test", "train"}));

  std::string recording;
  std::string embedding;
  std::string prototype;
  CLI::App* predict_cmd = app.add_subcommand("predict", "label every window of one recording");
  predict_cmd->add_option("--model", model_dir, "trained model directory")->required();
  predict_cmd->add_option("--recording", recording, "recording id from --manifest");
  predict_cmd->add_option("--embedding", embedding, "EMB1 file");
  predict_cmd->add_option("--prototype", prototype, "prototype for --embedding");

  std::vector<std::string> only;
  CLI::App* project_cmd = app.add_subcommand("project", "t-SNE projection per recording");
  project_cmd->add_option("--recording", only, "restrict to these recordings");

  GridFlags exp_grid;
  CLI::App* exp_cmd =
      app.add_subcommand("experiment", "normalization x smoothing matrix, train and test");
  AddGridFlags(exp_cmd, &exp_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitDomain;
  }

  try {
    if (*synth_cmd) return CmdSynth(app, g, synth);
    if (*train_cmd) return CmdTrain(app, *train_cmd, g, train_grid);
    if (*eval_cmd) return CmdEvaluate(app, g, model_dir, split_name);
    if (*predict_cmd) return CmdPredict(app, g, model_dir, recording, embedding, prototype);
    if (*project_cmd) return CmdProject(app, g, only);
    if (*exp_cmd) return CmdExperiment(app, *exp_cmd, g, exp_grid);
  } catch (const Error& e) {
    std::cerr << "vfatigue: error: " << e.what() << '\n';
    return IsEnvironmentError(e.code()) ? kExitEnvironment : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "vfatigue: error: " << e.what() << '\n';
    return kExitEnvironment;
  }
  return kExitDomain;
}

}  // namespace
}  // namespace vfatigue

int main(int argc, char** argv) { return vfatigue::Run(argc, argv); }
