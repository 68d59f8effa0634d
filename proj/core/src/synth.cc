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

#include "vfatigue/synth.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/manifest.h"

namespace vfatigue {

namespace {

double F32(double v) { return static_cast<double>(static_cast<float>(v)); }

Eigen::VectorXd Gaussian(std::mt19937_64& rng, int n, double sigma) {
  std::normal_distribution<double> dist(0.0, sigma);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

std::string RecordingId(int index, int n_train) {
  char buf[32];
  if (index < n_train) {
    std::snprintf(buf, sizeof(buf), "train_%02d", index);
  } else {
    std::snprintf(buf, sizeof(buf), "test_%02d", index - n_train);
  }
  return buf;
}

}  // namespace

void SynthConfig::Validate() const {
  if (n_recordings < 1 || n_train < 0 || n_train > n_recordings || dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synth counts");
  }
  if (!(duration_s >= kSynthFrameDuration) || !(noise_sigma > 0.0) ||
      !(drift_magnitude >= 0.0) || !(per_recording_offset_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid synth magnitudes");
  }
}

SynthCorpus GenerateSynth(const SynthConfig& cfg) {
  cfg.Validate();
  std::mt19937_64 master(cfg.seed);
  SynthCorpus corpus;
  corpus.base = Gaussian(master, cfg.dim, 1.0);
  Eigen::VectorXd direction = Gaussian(master, cfg.dim, 1.0);
  direction.normalize();
  corpus.drift = direction * (cfg.drift_magnitude * cfg.noise_sigma);

  const auto n_frames = static_cast<Eigen::Index>(
      std::floor(cfg.duration_s / kSynthFrameDuration));
  for (int r = 0; r < cfg.n_recordings; ++r) {
    std::seed_seq stream{static_cast<std::uint64_t>(cfg.seed),
                         static_cast<std::uint64_t>(r) + 1};
    std::mt19937_64 rng(stream);
    const Eigen::VectorXd trait =
        corpus.base + Gaussian(rng, cfg.dim, cfg.per_recording_offset_sigma);
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    FrameMatrix frames(n_frames, cfg.dim);
    for (Eigen::Index i = 0; i < n_frames; ++i) {
      const double progress =
          static_cast<double>(i) * kSynthFrameDuration / cfg.duration_s;
      for (Eigen::Index j = 0; j < cfg.dim; ++j) {
        frames(i, j) = F32(trait(j) + progress * corpus.drift(j) + noise(rng));
      }
    }
    const std::string id = RecordingId(r, cfg.n_train);
    RecordingManifest manifest{id, r < cfg.n_train ? Split::kTrain : Split::kTest,
                               cfg.duration_s, id + ".emb",
                               id + ".proto.emb"};
    Prototype proto{id, trait.unaryExpr(&F32),
                    PrototypeSource::kExternallySupplied};
    corpus.recordings.push_back(SyntheticRecording{
        EmbeddingSequence(id, "synth", 0, kSynthFrameDuration, 0.0,
                          std::move(frames)),
        std::move(manifest), std::move(proto)});
  }
  return corpus;
}

std::string WriteSynthCorpus(const SynthCorpus& corpus,
                             const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + out_dir + "'");
  std::vector<RecordingManifest> entries;
  for (const SyntheticRecording& rec : corpus.recordings) {
    WriteEmbeddings(rec.sequence,
                    (fs::path(out_dir) / rec.manifest.embedding_path).string());
    WritePrototype(rec.trait, rec.sequence.model_id(),
                   (fs::path(out_dir) / *rec.manifest.prototype_path).string());
    entries.push_back(rec.manifest);
  }
  const std::string path = (fs::path(out_dir) / "manifest.json").string();
  SaveManifest(entries, path);
  return path;
}

}  // namespace vfatigue
