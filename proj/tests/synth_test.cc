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

#include <gtest/gtest.h>

#include "test_util.h"
#include "vfatigue/emb_io.h"
#include "vfatigue/error.h"
#include "vfatigue/manifest.h"
#include "vfatigue/synth.h"

namespace vfatigue {
namespace {

SynthConfig Small() {
  SynthConfig cfg;
  cfg.n_recordings = 4;
  cfg.n_train = 2;
  cfg.dim = 8;
  return cfg;
}

TEST(Synth, DefaultCorpusShape) {
  const SynthConfig cfg;
  EXPECT_EQ(cfg.n_recordings, 19);
  EXPECT_EQ(cfg.n_train, 10);
  EXPECT_EQ(cfg.seed, kDefaultSynthSeed);
  SynthConfig light = cfg;
  light.dim = 2;
  const SynthCorpus corpus = GenerateSynth(light);
  ASSERT_EQ(corpus.recordings.size(), 19u);
  int train = 0;
  for (const auto& rec : corpus.recordings) {
    train += rec.manifest.split == Split::kTrain;
    EXPECT_EQ(rec.sequence.num_frames(), 1200);
    EXPECT_EQ(rec.sequence.frame_duration_s(), 3.0);
    EXPECT_EQ(rec.manifest.duration_s, 3600.0);
    EXPECT_EQ(rec.trait.recording_id, rec.sequence.recording_id());
  }
  EXPECT_EQ(train, 10);
  EXPECT_EQ(corpus.recordings[0].manifest.recording_id, "train_00");
  EXPECT_EQ(corpus.recordings[18].manifest.recording_id, "test_08");
}

TEST(Synth, DeterministicUnderSeed) {
  const SynthCorpus a = GenerateSynth(Small());
  const SynthCorpus b = GenerateSynth(Small());
  for (std::size_t r = 0; r < a.recordings.size(); ++r) {
    EXPECT_EQ(a.recordings[r].sequence, b.recordings[r].sequence);
    EXPECT_EQ(a.recordings[r].trait.vector, b.recordings[r].trait.vector);
  }
  SynthConfig other = Small();
  other.seed = 7;
  EXPECT_FALSE(GenerateSynth(other).recordings[0].sequence ==
               a.recordings[0].sequence);
}

TEST(Synth, DriftNormAndEndpointMeans) {
  SynthConfig cfg = Small();
  cfg.drift_magnitude = 8.0;
  cfg.noise_sigma = 0.5;
  const SynthCorpus corpus = GenerateSynth(cfg);
  EXPECT_NEAR(corpus.drift.norm(), 4.0, 1e-12);
  // Window of w frames at each end: the mean difference matches the drift
  // accumulated between the window centres within 4 sigma / sqrt(w).
  const Eigen::Index w = 100;
  for (const auto& rec : corpus.recordings) {
    const FrameMatrix& f = rec.sequence.frames();
    const Eigen::Index n = f.rows();
    const Eigen::VectorXd head = f.topRows(w).colwise().mean().transpose();
    const Eigen::VectorXd tail = f.bottomRows(w).colwise().mean().transpose();
    const double span = static_cast<double>(n - w) * 3.0 / cfg.duration_s;
    const Eigen::VectorXd expect = span * corpus.drift;
    EXPECT_LE((tail - head - expect).cwiseAbs().maxCoeff(),
              4.0 * cfg.noise_sigma / std::sqrt(static_cast<double>(w)));
  }
}

TEST(Synth, ZeroDriftHasNoTrend) {
  SynthConfig cfg = Small();
  cfg.drift_magnitude = 0.0;
  const SynthCorpus corpus = GenerateSynth(cfg);
  EXPECT_EQ(corpus.drift.norm(), 0.0);
}

TEST(Synth, ValuesSurviveEmbExactly) {
  const SynthCorpus corpus = GenerateSynth(Small());
  const std::string dir = testing::TempDir("synth_write");
  const std::string manifest_path = WriteSynthCorpus(corpus, dir);
  const auto manifest = LoadManifest(manifest_path);
  ASSERT_EQ(manifest.size(), 4u);
  for (std::size_t r = 0; r < manifest.size(); ++r) {
    EXPECT_EQ(ReadEmbeddings(manifest[r].embedding_path),
              corpus.recordings[r].sequence);
    EXPECT_EQ(ReadPrototype(*manifest[r].prototype_path).vector,
              corpus.recordings[r].trait.vector);
  }
}

TEST(Synth, InvalidConfig) {
  SynthConfig cfg = Small();
  cfg.noise_sigma = 0.0;
  EXPECT_THROW(GenerateSynth(cfg), Error);
  cfg = Small();
  cfg.n_train = 9;
  EXPECT_THROW(GenerateSynth(cfg), Error);
}

}  // namespace
}  // namespace vfatigue
