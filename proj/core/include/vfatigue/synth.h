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

// Seeded generator of drifting embedding sequences.
//
// Frame at time t of recording r:
//
//   base + offset_r + (t / duration) * drift + noise
//
// base is a fixed vector, offset_r ~ N(0, offset_sigma^2 I) is a
// per-recording trait, drift has norm drift_magnitude * noise_sigma along a
// seeded unit direction, and noise ~ N(0, noise_sigma^2 I) i.i.d. per frame.
// Values are rounded to f32 so generated sequences survive EMB1 exactly.

#ifndef VFATIGUE_SYNTH_H_
#define VFATIGUE_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vfatigue/types.h"

namespace vfatigue {

inline constexpr std::uint64_t kDefaultSynthSeed = 20230417;
inline constexpr double kSynthFrameDuration = 3.0;

struct SynthConfig {
  int n_recordings = 19;
  int n_train = 10;  // the first n_train recordings form the train split
  double duration_s = 3600.0;
  int dim = 192;
  double drift_magnitude = 8.0;  // in units of noise_sigma
  double noise_sigma = 1.0;
  double per_recording_offset_sigma = 10.0;
  std::uint64_t seed = kDefaultSynthSeed;

  void Validate() const;
};

struct SyntheticRecording {
  EmbeddingSequence sequence;
  RecordingManifest manifest;
  // base + offset_r: the recording-level trait, standing in for a
  // whole-recording embedding.
  Prototype trait;
};

struct SynthCorpus {
  std::vector<SyntheticRecording> recordings;
  Eigen::VectorXd base;
  Eigen::VectorXd drift;
};

SynthCorpus GenerateSynth(const SynthConfig& cfg);

// Writes <id>.emb, <id>.proto.emb and manifest.json (relative paths) into
// out_dir, creating it if needed. Returns the manifest path.
std::string WriteSynthCorpus(const SynthCorpus& corpus,
                             const std::string& out_dir);

}  // namespace vfatigue

#endif  // VFATIGUE_SYNTH_H_
