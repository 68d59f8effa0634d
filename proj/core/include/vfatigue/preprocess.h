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

// Per-recording preprocessing: sliding-window temporal smoothing,
// prototype subtraction, and time-window labeling.

#ifndef VFATIGUE_PREPROCESS_H_
#define VFATIGUE_PREPROCESS_H_

#include <string>
#include <vector>

#include "vfatigue/types.h"

namespace vfatigue {

struct SmoothingConfig {
  double window_s = 0.0;  // 0 disables smoothing
};

// Window length in frames, round(window_s / frame_duration_s); 1 when
// smoothing is disabled. Throws kInvalidArgument if a positive window rounds
// to zero frames.
Eigen::Index WindowFrames(const SmoothingConfig& cfg, double frame_duration_s);

// Stride-1 moving average. Output frame i is the channel-wise mean of input
// frames i..i+w-1 and keeps input frame i's timestamp, giving N - w + 1
// frames. w == 1 returns the input unchanged. Throws kWindowTooLarge for
// w > N.
EmbeddingSequence Smooth(const EmbeddingSequence& seq,
                         const SmoothingConfig& cfg);
EmbeddingSequence SmoothFrames(const EmbeddingSequence& seq, Eigen::Index w);

// Channel-wise mean over all frames.
Prototype ComputePrototype(const EmbeddingSequence& seq);

// Subtracts p from every frame. Throws kDimMismatch on dimension mismatch and
// kProvenanceError when p is bound to a different recording.
EmbeddingSequence Normalize(const EmbeddingSequence& seq, const Prototype& p);

enum class LabelMode { kBinary, kThreeClass };

inline constexpr int kClassNonFatigued = 0;
inline constexpr int kClassFatigued = 1;
inline constexpr int kClassMid = 2;

// Start of the fatigued window for binary labeling (minute 50).
inline constexpr double kBinaryFatiguedStart = 3000.0;
inline constexpr double kBinaryMinDuration = 3600.0;

struct LabelSpec {
  LabelMode mode = LabelMode::kBinary;
  double segment_duration_s = 600.0;

  int num_classes() const { return mode == LabelMode::kBinary ? 2 : 3; }
};

struct LabelWindow {
  double start_s;
  double end_s;  // exclusive
  int label;
};

// Binary: NF = [0, d), F = [3000, 3000 + d).
// Three-class: NF = [0, d), Mid = d centered on the midpoint, F = last d.
// Throws kRecordingTooShort / kOverlappingWindows.
std::vector<LabelWindow> LabelWindows(const LabelSpec& spec, double duration_s);

// Emits every frame whose timestamp falls inside a label window; all other
// frames are dropped.
LabeledDataset AssignLabels(const EmbeddingSequence& seq, const LabelSpec& spec,
                            double duration_s);

std::vector<std::string> ClassNames(int num_classes);

}  // namespace vfatigue

#endif  // VFATIGUE_PREPROCESS_H_
