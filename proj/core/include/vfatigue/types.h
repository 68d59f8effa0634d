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

#ifndef VFATIGUE_TYPES_H_
#define VFATIGUE_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vfatigue {

// One embedding frame per row.
using FrameMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A time-ordered run of fixed-dimension embeddings for one recording.
//
// Frame timestamps are not stored; frame i starts at
// start_offset_s() + i * frame_duration_s(). Instances are validated on
// construction (N >= 1, D >= 1, finite entries, positive frame duration)
// and immutable afterwards.
class EmbeddingSequence {
 public:
  EmbeddingSequence(std::string recording_id, std::string model_id,
                    std::uint32_t layer, double frame_duration_s,
                    double start_offset_s, FrameMatrix frames);

  const std::string& recording_id() const { return recording_id_; }
  const std::string& model_id() const { return model_id_; }
  std::uint32_t layer() const { return layer_; }
  double frame_duration_s() const { return frame_duration_s_; }
  double start_offset_s() const { return start_offset_s_; }
  const FrameMatrix& frames() const { return frames_; }

  Eigen::Index num_frames() const { return frames_.rows(); }
  Eigen::Index dim() const { return frames_.cols(); }
  double TimeOf(Eigen::Index frame) const {
    return start_offset_s_ + static_cast<double>(frame) * frame_duration_s_;
  }

  // Same metadata, new payload and start offset.
  EmbeddingSequence WithFrames(FrameMatrix frames,
                               double start_offset_s) const;

  friend bool operator==(const EmbeddingSequence& a,
                         const EmbeddingSequence& b);

 private:
  std::string recording_id_;
  std::string model_id_;
  std::uint32_t layer_;
  double frame_duration_s_;
  double start_offset_s_;
  FrameMatrix frames_;
};

enum class PrototypeSource { kExternallySupplied, kMeanOfFrames };

// The constant vector subtracted from every frame of one recording.
struct Prototype {
  std::string recording_id;  // empty means "not bound to a recording"
  Eigen::VectorXd vector;
  PrototypeSource source = PrototypeSource::kExternallySupplied;
};

enum class Split { kTrain, kTest };

struct RecordingManifest {
  std::string recording_id;
  Split split = Split::kTrain;
  double duration_s = 0.0;
  std::string embedding_path;
  std::optional<std::string> prototype_path;
};

// Flat table of labeled feature rows pooled from one or more recordings.
struct LabeledDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> recording_ids;
  std::vector<double> times_s;
  int num_classes = 2;

  Eigen::Index size() const { return features.rows(); }

  // Throws kLengthMismatch / kInvalidArgument when the containers disagree
  // or labels fall outside [0, num_classes).
  void Validate() const;
  // Additionally requires every present class to have >= 2 members.
  void ValidateForTraining() const;

  LabeledDataset Subset(const std::vector<Eigen::Index>& rows) const;
  // Row-wise concatenation; both operands must share dim and num_classes.
  void Append(const LabeledDataset& other);
  std::vector<Eigen::Index> ClassCounts() const;
};

}  // namespace vfatigue

#endif  // VFATIGUE_TYPES_H_
