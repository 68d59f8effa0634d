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

#include "vfatigue/types.h"

#include <cmath>
#include <utility>

#include "vfatigue/error.h"

namespace vfatigue {

EmbeddingSequence::EmbeddingSequence(std::string recording_id,
                                     std::string model_id,
                                     std::uint32_t layer,
                                     double frame_duration_s,
                                     double start_offset_s,
                                     FrameMatrix frames)
    : recording_id_(std::move(recording_id)),
      model_id_(std::move(model_id)),
      layer_(layer),
      frame_duration_s_(frame_duration_s),
      start_offset_s_(start_offset_s),
      frames_(std::move(frames)) {
  if (frames_.rows() < 1 || frames_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding sequence needs N >= 1 and D >= 1");
  }
  if (!(std::isfinite(frame_duration_s_) && frame_duration_s_ > 0.0)) {
    throw Error(ErrorCode::kInvalidValue, "frame duration must be > 0");
  }
  if (!(std::isfinite(start_offset_s_) && start_offset_s_ >= 0.0)) {
    throw Error(ErrorCode::kInvalidValue, "start offset must be >= 0");
  }
  if (!frames_.allFinite()) {
    throw Error(ErrorCode::kInvalidValue,
                "non-finite value in frames of '" + recording_id_ + "'");
  }
}

EmbeddingSequence EmbeddingSequence::WithFrames(FrameMatrix frames,
                                                double start_offset_s) const {
  return EmbeddingSequence(recording_id_, model_id_, layer_, frame_duration_s_,
                           start_offset_s, std::move(frames));
}

bool operator==(const EmbeddingSequence& a, const EmbeddingSequence& b) {
  return a.recording_id_ == b.recording_id_ && a.model_id_ == b.model_id_ &&
         a.layer_ == b.layer_ && a.frame_duration_s_ == b.frame_duration_s_ &&
         a.start_offset_s_ == b.start_offset_s_ &&
         a.frames_.rows() == b.frames_.rows() &&
         a.frames_.cols() == b.frames_.cols() && a.frames_ == b.frames_;
}

void LabeledDataset::Validate() const {
  const auto m = static_cast<std::size_t>(features.rows());
  if (labels.size() != m || recording_ids.size() != m || times_s.size() != m) {
    throw Error(ErrorCode::kLengthMismatch,
                "dataset containers have different lengths");
  }
  if (m == 0) {
    throw Error(ErrorCode::kTooFewSamples, "dataset is empty");
  }
  if (num_classes != 2 && num_classes != 3) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be 2 or 3");
  }
  for (int label : labels) {
    if (label < 0 || label >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label " + std::to_string(label) + " out of range");
    }
  }
}

void LabeledDataset::ValidateForTraining() const {
  Validate();
  for (Eigen::Index count : ClassCounts()) {
    if (count == 1) {
      throw Error(ErrorCode::kTooFewSamples,
                  "a class present in the training data has one member");
    }
  }
}

LabeledDataset LabeledDataset::Subset(
    const std::vector<Eigen::Index>& rows) const {
  LabeledDataset out;
  out.num_classes = num_classes;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  out.recording_ids.reserve(rows.size());
  out.times_s.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::Index r = rows[i];
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
    out.labels.push_back(labels[r]);
    out.recording_ids.push_back(recording_ids[r]);
    out.times_s.push_back(times_s[r]);
  }
  return out;
}

void LabeledDataset::Append(const LabeledDataset& other) {
  if (other.size() == 0) return;
  if (size() == 0) {
    *this = other;
    return;
  }
  if (other.features.cols() != features.cols()) {
    throw Error(ErrorCode::kDimMismatch, "cannot append datasets of different "
                                         "dimension");
  }
  if (other.num_classes != num_classes) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot append datasets with different class counts");
  }
  Eigen::MatrixXd merged(features.rows() + other.features.rows(),
                         features.cols());
  merged << features, other.features;
  features = std::move(merged);
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  recording_ids.insert(recording_ids.end(), other.recording_ids.begin(),
                       other.recording_ids.end());
  times_s.insert(times_s.end(), other.times_s.begin(), other.times_s.end());
}

std::vector<Eigen::Index> LabeledDataset::ClassCounts() const {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(num_classes), 0);
  for (int label : labels) ++counts[static_cast<std::size_t>(label)];
  return counts;
}

}  // namespace vfatigue
