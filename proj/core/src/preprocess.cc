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

#include "vfatigue/preprocess.h"

#include <cmath>

#include "vfatigue/error.h"

namespace vfatigue {

Eigen::Index WindowFrames(const SmoothingConfig& cfg, double frame_duration_s) {
  if (!(cfg.window_s >= 0.0) || !std::isfinite(cfg.window_s)) {
    throw Error(ErrorCode::kInvalidArgument, "window_s must be >= 0");
  }
  if (cfg.window_s == 0.0) return 1;
  const auto w =
      static_cast<Eigen::Index>(std::llround(cfg.window_s / frame_duration_s));
  if (w < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "smoothing window shorter than half a frame");
  }
  return w;
}

EmbeddingSequence Smooth(const EmbeddingSequence& seq,
                         const SmoothingConfig& cfg) {
  return SmoothFrames(seq, WindowFrames(cfg, seq.frame_duration_s()));
}

EmbeddingSequence SmoothFrames(const EmbeddingSequence& seq, Eigen::Index w) {
  if (w < 1) throw Error(ErrorCode::kInvalidArgument, "window must be >= 1");
  const Eigen::Index n = seq.num_frames();
  if (w > n) {
    throw Error(ErrorCode::kWindowTooLarge,
                "window of " + std::to_string(w) + " frames exceeds " +
                    std::to_string(n) + " frames of '" + seq.recording_id() +
                    "'");
  }
  if (w == 1) return seq;
  const FrameMatrix& in = seq.frames();
  FrameMatrix out(n - w + 1, seq.dim());
  // Each window is summed directly so constant inputs stay (near) exact.
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out.row(i) = in.middleRows(i, w).colwise().sum() / static_cast<double>(w);
  }
  return seq.WithFrames(std::move(out), seq.start_offset_s());
}

Prototype ComputePrototype(const EmbeddingSequence& seq) {
  return Prototype{seq.recording_id(), seq.frames().colwise().mean().transpose(),
                   PrototypeSource::kMeanOfFrames};
}

EmbeddingSequence Normalize(const EmbeddingSequence& seq, const Prototype& p) {
  if (p.vector.size() != seq.dim()) {
    throw Error(ErrorCode::kDimMismatch,
                "prototype has " + std::to_string(p.vector.size()) +
                    " dims, sequence has " + std::to_string(seq.dim()));
  }
  if (!p.recording_id.empty() && p.recording_id != seq.recording_id()) {
    throw Error(ErrorCode::kProvenanceError,
                "prototype of '" + p.recording_id + "' applied to '" +
                    seq.recording_id() + "'");
  }
  FrameMatrix out = seq.frames().rowwise() - p.vector.transpose();
  return seq.WithFrames(std::move(out), seq.start_offset_s());
}

std::vector<LabelWindow> LabelWindows(const LabelSpec& spec,
                                      double duration_s) {
  const double d = spec.segment_duration_s;
  if (!(d > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "segment duration must be > 0");
  }
  std::vector<LabelWindow> windows;
  if (spec.mode == LabelMode::kBinary) {
    if (duration_s < kBinaryMinDuration ||
        duration_s < kBinaryFatiguedStart + d) {
      throw Error(ErrorCode::kRecordingTooShort,
                  "binary labeling needs >= 3600 s, got " +
                      std::to_string(duration_s) + " s");
    }
    if (d > kBinaryFatiguedStart) {
      throw Error(ErrorCode::kOverlappingWindows,
                  "NF and F windows overlap for d > 3000 s");
    }
    windows.push_back({0.0, d, kClassNonFatigued});
    windows.push_back({kBinaryFatiguedStart, kBinaryFatiguedStart + d,
                       kClassFatigued});
    return windows;
  }
  if (duration_s < d) {
    throw Error(ErrorCode::kRecordingTooShort,
                "recording shorter than one label window");
  }
  const double mid_start = duration_s / 2.0 - d / 2.0;
  if (d > mid_start) {
    throw Error(ErrorCode::kOverlappingWindows,
                "three-class windows overlap on a " +
                    std::to_string(duration_s) + " s recording");
  }
  windows.push_back({0.0, d, kClassNonFatigued});
  windows.push_back({mid_start, mid_start + d, kClassMid});
  windows.push_back({duration_s - d, duration_s, kClassFatigued});
  return windows;
}

LabeledDataset AssignLabels(const EmbeddingSequence& seq, const LabelSpec& spec,
                            double duration_s) {
  const std::vector<LabelWindow> windows = LabelWindows(spec, duration_s);
  std::vector<Eigen::Index> rows;
  std::vector<int> labels;
  for (Eigen::Index i = 0; i < seq.num_frames(); ++i) {
    const double t = seq.TimeOf(i);
    for (const LabelWindow& win : windows) {
      if (t >= win.start_s && t < win.end_s) {
        rows.push_back(i);
        labels.push_back(win.label);
        break;
      }
    }
  }
  LabeledDataset out;
  out.num_classes = spec.num_classes();
  out.features.resize(static_cast<Eigen::Index>(rows.size()), seq.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.features.row(static_cast<Eigen::Index>(k)) = seq.frames().row(rows[k]);
    out.times_s.push_back(seq.TimeOf(rows[k]));
  }
  out.labels = std::move(labels);
  out.recording_ids.assign(rows.size(), seq.recording_id());
  return out;
}

std::vector<std::string> ClassNames(int num_classes) {
  if (num_classes == 2) return {"NF", "F"};
  return {"NF", "F", "Mid"};
}

}  // namespace vfatigue
