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
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "vfatigue/error.h"
#include "vfatigue/preprocess.h"

namespace vfatigue {
namespace {

using testing::RandomSequence;
using testing::SequenceFrom;

TEST(Smooth, OneDimensionalExample) {
  const auto seq = SequenceFrom({{1}, {2}, {3}, {4}});
  const auto out = SmoothFrames(seq, 2);
  ASSERT_EQ(out.num_frames(), 3);
  EXPECT_EQ(out.frames()(0, 0), 1.5);
  EXPECT_EQ(out.frames()(1, 0), 2.5);
  EXPECT_EQ(out.frames()(2, 0), 3.5);
  EXPECT_EQ(out.start_offset_s(), seq.start_offset_s());
  EXPECT_EQ(out.frame_duration_s(), seq.frame_duration_s());
}

TEST(Smooth, SixtySecondsOnThreeSecondFrames) {
  std::mt19937_64 rng(4);
  const auto seq = RandomSequence(rng, 1200, 2);
  EXPECT_EQ(WindowFrames({60.0}, 3.0), 20);
  EXPECT_EQ(Smooth(seq, {60.0}).num_frames(), 1181);
  EXPECT_EQ(Smooth(seq, {30.0}).num_frames(), 1191);
}

TEST(Smooth, MatchesNestedLoopAverage) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + trial * 3;
    const Eigen::Index w = 1 + trial % n;
    const auto seq = RandomSequence(rng, n, 1 + trial % 5);
    const auto out = SmoothFrames(seq, w);
    const Eigen::MatrixXd expect =
        testing::NaiveMovingAverage(seq.frames(), w);
    ASSERT_EQ(out.num_frames(), n - w + 1);
    EXPECT_LE((Eigen::MatrixXd(out.frames()) - expect).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Smooth, IdentityCases) {
  std::mt19937_64 rng(5);
  const auto seq = RandomSequence(rng, 17, 3);
  EXPECT_EQ(SmoothFrames(seq, 1), seq);
  EXPECT_EQ(Smooth(seq, {0.0}), seq);
  EXPECT_EQ(Smooth(seq, {4.4}), seq);  // rounds to one frame
}

TEST(Smooth, ConstantSequenceIsFixpoint) {
  FrameMatrix frames(40, 3);
  frames.rowwise() = Eigen::RowVector3d(0.1, -7.25, 1e3);
  const EmbeddingSequence seq("c", "m", 0, 3.0, 0.0, frames);
  for (Eigen::Index w : {1, 2, 7, 40}) {
    const auto out = SmoothFrames(seq, w);
    ASSERT_EQ(out.num_frames(), 40 - w + 1);
    for (Eigen::Index i = 0; i < out.num_frames(); ++i) {
      EXPECT_LE((out.frames().row(i) - frames.row(0)).cwiseAbs().maxCoeff(),
                1e-12);
    }
  }
}

TEST(Smooth, Errors) {
  std::mt19937_64 rng(5);
  const auto seq = RandomSequence(rng, 10, 2);
  try {
    SmoothFrames(seq, 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWindowTooLarge);
  }
  EXPECT_THROW(Smooth(seq, {-1.0}), Error);
  EXPECT_THROW(Smooth(seq, {1.0}), Error);  // below half a frame
}

TEST(Prototype, MeanOfFrames) {
  const auto p = ComputePrototype(SequenceFrom({{1, 1}, {3, 3}}));
  EXPECT_EQ(p.vector, Eigen::Vector2d(2, 2));
  EXPECT_EQ(p.source, PrototypeSource::kMeanOfFrames);
  const auto single = ComputePrototype(SequenceFrom({{4, -1, 0.5}}));
  EXPECT_EQ(single.vector, Eigen::Vector3d(4, -1, 0.5));
}

TEST(Prototype, SampleMeanConcentrates) {
  std::mt19937_64 rng(12);
  const Eigen::Vector4d mu(1.0, -2.0, 0.5, 10.0);
  const double sigma = 2.0;
  FrameMatrix frames = testing::RandomMatrix(rng, 100, 4, sigma);
  frames.rowwise() += mu.transpose();
  const auto p = ComputePrototype(EmbeddingSequence("r", "m", 0, 3.0, 0.0, frames));
  EXPECT_LE((p.vector - mu).cwiseAbs().maxCoeff(), 3.0 * sigma / 10.0);
}

TEST(Normalize, Examples) {
  const auto seq = SequenceFrom({{1, 2}, {3, 4}});
  const auto out = Normalize(seq, Prototype{"", Eigen::Vector2d(1, 2), {}});
  EXPECT_EQ(out.frames(), (FrameMatrix(2, 2) << 0, 0, 2, 2).finished());
  EXPECT_EQ(Normalize(seq, Prototype{"", Eigen::Vector2d::Zero(), {}}), seq);

  std::mt19937_64 rng(3);
  const auto r = RandomSequence(rng, 50, 6);
  const auto centered = Normalize(r, ComputePrototype(r));
  EXPECT_LE(centered.frames().colwise().mean().cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Normalize, Errors) {
  const auto seq = SequenceFrom({{1, 2}}, 3.0, "rec-a");
  try {
    Normalize(seq, Prototype{"", Eigen::Vector3d::Zero(), {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimMismatch);
  }
  try {
    Normalize(seq, Prototype{"rec-b", Eigen::Vector2d::Zero(), {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProvenanceError);
  }
}

TEST(Normalize, NegatedPrototypeInverts) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto seq = RandomSequence(rng, 30, 5);
    const Eigen::VectorXd p = testing::RandomMatrix(rng, 5, 1, 10.0);
    const auto there = Normalize(seq, Prototype{"", p, {}});
    const auto back = Normalize(there, Prototype{"", -p, {}});
    EXPECT_LE((back.frames() - seq.frames()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Normalize, CommutesWithSmoothing) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> size(2, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    const auto seq = RandomSequence(rng, n, 1 + trial % 8);
    const Prototype p{"", testing::RandomMatrix(rng, seq.dim(), 1, 5.0), {}};
    const Eigen::Index w = 1 + static_cast<Eigen::Index>(rng() % n);
    const auto a = SmoothFrames(Normalize(seq, p), w).frames();
    const auto b = Normalize(SmoothFrames(seq, w), p).frames();
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    EXPECT_LE((a - b).cwiseAbs().maxCoeff() / scale, 1e-6);
  }
}

TEST(Labels, BinaryCountsOnThreeSecondFrames) {
  std::mt19937_64 rng(2);
  for (double duration : {3600.0, 4800.0}) {
    const auto n = static_cast<Eigen::Index>(duration / 3.0);
    const auto seq = RandomSequence(rng, n, 2);
    const auto data = AssignLabels(seq, LabelSpec{}, duration);
    const auto counts = data.ClassCounts();
    EXPECT_EQ(counts[kClassNonFatigued], 200);
    EXPECT_EQ(counts[kClassFatigued], 200);
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      const double t = data.times_s[i];
      if (data.labels[i] == kClassNonFatigued) {
        EXPECT_LT(t, 600.0);
      } else {
        EXPECT_GE(t, 3000.0);
        EXPECT_LT(t, 3600.0);
      }
    }
  }
}

TEST(Labels, ThreeClassWindows) {
  const auto windows = LabelWindows({LabelMode::kThreeClass, 600.0}, 4800.0);
  ASSERT_EQ(windows.size(), 3u);
  EXPECT_EQ(windows[0].start_s, 0.0);
  EXPECT_EQ(windows[1].label, kClassMid);
  EXPECT_EQ(windows[1].start_s, 2100.0);
  EXPECT_EQ(windows[1].end_s, 2700.0);
  EXPECT_EQ(windows[2].start_s, 4200.0);
  EXPECT_EQ(windows[2].label, kClassFatigued);
}

TEST(Labels, Errors) {
  try {
    LabelWindows(LabelSpec{}, 3000.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRecordingTooShort);
  }
  try {
    LabelWindows({LabelMode::kThreeClass, 600.0}, 1500.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingWindows);
  }
  try {
    LabelWindows({LabelMode::kBinary, 3100.0}, 7200.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlappingWindows);
  }
}

}  // namespace
}  // namespace vfatigue
