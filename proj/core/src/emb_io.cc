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

#include "vfatigue/emb_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "vfatigue/error.h"
#include "vfatigue/file_util.h"

namespace vfatigue {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

float NarrowChecked(double value, const char* what) {
  const auto narrowed = static_cast<float>(value);
  if (!std::isfinite(narrowed)) {
    throw Error(ErrorCode::kInvalidValue,
                std::string(what) + " is not representable as f32");
  }
  return narrowed;
}

void AppendString(std::string* out, const std::string& s) {
  if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "string too long for EMB1");
  }
  AppendU32(out, static_cast<std::uint32_t>(s.size()));
  out->append(s);
}

class Cursor {
 public:
  explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

  void Need(std::uint64_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kTruncatedFile,
                  std::string("EMB1 ends inside ") + what);
    }
  }
  std::uint32_t U32(const char* what) {
    Need(4, what);
    const std::uint32_t v = LoadU32(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }
  float F32(const char* what) {
    Need(4, what);
    const float v = LoadF32(bytes_.data() + pos_);
    pos_ += 4;
    return v;
  }
  std::string String(const char* what) {
    const std::uint32_t len = U32(what);
    Need(len, what);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }
  const char* Here() const { return bytes_.data() + pos_; }
  void Skip(std::size_t n) { pos_ += n; }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void AppendU32(std::string* out, std::uint32_t value) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out->append(b, 4);
}

void AppendF32(std::string* out, float value) {
  AppendU32(out, std::bit_cast<std::uint32_t>(value));
}

std::uint32_t LoadU32(const char* data) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[i]))
         << (8 * i);
  }
  return v;
}

float LoadF32(const char* data) { return std::bit_cast<float>(LoadU32(data)); }

std::string EncodeEmbeddings(const EmbeddingSequence& seq) {
  const auto n = static_cast<std::uint64_t>(seq.num_frames());
  const auto d = static_cast<std::uint64_t>(seq.dim());
  if (n > std::numeric_limits<std::uint32_t>::max() ||
      d > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidArgument, "sequence too large for EMB1");
  }
  std::string out;
  out.reserve(kEmbFixedHeaderBytes + seq.recording_id().size() + 4 +
              seq.model_id().size() + 4 * n * d);
  out.append(kMagic, 4);
  AppendU32(&out, kEmbFormatVersion);
  AppendU32(&out, static_cast<std::uint32_t>(d));
  AppendU32(&out, static_cast<std::uint32_t>(n));
  AppendF32(&out, NarrowChecked(seq.frame_duration_s(), "frame_duration_s"));
  AppendF32(&out, NarrowChecked(seq.start_offset_s(), "start_offset_s"));
  AppendU32(&out, seq.layer());
  AppendString(&out, seq.recording_id());
  AppendString(&out, seq.model_id());
  const FrameMatrix& frames = seq.frames();
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    for (Eigen::Index j = 0; j < frames.cols(); ++j) {
      AppendF32(&out, NarrowChecked(frames(i, j), "frame value"));
    }
  }
  return out;
}

EmbeddingSequence DecodeEmbeddings(std::string_view bytes,
                                   std::size_t* consumed) {
  Cursor cur(bytes);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormatError, "missing EMB1 magic");
  }
  cur.Skip(4);
  const std::uint32_t version = cur.U32("header");
  if (version != kEmbFormatVersion) {
    throw Error(ErrorCode::kFormatError,
                "unsupported EMB1 version " + std::to_string(version));
  }
  const std::uint32_t d = cur.U32("header");
  const std::uint32_t n = cur.U32("header");
  const float frame_duration = cur.F32("header");
  const float start_offset = cur.F32("header");
  const std::uint32_t layer = cur.U32("header");
  std::string recording_id = cur.String("recording_id");
  std::string model_id = cur.String("model_id");
  if (n == 0 || d == 0) {
    throw Error(ErrorCode::kFormatError, "EMB1 declares an empty matrix");
  }
  const std::uint64_t count = static_cast<std::uint64_t>(n) * d;
  cur.Need(4 * count, "frame payload");

  FrameMatrix frames(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const char* p = cur.Here();
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    for (Eigen::Index j = 0; j < frames.cols(); ++j) {
      const float v = LoadF32(p);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInvalidValue,
                    "non-finite value at frame " + std::to_string(i));
      }
      frames(i, j) = v;
      p += 4;
    }
  }
  cur.Skip(4 * count);
  if (consumed != nullptr) *consumed = cur.pos();
  return EmbeddingSequence(std::move(recording_id), std::move(model_id), layer,
                           frame_duration, start_offset, std::move(frames));
}

EmbeddingSequence ReadEmbeddings(const std::string& path) {
  const std::string bytes = ReadFileBytes(path);
  std::size_t consumed = 0;
  EmbeddingSequence seq = DecodeEmbeddings(bytes, &consumed);
  if (consumed != bytes.size()) {
    throw Error(ErrorCode::kFormatError,
                "trailing bytes after EMB1 payload in '" + path + "'");
  }
  return seq;
}

void WriteEmbeddings(const EmbeddingSequence& seq, const std::string& path) {
  WriteFileAtomic(path, EncodeEmbeddings(seq));
}

Prototype ReadPrototype(const std::string& path) {
  EmbeddingSequence seq = ReadEmbeddings(path);
  if (seq.num_frames() != 1) {
    throw Error(ErrorCode::kFormatError,
                "prototype file '" + path + "' must hold exactly one frame");
  }
  return Prototype{seq.recording_id(), seq.frames().row(0).transpose(),
                   PrototypeSource::kExternallySupplied};
}

void WritePrototype(const Prototype& prototype, const std::string& model_id,
                    const std::string& path) {
  FrameMatrix frame = prototype.vector.transpose();
  WriteEmbeddings(EmbeddingSequence(prototype.recording_id, model_id, 0, 1.0,
                                    0.0, std::move(frame)),
                  path);
}

EmbeddingSequence SliceByTime(const EmbeddingSequence& seq, double start_s,
                              double end_s) {
  if (!(start_s >= 0.0 && start_s < end_s)) {
    throw Error(ErrorCode::kInvalidArgument,
                "slice bounds must satisfy 0 <= start < end");
  }
  Eigen::Index first = -1;
  Eigen::Index last = -1;  // exclusive
  for (Eigen::Index i = 0; i < seq.num_frames(); ++i) {
    const double t = seq.TimeOf(i);
    if (t >= start_s && t < end_s) {
      if (first < 0) first = i;
      last = i + 1;
    }
  }
  if (first < 0) {
    throw Error(ErrorCode::kEmptySlice,
                "no frames of '" + seq.recording_id() + "' in [" +
                    std::to_string(start_s) + ", " + std::to_string(end_s) +
                    ")");
  }
  return seq.WithFrames(seq.frames().middleRows(first, last - first),
                        seq.TimeOf(first));
}

}  // namespace vfatigue
