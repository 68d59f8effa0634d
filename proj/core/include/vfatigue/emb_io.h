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

// EMB1 embedding container, little-endian throughout:
//
//   offset  size  field
//   0       4     magic "EMB1"
//   4       4     u32 format version (= 1)
//   8       4     u32 D (frame dimension)
//   12      4     u32 N (frame count)
//   16      4     f32 frame_duration_s
//   20      4     f32 start_offset_s
//   24      4     u32 layer
//   28      4     u32 L, then L bytes of UTF-8 recording_id
//   ..      4     u32 L2, then L2 bytes of UTF-8 model_id
//   ..      4*N*D f32 frames, row-major
//
// Frames are held as double in memory and narrowed to f32 on write, so a
// sequence that came from a file round-trips bit-exactly.

#ifndef VFATIGUE_EMB_IO_H_
#define VFATIGUE_EMB_IO_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "vfatigue/types.h"

namespace vfatigue {

inline constexpr std::uint32_t kEmbFormatVersion = 1;
inline constexpr std::size_t kEmbFixedHeaderBytes = 32;

std::string EncodeEmbeddings(const EmbeddingSequence& seq);

// Decodes one EMB1 block starting at bytes[0]. On success *consumed holds
// the block length, so containers may embed EMB1 blocks back to back.
EmbeddingSequence DecodeEmbeddings(std::string_view bytes,
                                   std::size_t* consumed);

EmbeddingSequence ReadEmbeddings(const std::string& path);
void WriteEmbeddings(const EmbeddingSequence& seq, const std::string& path);

// Prototype files are EMB1 files with N = 1.
Prototype ReadPrototype(const std::string& path);
void WritePrototype(const Prototype& prototype, const std::string& model_id,
                    const std::string& path);

// Frames whose timestamp t satisfies start_s <= t < end_s. end_s may be
// +infinity. Throws kEmptySlice when nothing is selected.
EmbeddingSequence SliceByTime(const EmbeddingSequence& seq, double start_s,
                              double end_s);

// Little-endian scalar helpers shared by the binary containers.
void AppendU32(std::string* out, std::uint32_t value);
void AppendF32(std::string* out, float value);
std::uint32_t LoadU32(const char* data);
float LoadF32(const char* data);

}  // namespace vfatigue

#endif  // VFATIGUE_EMB_IO_H_
