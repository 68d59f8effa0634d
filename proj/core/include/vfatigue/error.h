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

#ifndef VFATIGUE_ERROR_H_
#define VFATIGUE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vfatigue {

enum class ErrorCode {
  // Input/environment failures.
  kIoError,
  kFormatError,
  kTruncatedFile,
  // Domain/validation failures.
  kInvalidValue,
  kInvalidArgument,
  kManifestError,
  kEmptySlice,
  kWindowTooLarge,
  kDimMismatch,
  kProvenanceError,
  kRecordingTooShort,
  kOverlappingWindows,
  kBadComponentCount,
  kDegenerateLabels,
  kTooFewSamples,
  kPerplexityTooLarge,
  kTooFewPoints,
  kLengthMismatch,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for codes that stem from the filesystem or a malformed file rather
// than from the data's content. The CLI maps these to exit status 1.
bool IsEnvironmentError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vfatigue

#endif  // VFATIGUE_ERROR_H_
