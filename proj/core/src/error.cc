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

#include "vfatigue/error.h"

namespace vfatigue {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kEmptySlice: return "EmptySlice";
    case ErrorCode::kWindowTooLarge: return "WindowTooLarge";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kProvenanceError: return "ProvenanceError";
    case ErrorCode::kRecordingTooShort: return "RecordingTooShort";
    case ErrorCode::kOverlappingWindows: return "OverlappingWindows";
    case ErrorCode::kBadComponentCount: return "BadComponentCount";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kPerplexityTooLarge: return "PerplexityTooLarge";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

bool IsEnvironmentError(ErrorCode code) {
  return code == ErrorCode::kIoError || code == ErrorCode::kFormatError ||
         code == ErrorCode::kTruncatedFile;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace vfatigue
