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

// Dataset manifest, a JSON document of the form
//
//   {
//     "recordings": [
//       {"recording_id": "imip01", "split": "train", "duration_s": 5040,
//        "embedding_path": "imip01.emb", "prototype_path": "imip01.proto"}
//     ]
//   }
//
// "split" is "train" or "test"; "prototype_path" may be omitted or null.
// Relative paths are resolved against the manifest's directory.

#ifndef VFATIGUE_MANIFEST_H_
#define VFATIGUE_MANIFEST_H_

#include <string>
#include <vector>

#include "vfatigue/types.h"

namespace vfatigue {

// Parses and validates a manifest. Paths in the result are resolved and
// checked to be readable (kIoError otherwise); duplicate recording ids and
// schema violations raise kManifestError.
std::vector<RecordingManifest> LoadManifest(const std::string& path);

// Paths are written as given.
void SaveManifest(const std::vector<RecordingManifest>& recordings,
                  const std::string& path);

std::string SplitName(Split split);

}  // namespace vfatigue

#endif  // VFATIGUE_MANIFEST_H_
