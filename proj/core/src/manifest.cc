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

#include "vfatigue/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "vfatigue/error.h"
#include "vfatigue/file_util.h"

namespace vfatigue {

namespace {

using nlohmann::json;

void CheckReadable(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read '" + path + "'");
}

Split ParseSplit(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw Error(ErrorCode::kManifestError, "unknown split '" + s + "'");
}

}  // namespace

std::string SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

std::vector<RecordingManifest> LoadManifest(const std::string& path) {
  const std::string text = ReadFileBytes(path);
  const std::string base =
      std::filesystem::path(path).parent_path().string();
  std::vector<RecordingManifest> out;
  std::set<std::string> seen;
  try {
    const json doc = json::parse(text);
    for (const json& item : doc.at("recordings")) {
      RecordingManifest rec;
      rec.recording_id = item.at("recording_id").get<std::string>();
      rec.split = ParseSplit(item.at("split").get<std::string>());
      rec.duration_s = item.at("duration_s").get<double>();
      rec.embedding_path =
          ResolvePath(base, item.at("embedding_path").get<std::string>());
      if (item.contains("prototype_path") && !item["prototype_path"].is_null()) {
        rec.prototype_path =
            ResolvePath(base, item["prototype_path"].get<std::string>());
      }
      if (rec.recording_id.empty()) {
        throw Error(ErrorCode::kManifestError, "empty recording_id");
      }
      if (!(rec.duration_s > 0.0)) {
        throw Error(ErrorCode::kManifestError,
                    "duration_s of '" + rec.recording_id + "' must be > 0");
      }
      if (!seen.insert(rec.recording_id).second) {
        throw Error(ErrorCode::kManifestError,
                    "duplicate recording_id '" + rec.recording_id + "'");
      }
      out.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestError,
                "malformed manifest '" + path + "': " + e.what());
  }
  for (const RecordingManifest& rec : out) {
    CheckReadable(rec.embedding_path);
    if (rec.prototype_path) CheckReadable(*rec.prototype_path);
  }
  return out;
}

void SaveManifest(const std::vector<RecordingManifest>& recordings,
                  const std::string& path) {
  json items = json::array();
  for (const RecordingManifest& rec : recordings) {
    json item = {{"recording_id", rec.recording_id},
                 {"split", SplitName(rec.split)},
                 {"duration_s", rec.duration_s},
                 {"embedding_path", rec.embedding_path}};
    item["prototype_path"] =
        rec.prototype_path ? json(*rec.prototype_path) : json(nullptr);
    items.push_back(std::move(item));
  }
  WriteFileAtomic(path, json{{"recordings", items}}.dump(2) + "\n");
}

}  // namespace vfatigue
