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

#ifndef VFATIGUE_FILE_UTIL_H_
#define VFATIGUE_FILE_UTIL_H_

#include <string>
#include <string_view>

namespace vfatigue {

// Throws Error(kIoError) when the file cannot be opened or read.
std::string ReadFileBytes(const std::string& path);

// Writes to "<path>.tmp" and renames over path. Throws Error(kIoError).
void WriteFileAtomic(const std::string& path, std::string_view contents);

// Resolves a relative path against base_dir; absolute paths pass through.
std::string ResolvePath(const std::string& base_dir, const std::string& path);

}  // namespace vfatigue

#endif  // VFATIGUE_FILE_UTIL_H_
