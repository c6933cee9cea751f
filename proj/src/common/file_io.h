// Copyright 2026 The AIC Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AIC_COMMON_FILE_IO_H_
#define AIC_COMMON_FILE_IO_H_

#include <filesystem>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace aic {

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file, fsyncs it, then renames over `path`.
absl::Status WriteFileAtomic(const std::filesystem::path& path,
                             absl::string_view contents);

// Lowercase hex SHA-256 of a file's bytes.
absl::StatusOr<std::string> Sha256File(const std::filesystem::path& path);
std::string Sha256Hex(absl::string_view bytes);

}  // namespace aic

#endif  // AIC_COMMON_FILE_IO_H_
