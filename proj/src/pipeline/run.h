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
#ifndef AIC_PIPELINE_RUN_H_
#define AIC_PIPELINE_RUN_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace aic::pipeline {

inline constexpr char kVersion[] = "0.1.0";

// Stage order. "collect" either simulates observers through the response
// store, exports an existing store, or adopts a given response file.
const std::vector<std::string>& StageNames();

struct RunConfig {
  std::filesystem::path config_path;
  std::filesystem::path base_dir;  // directory of the config file
  uint64_t root_seed = 1;
  nlohmann::json doc;

  // Resolves a config-relative path.
  std::filesystem::path Path(const std::filesystem::path& p) const;
  // Output paths live under "work_dir".
  std::filesystem::path Output(const std::string& stage, const std::string& key,
                               const std::string& fallback) const;
  uint64_t StageSeed(const std::string& stage) const;
};

absl::StatusOr<RunConfig> LoadRunConfig(const std::filesystem::path& path);

struct StageRecord {
  std::string name;
  std::string status;  // "ok" | "failed"
  uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path -> sha256
  nlohmann::json metrics = nlohmann::json::object();
  std::string diagnostics;
};

struct RunReport {
  std::string version = kVersion;
  uint64_t root_seed = 0;
  std::string config_sha256;
  std::vector<StageRecord> stages;

  const StageRecord* Find(const std::string& name) const;
  nlohmann::json ToJson() const;
  static absl::StatusOr<RunReport> FromJson(const nlohmann::json& doc);
};

// Runs the requested stages (all when empty) in pipeline order and writes the
// report to the configured path. Stops at the first failing stage; the
// returned report then ends with that stage's diagnostics.
absl::StatusOr<RunReport> Run(const RunConfig& config,
                              const std::vector<std::string>& stages);

}  // namespace aic::pipeline

#endif  // AIC_PIPELINE_RUN_H_
