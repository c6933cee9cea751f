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
#ifndef AIC_SCALE_MODEL_IO_H_
#define AIC_SCALE_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "catalog/manifest.h"
#include "scale/bootstrap.h"
#include "scale/model.h"

namespace aic::scale {

struct ModelFile {
  double k = 1.0;
  std::vector<SourceModel> sources;

  const SourceModel* Find(const std::string& source_id) const;
};

std::string SerializeModels(const ModelFile& models);
absl::StatusOr<ModelFile> ParseModels(const std::string& json_text);
absl::StatusOr<ModelFile> LoadModels(const std::filesystem::path& path);
absl::Status WriteModels(const ModelFile& models, const std::filesystem::path& path);

// Columns: source_id codec_id grid_index bpp estimate lower upper.
std::string SerializeBands(const std::vector<RdCurveBand>& bands);
absl::StatusOr<std::vector<RdCurveBand>> ParseBands(const std::string& text);
absl::StatusOr<std::vector<RdCurveBand>> LoadBands(const std::filesystem::path& path);
absl::Status WriteBands(const std::vector<RdCurveBand>& bands,
                        const std::filesystem::path& path);

// Per-source panel series for plotting: one "curve" row per grid point (with
// band bounds when available) and one "stimulus" row per compressed image.
std::string PlotData(const ModelFile& models, const std::vector<RdCurveBand>& bands,
                     const catalog::StudyManifest& manifest, int grid_size = 100);

}  // namespace aic::scale

#endif  // AIC_SCALE_MODEL_IO_H_
