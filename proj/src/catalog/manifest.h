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
#ifndef AIC_CATALOG_MANIFEST_H_
#define AIC_CATALOG_MANIFEST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace aic::catalog {

struct SourceImage {
  std::string id;
  int width = 0;
  int height = 0;
  std::string color_space = "Rec2100PQ";
  std::filesystem::path file;

  double PixelCount() const { return static_cast<double>(width) * height; }
};

// Affine map applied to a nominal target bitrate before searching, e.g.
// scale=2 with a per-source offset for legacy codecs that need more bits.
struct BitrateRule {
  double scale = 1.0;
  double offset = 0.0;
  std::map<std::string, double> source_offsets;

  double Apply(const std::string& source_id, double target_bpp) const;
  bool IsIdentity() const {
    return scale == 1.0 && offset == 0.0 && source_offsets.empty();
  }
};

struct CodecRecipe {
  std::string id;
  // Placeholders: {quality}, {input}, {output}.
  std::string encode_command;
  int quality_min = 1;
  int quality_max = 100;
  // True when a larger quality setting produces a larger file.
  bool higher_quality_is_larger = true;
  BitrateRule bitrate_rule;
};

struct Stimulus {
  std::string source_id;
  std::string codec_id;
  int level = 0;  // 1 = highest bitrate.
  double target_bpp = 0;
  double actual_bpp = 0;
  int quality = 0;
  std::filesystem::path file;
};

class StudyManifest {
 public:
  std::vector<SourceImage> sources;
  std::vector<CodecRecipe> codecs;
  std::vector<Stimulus> stimuli;
  int levels_per_codec = 5;
  int responses_per_triplet_target = 24;
  // Directory the manifest was loaded from; relative paths resolve here.
  std::filesystem::path base_dir;

  // Checks every catalog invariant. Errors name the offending entity.
  absl::Status Validate() const;

  const SourceImage* FindSource(const std::string& id) const;
  const CodecRecipe* FindCodec(const std::string& id) const;
  const Stimulus* FindStimulus(const std::string& source_id,
                               const std::string& codec_id, int level) const;
  // Stimuli of one (source, codec), sorted by level.
  std::vector<const Stimulus*> Ladder(const std::string& source_id,
                                      const std::string& codec_id) const;

  std::filesystem::path Resolve(const std::filesystem::path& p) const;
};

absl::StatusOr<StudyManifest> ParseManifest(const std::string& json_text,
                                            const std::filesystem::path& base_dir);
absl::StatusOr<StudyManifest> LoadManifest(const std::filesystem::path& path);
std::string SerializeManifest(const StudyManifest& manifest);
absl::Status WriteManifest(const StudyManifest& manifest,
                           const std::filesystem::path& path);

}  // namespace aic::catalog

#endif  // AIC_CATALOG_MANIFEST_H_
