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
#include "catalog/bitrate_match.h"

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"

namespace aic::catalog {

int MaxMatchEvaluations(const CodecRecipe& recipe) {
  const int span = recipe.quality_max - recipe.quality_min;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(span)))) + 2;
}

absl::StatusOr<MatchResult> MatchBitrate(const CodecRecipe& recipe,
                                         const SourceImage& source,
                                         double target_bpp, double tolerance,
                                         const BitrateProbe& probe) {
  if (!(tolerance > 0)) {
    return absl::InvalidArgumentError("tolerance must be > 0");
  }
  if (recipe.quality_min >= recipe.quality_max) {
    return absl::InvalidArgumentError(
        absl::StrCat("codec '", recipe.id, "': empty quality range"));
  }
  const double target = recipe.bitrate_rule.Apply(source.id, target_bpp);
  if (!(target > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("adjusted target ", target, " bpp is not positive"));
  }

  // Search on an index axis along which the bitrate grows.
  const int n = recipe.quality_max - recipe.quality_min + 1;
  auto quality_at = [&](int i) {
    return recipe.higher_quality_is_larger ? recipe.quality_min + i
                                           : recipe.quality_max - i;
  };

  MatchResult best;
  best.adjusted_target_bpp = target;
  int best_index = -1;
  double best_err = 0;
  int lo = 0;
  int hi = n - 1;
  while (lo <= hi) {
    const int mid = lo + (hi - lo) / 2;
    auto bpp = probe(quality_at(mid));
    ++best.evaluations;
    if (!bpp.ok()) {
      return absl::Status(bpp.status().code(),
                          absl::StrCat("encoder '", recipe.id, "' at quality ",
                                       quality_at(mid), ": ", bpp.status().message()));
    }
    const double err = std::abs(*bpp - target);
    if (best_index < 0 || err < best_err || (err == best_err && mid < best_index)) {
      best_index = mid;
      best_err = err;
      best.actual_bpp = *bpp;
    }
    if (*bpp < target) {
      lo = mid + 1;
    } else if (*bpp > target) {
      hi = mid - 1;
    } else {
      break;
    }
  }
  best.quality = quality_at(best_index);
  best.out_of_range = hi < 0 || lo > n - 1;
  best.relative_deviation = (best.actual_bpp - target) / target;
  best.within_tolerance = std::abs(best.relative_deviation) <= tolerance;
  return best;
}

BitrateProbe MakeCommandProbe(const CodecRecipe& recipe,
                              const SourceImage& source,
                              const std::filesystem::path& base_dir,
                              const std::filesystem::path& work_dir) {
  std::filesystem::path input =
      source.file.is_absolute() ? source.file : base_dir / source.file;
  return [recipe, source, input, work_dir](int quality) -> absl::StatusOr<double> {
    std::error_code ec;
    std::filesystem::create_directories(work_dir, ec);
    const std::filesystem::path output =
        work_dir / absl::StrCat(recipe.id, "_", source.id, "_q", quality, ".bin");
    const std::string cmd = absl::StrReplaceAll(
        recipe.encode_command, {{"{quality}", absl::StrCat(quality)},
                                {"{input}", input.string()},
                                {"{output}", output.string()},
                                {"{width}", absl::StrCat(source.width)},
                                {"{height}", absl::StrCat(source.height)}});
    const int rc = std::system(cmd.c_str());
    if (rc != 0) {
      return absl::InternalError(absl::StrCat("command exited with ", rc, ": ", cmd));
    }
    const auto bytes = std::filesystem::file_size(output, ec);
    if (ec) {
      return absl::NotFoundError(
          absl::StrCat("encoder produced no output at ", output.string()));
    }
    return static_cast<double>(bytes) * 8.0 / source.PixelCount();
  };
}

}  // namespace aic::catalog
