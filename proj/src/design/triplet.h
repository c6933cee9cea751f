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
#ifndef AIC_DESIGN_TRIPLET_H_
#define AIC_DESIGN_TRIPLET_H_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "catalog/manifest.h"

namespace aic::design {

enum class Method { kBtc, kPtc };

absl::string_view MethodName(Method method);
absl::StatusOr<Method> ParseMethod(absl::string_view name);

// A compressed image of the triplet's source, or the source itself
// (level 0, empty codec).
struct StimulusRef {
  std::string codec;
  int level = 0;

  static StimulusRef Source() { return {}; }
  bool IsSource() const { return level == 0; }
  // "SOURCE" or "<codec>:<level>".
  std::string ToString() const;
  static absl::StatusOr<StimulusRef> Parse(absl::string_view text);

  auto operator<=>(const StimulusRef&) const = default;
};

enum class TripletKind { kSameCodec, kCrossCodec };

absl::string_view KindName(TripletKind kind);
absl::StatusOr<TripletKind> ParseKind(absl::string_view name);

// (left, pivot, right) where the pivot is always the source image.
struct Triplet {
  std::string id;
  Method method = Method::kBtc;
  std::string source_id;
  StimulusRef left;
  StimulusRef right;
  TripletKind kind = TripletKind::kSameCodec;

  static Triplet Make(Method method, std::string source_id, StimulusRef left,
                      StimulusRef right);
  Triplet Mirror() const;
  std::string MirrorId() const;
  // |level_left - level_right| with the source at level 0.
  int LevelDifference() const;
};

std::string MakeTripletId(Method method, absl::string_view source_id,
                          const StimulusRef& left, const StimulusRef& right);

// Both orders of every unordered pair drawn from {SOURCE, 1..L} of one
// (source, codec) ladder: L(L+1) triplets.
absl::StatusOr<std::vector<Triplet>> GenerateSameCodec(
    const catalog::StudyManifest& manifest, const std::string& source_id,
    const std::string& codec_id, Method method);

// `count` triplets comparing different codecs of one source. Each sampled
// (codec_a:level, codec_b:level) comparison appears in both orders. In
// balanced mode every codec pair receives the same number of comparisons.
absl::StatusOr<std::vector<Triplet>> GenerateCrossCodec(
    const catalog::StudyManifest& manifest, const std::string& source_id,
    Method method, int count, uint64_t seed, bool balanced = true);

}  // namespace aic::design

#endif  // AIC_DESIGN_TRIPLET_H_
