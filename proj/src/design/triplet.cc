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
#include "design/triplet.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "common/random.h"

namespace aic::design {

absl::string_view MethodName(Method method) {
  return method == Method::kBtc ? "btc" : "ptc";
}

absl::StatusOr<Method> ParseMethod(absl::string_view name) {
  if (name == "btc" || name == "BTC") return Method::kBtc;
  if (name == "ptc" || name == "PTC") return Method::kPtc;
  return absl::InvalidArgumentError(absl::StrCat("unknown method '", name, "'"));
}

std::string StimulusRef::ToString() const {
  if (IsSource()) return "SOURCE";
  return absl::StrCat(codec, ":", level);
}

absl::StatusOr<StimulusRef> StimulusRef::Parse(absl::string_view text) {
  if (text == "SOURCE") return Source();
  const auto colon = text.rfind(':');
  int level = 0;
  if (colon == absl::string_view::npos || colon == 0 ||
      !absl::SimpleAtoi(text.substr(colon + 1), &level) || level < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("bad stimulus reference '", text, "'"));
  }
  return StimulusRef{std::string(text.substr(0, colon)), level};
}

absl::string_view KindName(TripletKind kind) {
  return kind == TripletKind::kSameCodec ? "same_codec" : "cross_codec";
}

absl::StatusOr<TripletKind> ParseKind(absl::string_view name) {
  if (name == "same_codec") return TripletKind::kSameCodec;
  if (name == "cross_codec") return TripletKind::kCrossCodec;
  return absl::InvalidArgumentError(absl::StrCat("unknown triplet kind '", name, "'"));
}

std::string MakeTripletId(Method method, absl::string_view source_id,
                          const StimulusRef& left, const StimulusRef& right) {
  return absl::StrCat(MethodName(method), "|", source_id, "|", left.ToString(), "|",
                      right.ToString());
}

Triplet Triplet::Make(Method method, std::string source_id, StimulusRef left,
                      StimulusRef right) {
  Triplet t;
  t.method = method;
  t.source_id = std::move(source_id);
  t.left = std::move(left);
  t.right = std::move(right);
  const bool same = t.left.IsSource() || t.right.IsSource() ||
                    t.left.codec == t.right.codec;
  t.kind = same ? TripletKind::kSameCodec : TripletKind::kCrossCodec;
  t.id = MakeTripletId(t.method, t.source_id, t.left, t.right);
  return t;
}

Triplet Triplet::Mirror() const { return Make(method, source_id, right, left); }

std::string Triplet::MirrorId() const {
  return MakeTripletId(method, source_id, right, left);
}

int Triplet::LevelDifference() const { return std::abs(left.level - right.level); }

absl::StatusOr<std::vector<Triplet>> GenerateSameCodec(
    const catalog::StudyManifest& manifest, const std::string& source_id,
    const std::string& codec_id, Method method) {
  const auto ladder = manifest.Ladder(source_id, codec_id);
  if (ladder.empty()) {
    return absl::NotFoundError(absl::StrCat("no ladder for (source '", source_id,
                                            "', codec '", codec_id, "')"));
  }
  std::vector<StimulusRef> items = {StimulusRef::Source()};
  for (const auto* st : ladder) items.push_back({codec_id, st->level});
  std::vector<Triplet> out;
  out.reserve(items.size() * (items.size() - 1));
  for (size_t i = 0; i < items.size(); ++i) {
    for (size_t j = i + 1; j < items.size(); ++j) {
      out.push_back(Triplet::Make(method, source_id, items[i], items[j]));
      out.push_back(Triplet::Make(method, source_id, items[j], items[i]));
    }
  }
  return out;
}

absl::StatusOr<std::vector<Triplet>> GenerateCrossCodec(
    const catalog::StudyManifest& manifest, const std::string& source_id,
    Method method, int count, uint64_t seed, bool balanced) {
  const size_t k = manifest.codecs.size();
  if (k < 2) {
    return absl::FailedPreconditionError("cross-codec triplets need >= 2 codecs");
  }
  if (manifest.FindSource(source_id) == nullptr) {
    return absl::NotFoundError(absl::StrCat("unknown source '", source_id, "'"));
  }
  if (count < 0 || count % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("cross-codec count ", count, " must be even and >= 0"));
  }
  std::vector<std::pair<size_t, size_t>> codec_pairs;
  for (size_t a = 0; a < k; ++a) {
    for (size_t b = a + 1; b < k; ++b) codec_pairs.emplace_back(a, b);
  }
  const size_t comparisons = static_cast<size_t>(count) / 2;
  if (balanced && comparisons % codec_pairs.size() != 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cross-codec count ", count, " is not divisible by 2 x ", codec_pairs.size(),
        " codec pairs"));
  }
  std::vector<size_t> per_pair(codec_pairs.size(), comparisons / codec_pairs.size());
  for (size_t i = 0; i < comparisons % codec_pairs.size(); ++i) ++per_pair[i];

  // The sample depends on the source only, so BTC and PTC share comparisons.
  Rng rng(DeriveSeed(seed, source_id));
  std::vector<Triplet> out;
  out.reserve(static_cast<size_t>(count));
  for (size_t p = 0; p < codec_pairs.size(); ++p) {
    const auto& ca = manifest.codecs[codec_pairs[p].first].id;
    const auto& cb = manifest.codecs[codec_pairs[p].second].id;
    const auto la = manifest.Ladder(source_id, ca);
    const auto lb = manifest.Ladder(source_id, cb);
    std::vector<std::pair<int, int>> combos;
    for (const auto* x : la) {
      for (const auto* y : lb) combos.emplace_back(x->level, y->level);
    }
    if (per_pair[p] > combos.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "codec pair (", ca, ", ", cb, ") has only ", combos.size(),
          " level combinations, ", per_pair[p], " requested"));
    }
    // Partial Fisher-Yates: the first per_pair[p] entries are the sample.
    for (size_t i = 0; i < per_pair[p]; ++i) {
      std::uniform_int_distribution<size_t> pick(i, combos.size() - 1);
      std::swap(combos[i], combos[pick(rng)]);
      const StimulusRef left{ca, combos[i].first};
      const StimulusRef right{cb, combos[i].second};
      out.push_back(Triplet::Make(method, source_id, left, right));
      out.push_back(Triplet::Make(method, source_id, right, left));
    }
  }
  return out;
}

}  // namespace aic::design
