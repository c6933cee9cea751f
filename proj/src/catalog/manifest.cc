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
#include "catalog/manifest.h"

#include <algorithm>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "common/file_io.h"
#include "common/status_macros.h"
#include "json.hpp"

namespace aic::catalog {

using nlohmann::json;

double BitrateRule::Apply(const std::string& source_id,
                          double target_bpp) const {
  double off = offset;
  if (auto it = source_offsets.find(source_id); it != source_offsets.end()) {
    off = it->second;
  }
  return scale * target_bpp + off;
}

const SourceImage* StudyManifest::FindSource(const std::string& id) const {
  for (const auto& s : sources) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const CodecRecipe* StudyManifest::FindCodec(const std::string& id) const {
  for (const auto& c : codecs) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const Stimulus* StudyManifest::FindStimulus(const std::string& source_id,
                                            const std::string& codec_id,
                                            int level) const {
  for (const auto& s : stimuli) {
    if (s.source_id == source_id && s.codec_id == codec_id && s.level == level) {
      return &s;
    }
  }
  return nullptr;
}

std::vector<const Stimulus*> StudyManifest::Ladder(
    const std::string& source_id, const std::string& codec_id) const {
  std::vector<const Stimulus*> out;
  for (const auto& s : stimuli) {
    if (s.source_id == source_id && s.codec_id == codec_id) out.push_back(&s);
  }
  std::sort(out.begin(), out.end(),
            [](const Stimulus* a, const Stimulus* b) { return a->level < b->level; });
  return out;
}

std::filesystem::path StudyManifest::Resolve(
    const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

absl::Status StudyManifest::Validate() const {
  if (levels_per_codec < 1) {
    return absl::InvalidArgumentError("levels_per_codec must be >= 1");
  }
  if (responses_per_triplet_target < 1) {
    return absl::InvalidArgumentError(
        "responses_per_triplet_target must be >= 1");
  }
  std::set<std::string> source_ids;
  for (const auto& s : sources) {
    if (s.id.empty()) return absl::InvalidArgumentError("source with empty id");
    if (!source_ids.insert(s.id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate source id '", s.id, "'"));
    }
    if (s.width <= 0 || s.height <= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("source '", s.id, "' has non-positive dimensions"));
    }
  }
  std::set<std::string> codec_ids;
  for (const auto& c : codecs) {
    if (c.id.empty()) return absl::InvalidArgumentError("codec with empty id");
    if (!codec_ids.insert(c.id).second) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate codec id '", c.id, "'"));
    }
    if (c.quality_min >= c.quality_max) {
      return absl::InvalidArgumentError(
          absl::StrCat("codec '", c.id, "': quality_min must be < quality_max"));
    }
    if (!(c.bitrate_rule.scale > 0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("codec '", c.id, "': bitrate_rule scale must be > 0"));
    }
  }
  std::map<std::pair<std::string, std::string>, std::vector<const Stimulus*>> by_pair;
  for (const auto& st : stimuli) {
    std::string where = absl::StrCat("stimulus (", st.source_id, ", ", st.codec_id,
                                     ", level ", st.level, ")");
    if (!source_ids.count(st.source_id)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, " references unknown source '", st.source_id, "'"));
    }
    if (!codec_ids.count(st.codec_id)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, " references unknown codec '", st.codec_id, "'"));
    }
    if (st.level < 1 || st.level > levels_per_codec) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": level outside 1..", levels_per_codec));
    }
    if (!(st.actual_bpp > 0)) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": actual_bpp must be > 0"));
    }
    by_pair[{st.source_id, st.codec_id}].push_back(&st);
  }
  for (const auto& s : sources) {
    for (const auto& c : codecs) {
      auto it = by_pair.find({s.id, c.id});
      size_t n = it == by_pair.end() ? 0 : it->second.size();
      if (n != static_cast<size_t>(levels_per_codec)) {
        return absl::InvalidArgumentError(
            absl::StrCat("(source '", s.id, "', codec '", c.id, "') has ", n,
                         " stimuli, expected ", levels_per_codec));
      }
      auto ladder = it->second;
      std::sort(ladder.begin(), ladder.end(),
                [](const Stimulus* a, const Stimulus* b) { return a->level < b->level; });
      for (size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i]->level != static_cast<int>(i) + 1) {
          return absl::InvalidArgumentError(
              absl::StrCat("(source '", s.id, "', codec '", c.id,
                           "') levels must be exactly 1..", levels_per_codec));
        }
        if (i > 0 && !(ladder[i]->actual_bpp < ladder[i - 1]->actual_bpp)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "(source '", s.id, "', codec '", c.id, "') level ", ladder[i]->level,
              " does not have lower actual_bpp than level ", ladder[i - 1]->level));
        }
      }
    }
  }
  return absl::OkStatus();
}

namespace {

template <typename T>
absl::StatusOr<T> Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    return absl::InvalidArgumentError(absl::StrCat(where, ": missing field '", key, "'"));
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": field '", key, "': ", e.what()));
  }
}

template <typename T>
T FieldOr(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return obj.at(key).get<T>();
}

}  // namespace

absl::StatusOr<StudyManifest> ParseManifest(const std::string& json_text,
                                            const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(absl::StrCat("manifest parse error: ", e.what()));
  }
  if (!doc.is_object()) return absl::InvalidArgumentError("manifest must be an object");
  StudyManifest m;
  m.base_dir = base_dir;
  try {
    m.levels_per_codec = FieldOr(doc, "levels_per_codec", 5);
    m.responses_per_triplet_target = FieldOr(doc, "responses_per_triplet_target", 24);
    for (const auto& js : doc.value("sources", json::array())) {
      SourceImage s;
      AIC_ASSIGN_OR_RETURN(s.id, Field<std::string>(js, "id", "source"));
      s.width = FieldOr(js, "width", 840);
      s.height = FieldOr(js, "height", 944);
      s.color_space = FieldOr<std::string>(js, "color_space", "Rec2100PQ");
      s.file = FieldOr<std::string>(js, "file", "");
      m.sources.push_back(std::move(s));
    }
    for (const auto& jc : doc.value("codecs", json::array())) {
      CodecRecipe c;
      AIC_ASSIGN_OR_RETURN(c.id, Field<std::string>(jc, "id", "codec"));
      c.encode_command = FieldOr<std::string>(jc, "encode_command", "");
      if (jc.contains("quality_range")) {
        auto range = jc.at("quality_range").get<std::vector<int>>();
        if (range.size() != 2) {
          return absl::InvalidArgumentError(
              absl::StrCat("codec '", c.id, "': quality_range needs two values"));
        }
        c.quality_min = range[0];
        c.quality_max = range[1];
      }
      c.higher_quality_is_larger = FieldOr(jc, "higher_quality_is_larger", true);
      if (jc.contains("bitrate_rule")) {
        const json& jr = jc.at("bitrate_rule");
        c.bitrate_rule.scale = FieldOr(jr, "scale", 1.0);
        c.bitrate_rule.offset = FieldOr(jr, "offset", 0.0);
        c.bitrate_rule.source_offsets =
            FieldOr(jr, "source_offsets", std::map<std::string, double>{});
      }
      m.codecs.push_back(std::move(c));
    }
    for (const auto& jt : doc.value("stimuli", json::array())) {
      Stimulus st;
      AIC_ASSIGN_OR_RETURN(st.source_id, Field<std::string>(jt, "source", "stimulus"));
      AIC_ASSIGN_OR_RETURN(st.codec_id, Field<std::string>(jt, "codec", "stimulus"));
      AIC_ASSIGN_OR_RETURN(st.level, Field<int>(jt, "level", "stimulus"));
      AIC_ASSIGN_OR_RETURN(st.actual_bpp, Field<double>(jt, "actual_bpp", "stimulus"));
      st.target_bpp = FieldOr(jt, "target_bpp", st.actual_bpp);
      st.quality = FieldOr(jt, "quality", 0);
      st.file = FieldOr<std::string>(jt, "file", "");
      m.stimuli.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("manifest: ", e.what()));
  }
  AIC_RETURN_IF_ERROR(m.Validate());
  return m;
}

absl::StatusOr<StudyManifest> LoadManifest(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseManifest(text, path.parent_path());
}

std::string SerializeManifest(const StudyManifest& m) {
  json doc;
  doc["levels_per_codec"] = m.levels_per_codec;
  doc["responses_per_triplet_target"] = m.responses_per_triplet_target;
  doc["sources"] = json::array();
  for (const auto& s : m.sources) {
    doc["sources"].push_back({{"id", s.id},
                              {"width", s.width},
                              {"height", s.height},
                              {"color_space", s.color_space},
                              {"file", s.file.generic_string()}});
  }
  doc["codecs"] = json::array();
  for (const auto& c : m.codecs) {
    json jc = {{"id", c.id},
               {"encode_command", c.encode_command},
               {"quality_range", {c.quality_min, c.quality_max}},
               {"higher_quality_is_larger", c.higher_quality_is_larger}};
    if (!c.bitrate_rule.IsIdentity()) {
      jc["bitrate_rule"] = {{"scale", c.bitrate_rule.scale},
                            {"offset", c.bitrate_rule.offset},
                            {"source_offsets", c.bitrate_rule.source_offsets}};
    }
    doc["codecs"].push_back(std::move(jc));
  }
  doc["stimuli"] = json::array();
  for (const auto& st : m.stimuli) {
    doc["stimuli"].push_back({{"source", st.source_id},
                              {"codec", st.codec_id},
                              {"level", st.level},
                              {"target_bpp", st.target_bpp},
                              {"actual_bpp", st.actual_bpp},
                              {"quality", st.quality},
                              {"file", st.file.generic_string()}});
  }
  return doc.dump(2) + "\n";
}

absl::Status WriteManifest(const StudyManifest& manifest,
                           const std::filesystem::path& path) {
  return WriteFileAtomic(path, SerializeManifest(manifest));
}

}  // namespace aic::catalog
