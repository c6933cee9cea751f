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
#include "scale/model_io.h"

#include <map>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "common/file_io.h"
#include "common/status_macros.h"
#include "json.hpp"

namespace aic::scale {

using nlohmann::json;

const SourceModel* ModelFile::Find(const std::string& source_id) const {
  for (const auto& s : sources) {
    if (s.source_id == source_id) return &s;
  }
  return nullptr;
}

std::string SerializeModels(const ModelFile& models) {
  json doc;
  doc["format"] = "aic-model-v1";
  doc["k"] = models.k;
  doc["sources"] = json::array();
  for (const auto& m : models.sources) {
    json codecs = json::array();
    for (size_t i = 0; i < m.codec_ids.size(); ++i) {
      const auto& p = m.params[i];
      codecs.push_back({{"codec", m.codec_ids[i]},
                        {"alpha", p.alpha},
                        {"beta", p.beta},
                        {"gamma1", p.gamma1},
                        {"gamma2", p.gamma2}});
    }
    const auto& d = m.diagnostics;
    doc["sources"].push_back(
        {{"source", m.source_id},
         {"codecs", codecs},
         {"diagnostics",
          {{"negative_log_likelihood", d.negative_log_likelihood},
           {"iterations", d.iterations},
           {"restart", d.restart},
           {"converged", d.converged},
           {"used_fallback", d.used_fallback},
           {"termination", d.termination}}}});
  }
  return doc.dump(2) + "\n";
}

absl::StatusOr<ModelFile> ParseModels(const std::string& json_text) {
  ModelFile out;
  try {
    const json doc = json::parse(json_text);
    out.k = doc.value("k", 1.0);
    for (const auto& js : doc.at("sources")) {
      SourceModel m;
      m.source_id = js.at("source").get<std::string>();
      for (const auto& jc : js.at("codecs")) {
        m.codec_ids.push_back(jc.at("codec").get<std::string>());
        CodecParams p;
        p.alpha = jc.at("alpha").get<double>();
        p.beta = jc.at("beta").get<double>();
        p.gamma1 = jc.at("gamma1").get<double>();
        p.gamma2 = jc.at("gamma2").get<double>();
        if (!p.IsValid()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "model for (", m.source_id, ", ", m.codec_ids.back(), ") has invalid params"));
        }
        m.params.push_back(p);
      }
      if (js.contains("diagnostics")) {
        const auto& jd = js.at("diagnostics");
        m.diagnostics.negative_log_likelihood = jd.value("negative_log_likelihood", 0.0);
        m.diagnostics.iterations = jd.value("iterations", 0);
        m.diagnostics.restart = jd.value("restart", 0);
        m.diagnostics.converged = jd.value("converged", false);
        m.diagnostics.used_fallback = jd.value("used_fallback", false);
        m.diagnostics.termination = jd.value("termination", "");
      }
      out.sources.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("model file: ", e.what()));
  }
  return out;
}

absl::StatusOr<ModelFile> LoadModels(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseModels(text);
}

absl::Status WriteModels(const ModelFile& models, const std::filesystem::path& path) {
  return WriteFileAtomic(path, SerializeModels(models));
}

std::string SerializeBands(const std::vector<RdCurveBand>& bands) {
  std::string out = "#source_id\tcodec_id\tgrid_index\tbpp\testimate\tlower\tupper\n";
  for (const auto& b : bands) {
    for (size_t i = 0; i < b.bpp.size(); ++i) {
      absl::StrAppend(&out, absl::StrFormat("%s\t%s\t%d\t%.10g\t%.10g\t%.10g\t%.10g\n",
                                            b.source_id, b.codec_id, i, b.bpp[i],
                                            b.estimate[i], b.lower[i], b.upper[i]));
    }
  }
  return out;
}

absl::StatusOr<std::vector<RdCurveBand>> ParseBands(const std::string& text) {
  std::vector<RdCurveBand> out;
  std::map<std::pair<std::string, std::string>, size_t> index;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> f = absl::StrSplit(line, '\t');
    double v[4];
    int gi = 0;
    if (f.size() != 7 || !absl::SimpleAtoi(f[2], &gi) ||
        !absl::SimpleAtod(f[3], &v[0]) || !absl::SimpleAtod(f[4], &v[1]) ||
        !absl::SimpleAtod(f[5], &v[2]) || !absl::SimpleAtod(f[6], &v[3])) {
      return absl::InvalidArgumentError(absl::StrCat("bands line ", line_no, " malformed"));
    }
    const auto key = std::make_pair(std::string(f[0]), std::string(f[1]));
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) out.push_back(RdCurveBand{key.first, key.second, {}, {}, {}, {}});
    auto& b = out[it->second];
    b.bpp.push_back(v[0]);
    b.estimate.push_back(v[1]);
    b.lower.push_back(v[2]);
    b.upper.push_back(v[3]);
  }
  return out;
}

absl::StatusOr<std::vector<RdCurveBand>> LoadBands(const std::filesystem::path& path) {
  AIC_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseBands(text);
}

absl::Status WriteBands(const std::vector<RdCurveBand>& bands,
                        const std::filesystem::path& path) {
  return WriteFileAtomic(path, SerializeBands(bands));
}

std::string PlotData(const ModelFile& models, const std::vector<RdCurveBand>& bands,
                     const catalog::StudyManifest& manifest, int grid_size) {
  std::string out = "#source_id\tcodec_id\tseries\tbpp\tjnd\tlower\tupper\n";
  for (const auto& m : models.sources) {
    for (size_t c = 0; c < m.codec_ids.size(); ++c) {
      const auto& codec = m.codec_ids[c];
      const RdCurveBand* band = nullptr;
      for (const auto& b : bands) {
        if (b.source_id == m.source_id && b.codec_id == codec) band = &b;
      }
      if (band != nullptr) {
        for (size_t i = 0; i < band->bpp.size(); ++i) {
          absl::StrAppend(&out, absl::StrFormat("%s\t%s\tcurve\t%.10g\t%.10g\t%.10g\t%.10g\n",
                                                m.source_id, codec, band->bpp[i],
                                                band->estimate[i], band->lower[i],
                                                band->upper[i]));
        }
      } else {
        for (double r : BitrateGrid(manifest, m.source_id, codec, grid_size)) {
          absl::StrAppend(&out, absl::StrFormat("%s\t%s\tcurve\t%.10g\t%.10g\tNA\tNA\n",
                                                m.source_id, codec, r,
                                                RdDistortion(m.params[c], r)));
        }
      }
      for (const auto* st : manifest.Ladder(m.source_id, codec)) {
        absl::StrAppend(&out, absl::StrFormat("%s\t%s\tstimulus\t%.10g\t%.10g\tNA\tNA\n",
                                              m.source_id, codec, st->actual_bpp,
                                              RdDistortion(m.params[c], st->actual_bpp)));
      }
    }
  }
  return out;
}

}  // namespace aic::scale
